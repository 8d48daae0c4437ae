#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

#include "tgif/params.hpp"
#include "tgif/tape.hpp"

namespace tgif {

struct GradCheckResult {
  double max_rel_err = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coords_checked = 0;
};

// Compares the tape gradient of a scalar loss against centered finite
// differences. make_loss must rebuild the same graph from the current
// parameter values on every call. Parameters with at most dense_limit
// entries are checked exhaustively, larger ones on sample seeded-random
// coordinates. The relative-error denominator is floored so finite-
// difference rounding noise on near-zero gradients does not dominate.
inline GradCheckResult grad_check(ParamStore& ps,
                                  const std::function<Var(Tape&, BoundParams&)>& make_loss,
                                  double eps = 1e-5, std::size_t dense_limit = 10000,
                                  std::size_t sample = 256, std::uint64_t seed = 0,
                                  double denom_floor = 1e-6) {
  std::map<std::string, Tensor> analytic;
  {
    Tape tape;
    BoundParams bp(ps, tape);
    Var loss = make_loss(tape, bp);
    tape.backward(loss);
    analytic = bp.grads();
  }
  auto eval = [&] {
    Tape tape;
    BoundParams bp(ps, tape);
    return make_loss(tape, bp).val().data[0];
  };

  GradCheckResult res;
  for (auto& [name, tensor] : ps.all()) {
    const Tensor& grad = analytic.at(name);
    std::vector<std::size_t> coords;
    if (tensor.size() <= dense_limit) {
      coords.resize(tensor.size());
      for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
    } else {
      Rng rng(Rng::mix(seed, Rng::hash_name(name)));
      for (std::size_t i = 0; i < sample; ++i) coords.push_back(rng.below(tensor.size()));
    }
    for (std::size_t c : coords) {
      const double saved = tensor.data[c];
      tensor.data[c] = saved + eps;
      const double up = eval();
      tensor.data[c] = saved - eps;
      const double down = eval();
      tensor.data[c] = saved;
      const double fd = (up - down) / (2.0 * eps);
      const double ad = grad.data[c];
      const double rel = std::fabs(ad - fd) / std::max(denom_floor, std::fabs(ad) + std::fabs(fd));
      ++res.coords_checked;
      if (rel > res.max_rel_err) {
        res.max_rel_err = rel;
        res.worst_param = name;
        res.worst_index = c;
        res.worst_analytic = ad;
        res.worst_numeric = fd;
      }
    }
  }
  return res;
}

}  // namespace tgif
