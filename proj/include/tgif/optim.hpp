#pragma once

#include <cmath>
#include <map>
#include <string>

#include "tgif/params.hpp"

namespace tgif {

// Adam with bias correction. Parameters update in name order and the step
// counter is global, so a run is reproducible from the seed alone.
class Adam {
 public:
  explicit Adam(ParamStore& ps, double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : ps_(ps), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    require(lr > 0.0, "adam: lr must be positive");
    require(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0,
            "adam: betas must lie in [0, 1)");
    for (auto& [name, tensor] : ps.all()) {
      m_.emplace(name, Tensor::zeros(tensor.shape));
      v_.emplace(name, Tensor::zeros(tensor.shape));
    }
  }

  void step(const std::map<std::string, Tensor>& grads) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (auto& [name, tensor] : ps_.all()) {
      auto git = grads.find(name);
      require(git != grads.end(), "adam: missing gradient for " + name);
      const Tensor& g = git->second;
      require(g.shape == tensor.shape, "adam: gradient shape mismatch for " + name);
      Tensor& m = m_.at(name);
      Tensor& v = v_.at(name);
      for (std::size_t i = 0; i < tensor.size(); ++i) {
        const double gi = g.data[i];
        m.data[i] = beta1_ * m.data[i] + (1.0 - beta1_) * gi;
        v.data[i] = beta2_ * v.data[i] + (1.0 - beta2_) * gi * gi;
        const double mhat = m.data[i] / bc1;
        const double vhat = v.data[i] / bc2;
        tensor.data[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
      }
    }
  }

  long long steps() const { return t_; }

 private:
  ParamStore& ps_;
  double lr_, beta1_, beta2_, eps_;
  long long t_ = 0;
  std::map<std::string, Tensor> m_, v_;
};

}  // namespace tgif
