#pragma once

#include <vector>

#include "tgif/tape.hpp"

namespace tgif {

// Masked multi-label focal loss, mean over the allowed (utterance, label)
// cells. Masked cells contribute nothing to the value or the gradient. With
// gamma = 0 and alpha = 0.5 this is exactly half the mean binary
// cross-entropy over allowed cells.
inline Var focal_loss(Tape& tape, Var probs, const Tensor& gold,
                      const std::vector<bool>& mask, double gamma, double alpha) {
  using namespace ops;
  const Tensor& p = probs.val();
  check_rank2(p, "focal_loss");
  require(gold.shape == p.shape, "focal_loss: gold shape must match probabilities");
  require(mask.size() == p.cols(), "focal_loss: mask length must match label count");

  const std::size_t rows = p.rows();
  const std::size_t cols = p.cols();
  std::size_t allowed = 0;
  for (bool b : mask) allowed += b ? 1 : 0;
  allowed *= rows;
  require(allowed > 0, "focal_loss: no allowed cells");

  // p_t = gold ? p : 1 - p, as an affine map so the graph stays simple
  Tensor c1 = Tensor::zeros({rows, cols});
  Tensor c2 = Tensor::zeros({rows, cols});
  Tensor weight = Tensor::zeros({rows, cols});
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double y = gold.at(i, j);
      require(y == 0.0 || y == 1.0, "focal_loss: gold entries must be 0 or 1");
      c1.at(i, j) = 1.0 - y;
      c2.at(i, j) = 2.0 * y - 1.0;
      weight.at(i, j) = mask[j] ? (alpha * y + (1.0 - alpha) * (1.0 - y)) : 0.0;
    }
  }
  Var p_t = add(tape.constant(std::move(c1)), mul(tape.constant(std::move(c2)), probs));
  Var focal = mul(pow_const(rsub_scalar(1.0, p_t), gamma), log_clamped(p_t));
  Var total = sum_all(mul(tape.constant(std::move(weight)), focal));
  return mul_scalar(total, -1.0 / static_cast<double>(allowed));
}

}  // namespace tgif
