#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tgif/params.hpp"
#include "tgif/tape.hpp"

namespace tgif {
namespace nn {

inline void create_linear(ParamStore& ps, const std::string& prefix, std::size_t in,
                          std::size_t out) {
  ps.create_xavier(prefix + ".w", in, out);
  ps.create_zeros(prefix + ".b", {1, out});
}

inline Var linear(BoundParams& bp, const std::string& prefix, Var x) {
  return ops::add(ops::matmul(x, bp(prefix + ".w")), bp(prefix + ".b"));
}

// Gated recurrent unit parameters: per gate an input kernel W [in, h], a
// recurrent kernel U [h, h] and a bias [1, h].
inline void create_gru(ParamStore& ps, const std::string& prefix, std::size_t in, std::size_t h) {
  for (const char* gate : {"z", "r", "h"}) {
    ps.create_xavier(prefix + ".w" + gate, in, h);
    ps.create_xavier(prefix + ".u" + gate, h, h);
    ps.create_zeros(prefix + ".b" + gate, {1, h});
  }
}

// z = sig(Wz x + Uz h + bz), r = sig(Wr x + Ur h + br),
// cand = tanh(Wh x + Uh (r*h) + bh), out = (1 - z)*h + z*cand
inline Var gru_cell(BoundParams& bp, const std::string& prefix, Var x, Var h_prev) {
  using namespace ops;
  Var z = sigmoid(add(add(matmul(x, bp(prefix + ".wz")), matmul(h_prev, bp(prefix + ".uz"))),
                      bp(prefix + ".bz")));
  Var r = sigmoid(add(add(matmul(x, bp(prefix + ".wr")), matmul(h_prev, bp(prefix + ".ur"))),
                      bp(prefix + ".br")));
  Var cand = tanh(add(add(matmul(x, bp(prefix + ".wh")), matmul(mul(r, h_prev), bp(prefix + ".uh"))),
                      bp(prefix + ".bh")));
  return add(mul(rsub_scalar(1.0, z), h_prev), mul(z, cand));
}

// Runs the cell over the rows of xs [t, in] from a zero initial state and
// stacks the t hidden states.
inline Var gru_sequence(BoundParams& bp, const std::string& prefix, Var xs, std::size_t hidden) {
  const std::size_t t = xs.val().rows();
  Tape& tape = *xs.tape;
  Var h = tape.constant(Tensor::zeros({1, hidden}));
  std::vector<Var> states;
  for (std::size_t i = 0; i < t; ++i) {
    Var x_i = ops::slice(xs, 0, i, 1);
    h = gru_cell(bp, prefix, x_i, h);
    states.push_back(h);
  }
  return ops::concat(states, 0);
}

// Standard sinusoidal position encoding table of shape [t, d].
inline Tensor sinusoidal_encoding(std::size_t t, std::size_t d) {
  Tensor pe = Tensor::zeros({t, d});
  for (std::size_t pos = 0; pos < t; ++pos) {
    for (std::size_t i = 0; i < d; i += 2) {
      const double angle =
          static_cast<double>(pos) /
          std::pow(10000.0, static_cast<double>(i) / static_cast<double>(d));
      pe.at(pos, i) = std::sin(angle);
      if (i + 1 < d) pe.at(pos, i + 1) = std::cos(angle);
    }
  }
  return pe;
}

inline void create_transformer_layer(ParamStore& ps, const std::string& prefix, std::size_t d,
                                     std::size_t d_ff) {
  for (const char* m : {"q", "k", "v", "o"}) {
    ps.create_xavier(prefix + ".attn.w" + m, d, d);
    ps.create_zeros(prefix + ".attn.b" + m, {1, d});
  }
  ps.create_full(prefix + ".ln1.g", {1, d}, 1.0);
  ps.create_zeros(prefix + ".ln1.b", {1, d});
  ps.create_full(prefix + ".ln2.g", {1, d}, 1.0);
  ps.create_zeros(prefix + ".ln2.b", {1, d});
  create_linear(ps, prefix + ".ffn.1", d, d_ff);
  create_linear(ps, prefix + ".ffn.2", d_ff, d);
}

// Post-norm encoder layer: multi-head self-attention with residual and layer
// norm, then a position-wise feed-forward block with residual and layer norm.
inline Var transformer_layer(BoundParams& bp, const std::string& prefix, Var x, int heads) {
  using namespace ops;
  const std::size_t d = x.val().cols();
  if (d % static_cast<std::size_t>(heads) != 0) {
    fail_runtime("transformer: model width " + std::to_string(d) + " not divisible by " +
                 std::to_string(heads) + " heads");
  }
  const std::size_t dh = d / static_cast<std::size_t>(heads);
  Var q = add(matmul(x, bp(prefix + ".attn.wq")), bp(prefix + ".attn.bq"));
  Var k = add(matmul(x, bp(prefix + ".attn.wk")), bp(prefix + ".attn.bk"));
  Var v = add(matmul(x, bp(prefix + ".attn.wv")), bp(prefix + ".attn.bv"));
  std::vector<Var> ctx;
  for (int h = 0; h < heads; ++h) {
    Var qh = slice(q, 1, static_cast<std::size_t>(h) * dh, dh);
    Var kh = slice(k, 1, static_cast<std::size_t>(h) * dh, dh);
    Var vh = slice(v, 1, static_cast<std::size_t>(h) * dh, dh);
    Var scores = mul_scalar(matmul(qh, transpose(kh)), 1.0 / std::sqrt(static_cast<double>(dh)));
    Var attn = softmax(scores, 1);
    ctx.push_back(matmul(attn, vh));
  }
  Var merged = heads == 1 ? ctx[0] : concat(ctx, 1);
  Var attended = add(matmul(merged, bp(prefix + ".attn.wo")), bp(prefix + ".attn.bo"));
  Var n1 = layer_norm(add(x, attended), bp(prefix + ".ln1.g"), bp(prefix + ".ln1.b"));
  Var ffn = linear(bp, prefix + ".ffn.2", relu(linear(bp, prefix + ".ffn.1", n1)));
  return layer_norm(add(n1, ffn), bp(prefix + ".ln2.g"), bp(prefix + ".ln2.b"));
}

inline void create_transformer(ParamStore& ps, const std::string& prefix, int layers,
                               std::size_t d, std::size_t d_ff) {
  for (int l = 0; l < layers; ++l) {
    create_transformer_layer(ps, prefix + ".l" + std::to_string(l), d, d_ff);
  }
}

inline Var transformer_encoder(BoundParams& bp, const std::string& prefix, Var x, int layers,
                               int heads, bool positional) {
  if (positional) {
    Tensor pe = sinusoidal_encoding(x.val().rows(), x.val().cols());
    x = ops::add(x, x.tape->constant(std::move(pe)));
  }
  for (int l = 0; l < layers; ++l) {
    x = transformer_layer(bp, prefix + ".l" + std::to_string(l), x, heads);
  }
  return x;
}

}  // namespace nn
}  // namespace tgif
