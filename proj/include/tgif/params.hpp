#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "tgif/rng.hpp"
#include "tgif/tape.hpp"
#include "tgif/tensor.hpp"

namespace tgif {

// Named trainable parameters. Iteration is lexicographic by name (std::map),
// which fixes the order of every gradient accumulation and optimizer sweep.
// Initialization draws a private stream per parameter name, so values do not
// depend on creation order.
class ParamStore {
 public:
  explicit ParamStore(std::uint64_t seed = 0) : seed_(seed) {}

  Tensor& create_zeros(const std::string& name, std::vector<std::size_t> shape) {
    return insert(name, Tensor::zeros(std::move(shape)));
  }

  Tensor& create_full(const std::string& name, std::vector<std::size_t> shape, double value) {
    return insert(name, Tensor::full(std::move(shape), value));
  }

  // Glorot/Xavier uniform over [-limit, limit], limit = sqrt(6 / (fan_in + fan_out)).
  Tensor& create_xavier(const std::string& name, std::size_t rows, std::size_t cols) {
    Tensor t = Tensor::zeros({rows, cols});
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Rng rng(Rng::mix(seed_, Rng::hash_name(name)));
    for (double& x : t.data) x = rng.uniform(-limit, limit);
    return insert(name, std::move(t));
  }

  bool has(const std::string& name) const { return params_.count(name) != 0; }

  Tensor& at(const std::string& name) {
    auto it = params_.find(name);
    if (it == params_.end()) fail_runtime("unknown parameter: " + name);
    return it->second;
  }

  const Tensor& at(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) fail_runtime("unknown parameter: " + name);
    return it->second;
  }

  std::map<std::string, Tensor>& all() { return params_; }
  const std::map<std::string, Tensor>& all() const { return params_; }

  std::size_t total_size() const {
    std::size_t n = 0;
    for (const auto& [_, t] : params_) n += t.size();
    return n;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  Tensor& insert(const std::string& name, Tensor t) {
    if (has(name)) fail_runtime("duplicate parameter: " + name);
    t.requires_grad = true;
    auto [it, _] = params_.emplace(name, std::move(t));
    return it->second;
  }

  std::uint64_t seed_;
  std::map<std::string, Tensor> params_;
};

// Binds parameters to leaves of one tape, lazily per name, and collects their
// gradients afterwards. Parameters never touched by the forward pass report
// zero gradients of matching shape.
class BoundParams {
 public:
  BoundParams(ParamStore& store, Tape& tape) : store_(&store), tape_(&tape) {}

  Var operator()(const std::string& name) {
    auto it = bound_.find(name);
    if (it != bound_.end()) return it->second;
    Var v = tape_->leaf(store_->at(name));
    bound_.emplace(name, v);
    return v;
  }

  std::map<std::string, Tensor> grads() const {
    std::map<std::string, Tensor> out;
    for (const auto& [name, tensor] : store_->all()) {
      auto it = bound_.find(name);
      if (it != bound_.end() && tape_->has_grad(it->second)) {
        out.emplace(name, tape_->grad(it->second));
      } else {
        out.emplace(name, Tensor::zeros(tensor.shape));
      }
    }
    return out;
  }

 private:
  ParamStore* store_;
  Tape* tape_;
  std::map<std::string, Var> bound_;
};

}  // namespace tgif
