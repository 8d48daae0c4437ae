#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "tgif/error.hpp"

namespace tgif {

// Dense row-major 64-bit float tensor. Graph operations work on rank-2 shapes;
// scalars are [1, 1] and row vectors [1, n].
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;
  bool requires_grad = false;

  Tensor() = default;

  static Tensor zeros(std::vector<std::size_t> shape) {
    Tensor t;
    t.shape = std::move(shape);
    t.data.assign(t.count(t.shape), 0.0);
    return t;
  }

  static Tensor full(std::vector<std::size_t> shape, double value) {
    Tensor t = zeros(std::move(shape));
    for (double& x : t.data) x = value;
    return t;
  }

  static Tensor scalar(double value) { return full({1, 1}, value); }

  static Tensor row(std::vector<double> values) {
    Tensor t;
    t.shape = {1, values.size()};
    t.data = std::move(values);
    return t;
  }

  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
    if (values.size() != rows * cols) fail_runtime("tensor: data does not match shape");
    Tensor t;
    t.shape = {rows, cols};
    t.data = std::move(values);
    return t;
  }

  static std::size_t count(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
  }

  std::size_t size() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }
  std::size_t rows() const { return shape.at(0); }
  std::size_t cols() const { return shape.at(1); }

  double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  bool operator==(const Tensor& o) const { return shape == o.shape && data == o.data; }

  static std::string shape_str(const std::vector<std::size_t>& shape) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
    os << "]";
    return os.str();
  }

  std::string shape_str() const { return shape_str(shape); }
};

inline void check_rank2(const Tensor& t, const char* op) {
  if (t.rank() != 2) fail_runtime(std::string(op) + ": expected a rank-2 tensor, got " + t.shape_str());
}

[[noreturn]] inline void shape_mismatch(const char* op, const Tensor& a, const Tensor& b) {
  fail_runtime(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " + b.shape_str());
}

}  // namespace tgif
