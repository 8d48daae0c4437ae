#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "tgif/rng.hpp"
#include "tgif/tensor.hpp"

namespace tgif {

class Tape;

// Handle into a Tape's node list. Cheap to copy; valid for the tape's lifetime.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  const Tensor& val() const;
};

// Reverse-mode gradient record for one forward pass. Nodes are appended in
// evaluation order, which is already a topological order, so backward() is a
// single reverse sweep visiting each node once.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Tensor value) {
    const bool rg = value.requires_grad;
    return push(std::move(value), rg, {}, nullptr);
  }

  Var constant(Tensor value) {
    value.requires_grad = false;
    return push(std::move(value), false, {}, nullptr);
  }

  const Tensor& value(Var v) const { return nodes_[v.id].value; }

  bool has_grad(Var v) const {
    return v.id < static_cast<int>(grads_.size()) && !grads_[v.id].data.empty();
  }

  Tensor grad(Var v) const {
    if (has_grad(v)) return grads_[v.id];
    return Tensor::zeros(nodes_[v.id].value.shape);
  }

  void backward(Var loss) {
    const Tensor& lv = value(loss);
    if (lv.size() != 1) fail_runtime("backward: loss must be a scalar, got " + lv.shape_str());
    grads_.assign(nodes_.size(), Tensor{});
    accumulate(loss.id, Tensor::full(lv.shape, 1.0));
    for (int i = loss.id; i >= 0; --i) {
      if (grads_[i].data.empty() || !nodes_[i].backward) continue;
      nodes_[i].backward(grads_[i]);
    }
  }

  // Used by op implementations to push gradient onto a parent node.
  void accumulate(int id, const Tensor& g) {
    if (!nodes_[id].requires_grad) return;
    Tensor& slot = grads_[id];
    if (slot.data.empty()) {
      slot = Tensor::zeros(nodes_[id].value.shape);
    }
    for (std::size_t i = 0; i < slot.data.size(); ++i) slot.data[i] += g.data[i];
  }

  Var push(Tensor value, bool requires_grad, std::vector<int> parents,
           std::function<void(const Tensor&)> backward) {
    Node n;
    n.value = std::move(value);
    n.value.requires_grad = requires_grad;
    n.requires_grad = requires_grad;
    n.parents = std::move(parents);
    n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return Var{this, static_cast<int>(nodes_.size()) - 1};
  }

  bool requires_grad(Var v) const { return nodes_[v.id].requires_grad; }

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    bool requires_grad = false;
    std::vector<int> parents;
    std::function<void(const Tensor&)> backward;
  };

  std::vector<Node> nodes_;
  std::vector<Tensor> grads_;
};

inline const Tensor& Var::val() const { return tape->value(*this); }

namespace ops {

inline bool any_grad(std::initializer_list<Var> vars) {
  for (const Var& v : vars) {
    if (v.tape->requires_grad(v)) return true;
  }
  return false;
}

inline Var matmul(Var a, Var b) {
  const Tensor& A = a.val();
  const Tensor& B = b.val();
  check_rank2(A, "matmul");
  check_rank2(B, "matmul");
  if (A.cols() != B.rows()) shape_mismatch("matmul", A, B);
  const std::size_t m = A.rows(), k = A.cols(), n = B.cols();
  Tensor C = Tensor::zeros({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = A.at(i, p);
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) C.at(i, j) += av * B.at(p, j);
    }
  }
  Tape* t = a.tape;
  const bool rg = any_grad({a, b});
  return t->push(std::move(C), rg, {a.id, b.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a, b, m, k, n](const Tensor& g) {
        const Tensor& A = a.val();
        const Tensor& B = b.val();
        if (t->requires_grad(a)) {
          Tensor dA = Tensor::zeros({m, k});
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
              const double gv = g.at(i, j);
              if (gv == 0.0) continue;
              for (std::size_t p = 0; p < k; ++p) dA.at(i, p) += gv * B.at(p, j);
            }
          }
          t->accumulate(a.id, dA);
        }
        if (t->requires_grad(b)) {
          Tensor dB = Tensor::zeros({k, n});
          for (std::size_t p = 0; p < k; ++p) {
            for (std::size_t i = 0; i < m; ++i) {
              const double av = A.at(i, p);
              if (av == 0.0) continue;
              for (std::size_t j = 0; j < n; ++j) dB.at(p, j) += av * g.at(i, j);
            }
          }
          t->accumulate(b.id, dB);
        }
      }));
}

// add supports equal shapes and row-broadcast of b when b has one row.
inline Var add(Var a, Var b) {
  const Tensor& A = a.val();
  const Tensor& B = b.val();
  check_rank2(A, "add");
  check_rank2(B, "add");
  const bool bcast = B.rows() == 1 && A.rows() > 1 && A.cols() == B.cols();
  if (!bcast && !A.same_shape(B)) shape_mismatch("add", A, B);
  Tensor C = A;
  C.requires_grad = false;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) C.at(i, j) += B.at(bcast ? 0 : i, j);
  }
  Tape* t = a.tape;
  const bool rg = any_grad({a, b});
  return t->push(std::move(C), rg, {a.id, b.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a, b, bcast](const Tensor& g) {
        if (t->requires_grad(a)) t->accumulate(a.id, g);
        if (t->requires_grad(b)) {
          if (!bcast) {
            t->accumulate(b.id, g);
          } else {
            Tensor db = Tensor::zeros({1, g.cols()});
            for (std::size_t i = 0; i < g.rows(); ++i) {
              for (std::size_t j = 0; j < g.cols(); ++j) db.at(0, j) += g.at(i, j);
            }
            t->accumulate(b.id, db);
          }
        }
      }));
}

inline Var sub(Var a, Var b) {
  const Tensor& A = a.val();
  const Tensor& B = b.val();
  if (!A.same_shape(B)) shape_mismatch("sub", A, B);
  Tensor C = A;
  C.requires_grad = false;
  for (std::size_t i = 0; i < C.data.size(); ++i) C.data[i] -= B.data[i];
  Tape* t = a.tape;
  const bool rg = any_grad({a, b});
  return t->push(std::move(C), rg, {a.id, b.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a, b](const Tensor& g) {
        if (t->requires_grad(a)) t->accumulate(a.id, g);
        if (t->requires_grad(b)) {
          Tensor neg = g;
          for (double& x : neg.data) x = -x;
          t->accumulate(b.id, neg);
        }
      }));
}

inline Var mul(Var a, Var b) {
  const Tensor& A = a.val();
  const Tensor& B = b.val();
  if (!A.same_shape(B)) shape_mismatch("mul", A, B);
  Tensor C = A;
  C.requires_grad = false;
  for (std::size_t i = 0; i < C.data.size(); ++i) C.data[i] *= B.data[i];
  Tape* t = a.tape;
  const bool rg = any_grad({a, b});
  return t->push(std::move(C), rg, {a.id, b.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a, b](const Tensor& g) {
        if (t->requires_grad(a)) {
          Tensor da = g;
          const Tensor& B = b.val();
          for (std::size_t i = 0; i < da.data.size(); ++i) da.data[i] *= B.data[i];
          t->accumulate(a.id, da);
        }
        if (t->requires_grad(b)) {
          Tensor db = g;
          const Tensor& A = a.val();
          for (std::size_t i = 0; i < db.data.size(); ++i) db.data[i] *= A.data[i];
          t->accumulate(b.id, db);
        }
      }));
}

inline Var mul_scalar(Var a, double c) {
  Tensor C = a.val();
  C.requires_grad = false;
  for (double& x : C.data) x *= c;
  Tape* t = a.tape;
  const bool rg = t->requires_grad(a);
  return t->push(std::move(C), rg, {a.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a, c](const Tensor& g) {
        Tensor da = g;
        for (double& x : da.data) x *= c;
        t->accumulate(a.id, da);
      }));
}

inline Var add_scalar(Var a, double c) {
  Tensor C = a.val();
  C.requires_grad = false;
  for (double& x : C.data) x += c;
  Tape* t = a.tape;
  const bool rg = t->requires_grad(a);
  return t->push(std::move(C), rg, {a.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a](const Tensor& g) { t->accumulate(a.id, g); }));
}

// c - a
inline Var rsub_scalar(double c, Var a) {
  Tensor C = a.val();
  C.requires_grad = false;
  for (double& x : C.data) x = c - x;
  Tape* t = a.tape;
  const bool rg = t->requires_grad(a);
  return t->push(std::move(C), rg, {a.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a](const Tensor& g) {
        Tensor da = g;
        for (double& x : da.data) x = -x;
        t->accumulate(a.id, da);
      }));
}

inline Var neg(Var a) { return mul_scalar(a, -1.0); }

inline Var transpose(Var a) {
  const Tensor& A = a.val();
  check_rank2(A, "transpose");
  const std::size_t m = A.rows(), n = A.cols();
  Tensor C = Tensor::zeros({n, m});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) C.at(j, i) = A.at(i, j);
  }
  Tape* t = a.tape;
  const bool rg = t->requires_grad(a);
  return t->push(std::move(C), rg, {a.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a, m, n](const Tensor& g) {
        Tensor da = Tensor::zeros({m, n});
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < n; ++j) da.at(i, j) = g.at(j, i);
        }
        t->accumulate(a.id, da);
      }));
}

inline Var concat(const std::vector<Var>& vars, int axis) {
  if (vars.empty()) fail_runtime("concat: no inputs");
  if (axis != 0 && axis != 1) fail_runtime("concat: axis must be 0 or 1");
  Tape* t = vars[0].tape;
  const Tensor& first = vars[0].val();
  check_rank2(first, "concat");
  std::size_t rows = first.rows(), cols = first.cols();
  for (std::size_t i = 1; i < vars.size(); ++i) {
    const Tensor& v = vars[i].val();
    check_rank2(v, "concat");
    if (axis == 0) {
      if (v.cols() != cols) shape_mismatch("concat", first, v);
      rows += v.rows();
    } else {
      if (v.rows() != rows) shape_mismatch("concat", first, v);
      cols += v.cols();
    }
  }
  Tensor C = Tensor::zeros({rows, cols});
  std::size_t off = 0;
  for (const Var& v : vars) {
    const Tensor& V = v.val();
    if (axis == 0) {
      for (std::size_t i = 0; i < V.rows(); ++i) {
        for (std::size_t j = 0; j < V.cols(); ++j) C.at(off + i, j) = V.at(i, j);
      }
      off += V.rows();
    } else {
      for (std::size_t i = 0; i < V.rows(); ++i) {
        for (std::size_t j = 0; j < V.cols(); ++j) C.at(i, off + j) = V.at(i, j);
      }
      off += V.cols();
    }
  }
  bool rg = false;
  std::vector<int> parents;
  for (const Var& v : vars) {
    parents.push_back(v.id);
    rg = rg || t->requires_grad(v);
  }
  std::vector<Var> captured = vars;
  return t->push(std::move(C), rg, std::move(parents), !rg ? nullptr
      : std::function<void(const Tensor&)>([t, captured, axis](const Tensor& g) {
          std::size_t off = 0;
          for (const Var& v : captured) {
            const Tensor& V = v.val();
            if (t->requires_grad(v)) {
              Tensor dv = Tensor::zeros(V.shape);
              for (std::size_t i = 0; i < V.rows(); ++i) {
                for (std::size_t j = 0; j < V.cols(); ++j) {
                  dv.at(i, j) = axis == 0 ? g.at(off + i, j) : g.at(i, off + j);
                }
              }
              t->accumulate(v.id, dv);
            }
            off += axis == 0 ? V.rows() : V.cols();
          }
        }));
}

inline Var slice(Var a, int axis, std::size_t start, std::size_t len) {
  const Tensor& A = a.val();
  check_rank2(A, "slice");
  if (axis != 0 && axis != 1) fail_runtime("slice: axis must be 0 or 1");
  const std::size_t extent = axis == 0 ? A.rows() : A.cols();
  if (start + len > extent) fail_runtime("slice: range out of bounds for " + A.shape_str());
  Tensor C = axis == 0 ? Tensor::zeros({len, A.cols()}) : Tensor::zeros({A.rows(), len});
  for (std::size_t i = 0; i < C.rows(); ++i) {
    for (std::size_t j = 0; j < C.cols(); ++j) {
      C.at(i, j) = axis == 0 ? A.at(start + i, j) : A.at(i, start + j);
    }
  }
  Tape* t = a.tape;
  const bool rg = t->requires_grad(a);
  return t->push(std::move(C), rg, {a.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a, axis, start](const Tensor& g) {
        Tensor da = Tensor::zeros(a.val().shape);
        for (std::size_t i = 0; i < g.rows(); ++i) {
          for (std::size_t j = 0; j < g.cols(); ++j) {
            if (axis == 0) {
              da.at(start + i, j) = g.at(i, j);
            } else {
              da.at(i, start + j) = g.at(i, j);
            }
          }
        }
        t->accumulate(a.id, da);
      }));
}

// rows of a selected by index; indices may repeat (grad scatter-adds)
inline Var gather_rows(Var a, std::vector<std::size_t> indices) {
  const Tensor& A = a.val();
  check_rank2(A, "gather_rows");
  for (std::size_t idx : indices) {
    if (idx >= A.rows()) fail_runtime("gather_rows: index out of range for " + A.shape_str());
  }
  Tensor C = Tensor::zeros({indices.size(), A.cols()});
  for (std::size_t i = 0; i < indices.size(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) C.at(i, j) = A.at(indices[i], j);
  }
  Tape* t = a.tape;
  const bool rg = t->requires_grad(a);
  return t->push(std::move(C), rg, {a.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a, indices](const Tensor& g) {
        Tensor da = Tensor::zeros(a.val().shape);
        for (std::size_t i = 0; i < indices.size(); ++i) {
          for (std::size_t j = 0; j < g.cols(); ++j) da.at(indices[i], j) += g.at(i, j);
        }
        t->accumulate(a.id, da);
      }));
}

// token embedding is a row gather over the embedding table
inline Var embedding_lookup(Var table, const std::vector<std::size_t>& token_ids) {
  return gather_rows(table, token_ids);
}

inline Var repeat_rows(Var a, std::size_t times) {
  const Tensor& A = a.val();
  check_rank2(A, "repeat_rows");
  if (A.rows() != 1) fail_runtime("repeat_rows: input must have one row, got " + A.shape_str());
  Tensor C = Tensor::zeros({times, A.cols()});
  for (std::size_t i = 0; i < times; ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) C.at(i, j) = A.at(0, j);
  }
  Tape* t = a.tape;
  const bool rg = t->requires_grad(a);
  return t->push(std::move(C), rg, {a.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a](const Tensor& g) {
        Tensor da = Tensor::zeros({1, g.cols()});
        for (std::size_t i = 0; i < g.rows(); ++i) {
          for (std::size_t j = 0; j < g.cols(); ++j) da.at(0, j) += g.at(i, j);
        }
        t->accumulate(a.id, da);
      }));
}

inline Var sum_all(Var a) {
  const Tensor& A = a.val();
  double s = 0.0;
  for (double x : A.data) s += x;
  Tape* t = a.tape;
  const bool rg = t->requires_grad(a);
  return t->push(Tensor::scalar(s), rg, {a.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a](const Tensor& g) {
        t->accumulate(a.id, Tensor::full(a.val().shape, g.data[0]));
      }));
}

inline Var mean_all(Var a) {
  return mul_scalar(sum_all(a), 1.0 / static_cast<double>(a.val().size()));
}

// axis 0 collapses rows to [1, n]; axis 1 collapses cols to [m, 1]
inline Var sum_axis(Var a, int axis) {
  const Tensor& A = a.val();
  check_rank2(A, "sum_axis");
  if (axis != 0 && axis != 1) fail_runtime("sum_axis: axis must be 0 or 1");
  Tensor C = axis == 0 ? Tensor::zeros({1, A.cols()}) : Tensor::zeros({A.rows(), 1});
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) {
      if (axis == 0) {
        C.at(0, j) += A.at(i, j);
      } else {
        C.at(i, 0) += A.at(i, j);
      }
    }
  }
  Tape* t = a.tape;
  const bool rg = t->requires_grad(a);
  return t->push(std::move(C), rg, {a.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a, axis](const Tensor& g) {
        const Tensor& A = a.val();
        Tensor da = Tensor::zeros(A.shape);
        for (std::size_t i = 0; i < A.rows(); ++i) {
          for (std::size_t j = 0; j < A.cols(); ++j) {
            da.at(i, j) = axis == 0 ? g.at(0, j) : g.at(i, 0);
          }
        }
        t->accumulate(a.id, da);
      }));
}

inline Var mean_axis(Var a, int axis) {
  const Tensor& A = a.val();
  const double extent = static_cast<double>(axis == 0 ? A.rows() : A.cols());
  return mul_scalar(sum_axis(a, axis), 1.0 / extent);
}

template <typename F, typename DF>
Var unary_elementwise(Var a, const char* name, F f, DF df) {
  (void)name;
  Tensor C = a.val();
  C.requires_grad = false;
  for (double& x : C.data) x = f(x);
  Tape* t = a.tape;
  const bool rg = t->requires_grad(a);
  // df receives (input, output) so implementations can reuse whichever is cheaper
  const Tensor out_copy = C;
  return t->push(std::move(C), rg, {a.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a, df, out_copy](const Tensor& g) {
        const Tensor& A = a.val();
        Tensor da = g;
        for (std::size_t i = 0; i < da.data.size(); ++i) {
          da.data[i] *= df(A.data[i], out_copy.data[i]);
        }
        t->accumulate(a.id, da);
      }));
}

inline Var sigmoid(Var a) {
  return unary_elementwise(
      a, "sigmoid", [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
      [](double, double y) { return y * (1.0 - y); });
}

inline Var tanh(Var a) {
  return unary_elementwise(
      a, "tanh", [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

inline Var relu(Var a) {
  return unary_elementwise(
      a, "relu", [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

inline Var pow_const(Var a, double p) {
  if (p == 0.0) {
    // exactly one with zero gradient, so focal gamma = 0 degenerates cleanly
    return a.tape->constant(Tensor::full(a.val().shape, 1.0));
  }
  return unary_elementwise(
      a, "pow_const", [p](double x) { return std::pow(x, p); },
      [p](double x, double) { return p * std::pow(x, p - 1.0); });
}

inline constexpr double kLogFloor = 1e-12;

inline Var log_clamped(Var a) {
  return unary_elementwise(
      a, "log_clamped", [](double x) { return std::log(x < kLogFloor ? kLogFloor : x); },
      [](double x, double) { return x < kLogFloor ? 0.0 : 1.0 / x; });
}

inline Var softmax_rows(Var a) {
  const Tensor& A = a.val();
  check_rank2(A, "softmax");
  Tensor C = Tensor::zeros(A.shape);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    double mx = A.at(i, 0);
    for (std::size_t j = 1; j < A.cols(); ++j) mx = std::max(mx, A.at(i, j));
    double denom = 0.0;
    for (std::size_t j = 0; j < A.cols(); ++j) {
      const double e = std::exp(A.at(i, j) - mx);
      C.at(i, j) = e;
      denom += e;
    }
    for (std::size_t j = 0; j < A.cols(); ++j) C.at(i, j) /= denom;
  }
  Tape* t = a.tape;
  const bool rg = t->requires_grad(a);
  const Tensor out_copy = C;
  return t->push(std::move(C), rg, {a.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a, out_copy](const Tensor& g) {
        Tensor da = Tensor::zeros(out_copy.shape);
        for (std::size_t i = 0; i < out_copy.rows(); ++i) {
          double dot = 0.0;
          for (std::size_t j = 0; j < out_copy.cols(); ++j) dot += g.at(i, j) * out_copy.at(i, j);
          for (std::size_t j = 0; j < out_copy.cols(); ++j) {
            da.at(i, j) = out_copy.at(i, j) * (g.at(i, j) - dot);
          }
        }
        t->accumulate(a.id, da);
      }));
}

inline Var softmax(Var a, int axis) {
  if (axis == 1) return softmax_rows(a);
  if (axis == 0) return transpose(softmax_rows(transpose(a)));
  fail_runtime("softmax: axis must be 0 or 1");
}

inline constexpr double kLayerNormEps = 1e-5;

// Row-wise layer normalization with affine parameters gamma, beta of shape [1, n].
inline Var layer_norm(Var x, Var gamma, Var beta) {
  const Tensor& X = x.val();
  const Tensor& G = gamma.val();
  const Tensor& B = beta.val();
  check_rank2(X, "layer_norm");
  if (G.rows() != 1 || G.cols() != X.cols()) shape_mismatch("layer_norm", X, G);
  if (B.rows() != 1 || B.cols() != X.cols()) shape_mismatch("layer_norm", X, B);
  const std::size_t m = X.rows(), n = X.cols();
  Tensor xhat = Tensor::zeros({m, n});
  std::vector<double> inv_std(m);
  for (std::size_t i = 0; i < m; ++i) {
    double mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) mean += X.at(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = X.at(i, j) - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    inv_std[i] = 1.0 / std::sqrt(var + kLayerNormEps);
    for (std::size_t j = 0; j < n; ++j) xhat.at(i, j) = (X.at(i, j) - mean) * inv_std[i];
  }
  Tensor Y = Tensor::zeros({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) Y.at(i, j) = G.at(0, j) * xhat.at(i, j) + B.at(0, j);
  }
  Tape* t = x.tape;
  const bool rg = any_grad({x, gamma, beta});
  return t->push(std::move(Y), rg, {x.id, gamma.id, beta.id},
                 !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, x, gamma, beta, xhat, inv_std, m, n](const Tensor& g) {
        const Tensor& G = gamma.val();
        if (t->requires_grad(gamma)) {
          Tensor dg = Tensor::zeros({1, n});
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) dg.at(0, j) += g.at(i, j) * xhat.at(i, j);
          }
          t->accumulate(gamma.id, dg);
        }
        if (t->requires_grad(beta)) {
          Tensor db = Tensor::zeros({1, n});
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) db.at(0, j) += g.at(i, j);
          }
          t->accumulate(beta.id, db);
        }
        if (t->requires_grad(x)) {
          Tensor dx = Tensor::zeros({m, n});
          const double dn = static_cast<double>(n);
          for (std::size_t i = 0; i < m; ++i) {
            double sum_gy = 0.0, sum_gy_xhat = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
              const double gy = g.at(i, j) * G.at(0, j);
              sum_gy += gy;
              sum_gy_xhat += gy * xhat.at(i, j);
            }
            for (std::size_t j = 0; j < n; ++j) {
              const double gy = g.at(i, j) * G.at(0, j);
              dx.at(i, j) =
                  inv_std[i] * (gy - sum_gy / dn - xhat.at(i, j) * sum_gy_xhat / dn);
            }
          }
          t->accumulate(x.id, dx);
        }
      }));
}

// Inverted dropout with a seeded mask; p == 0 is the identity.
inline Var dropout(Var a, double p, Rng& rng) {
  if (p <= 0.0) return a;
  if (p >= 1.0) fail_runtime("dropout: rate must be < 1");
  const Tensor& A = a.val();
  Tensor mask = Tensor::zeros(A.shape);
  const double keep = 1.0 - p;
  for (double& m : mask.data) m = rng.uniform() < keep ? 1.0 / keep : 0.0;
  Tensor C = A;
  C.requires_grad = false;
  for (std::size_t i = 0; i < C.data.size(); ++i) C.data[i] *= mask.data[i];
  Tape* t = a.tape;
  const bool rg = t->requires_grad(a);
  return t->push(std::move(C), rg, {a.id}, !rg ? nullptr : std::function<void(const Tensor&)>(
      [t, a, mask](const Tensor& g) {
        Tensor da = g;
        for (std::size_t i = 0; i < da.data.size(); ++i) da.data[i] *= mask.data[i];
        t->accumulate(a.id, da);
      }));
}

}  // namespace ops

}  // namespace tgif
