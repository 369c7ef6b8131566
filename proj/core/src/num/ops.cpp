/* Copyright 2026 The rfclink Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rfclink/num/ops.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

namespace rfclink::num {
namespace {

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapC = Eigen::Map<const RowMatrix<T>>;
template <typename T>
using Map = Eigen::Map<RowMatrix<T>>;

template <typename T>
MapC<T> view(const Tensor<T>& t) {
  return MapC<T>(t.raw(), static_cast<Eigen::Index>(t.rows()), static_cast<Eigen::Index>(t.cols()));
}

template <typename T>
Map<T> view(std::span<T> g, const Shape& s) {
  return Map<T>(g.data(), static_cast<Eigen::Index>(s.rows), static_cast<Eigen::Index>(s.cols));
}

[[noreturn]] void mismatch(const char* op, const Shape& a, const Shape& b) {
  throw ShapeMismatch(std::string(op) + ": incompatible shapes " + to_string(a) + " and " +
                      to_string(b));
}

[[noreturn]] void mismatch(const char* op, const Shape& a, const std::string& why) {
  throw ShapeMismatch(std::string(op) + ": shape " + to_string(a) + " " + why);
}

template <typename T>
void same_tape(const char* op, Var<T> a, Var<T> b) {
  if (a.tape != b.tape) throw ShapeMismatch(std::string(op) + ": operands live on different tapes");
}

// Elementwise unary op with derivative expressed through input x and output y.
template <typename T, typename F, typename D>
Var<T> unary(Var<T> a, F f, D dfdx) {
  Tape<T>& tape = *a.tape;
  const Tensor<T>& x = a.value();
  Tensor<T> y(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  const auto ia = a.id;
  return tape.record(std::move(y), {ia}, [ia, dfdx](Tape<T>& t, std::size_t self) {
    const auto& xv = t.value(ia);
    const auto& yv = t.value(self);
    auto g = t.grad(self);
    auto ga = t.grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * dfdx(xv[i], yv[i]);
  });
}

// Same as unary() with f and dfdx written as Eigen array expressions.
template <typename T, typename F, typename D>
Var<T> unary_array(Var<T> a, F f, D dfdx) {
  const Tensor<T>& x = a.value();
  Tensor<T> y(x.rows(), x.cols());
  view(y.data(), y.shape()).array() = f(view(x).array());
  const auto ia = a.id;
  return a.tape->record(std::move(y), {ia}, [ia, dfdx](Tape<T>& t, std::size_t self) {
    const auto shape = t.value(self).shape();
    view(t.grad(ia), shape).array() +=
        view(t.grad(self), shape).array() * dfdx(view(t.value(ia)).array(), view(t.value(self)).array());
  });
}

}  // namespace

template <typename T>
Var<T> matmul(Var<T> a, Var<T> b) {
  same_tape("matmul", a, b);
  const auto& A = a.value();
  const auto& B = b.value();
  if (A.cols() != B.rows()) mismatch("matmul", A.shape(), B.shape());
  Tensor<T> c(A.rows(), B.cols());
  view(c.data(), c.shape()).noalias() = view(A) * view(B);
  const auto ia = a.id, ib = b.id;
  return a.tape->record(std::move(c), {ia, ib}, [ia, ib](Tape<T>& t, std::size_t self) {
    const auto& Av = t.value(ia);
    const auto& Bv = t.value(ib);
    auto G = view(t.grad(self), t.value(self).shape());
    if (t.requires_grad(ia)) view(t.grad(ia), Av.shape()).noalias() += G * view(Bv).transpose();
    if (t.requires_grad(ib)) view(t.grad(ib), Bv.shape()).noalias() += view(Av).transpose() * G;
  });
}

template <typename T>
Var<T> matmul_nt(Var<T> a, Var<T> b) {
  same_tape("matmul_nt", a, b);
  const auto& A = a.value();
  const auto& B = b.value();
  if (A.cols() != B.cols()) mismatch("matmul_nt", A.shape(), B.shape());
  Tensor<T> c(A.rows(), B.rows());
  view(c.data(), c.shape()).noalias() = view(A) * view(B).transpose();
  const auto ia = a.id, ib = b.id;
  return a.tape->record(std::move(c), {ia, ib}, [ia, ib](Tape<T>& t, std::size_t self) {
    const auto& Av = t.value(ia);
    const auto& Bv = t.value(ib);
    auto G = view(t.grad(self), t.value(self).shape());
    if (t.requires_grad(ia)) view(t.grad(ia), Av.shape()).noalias() += G * view(Bv);
    if (t.requires_grad(ib)) view(t.grad(ib), Bv.shape()).noalias() += G.transpose() * view(Av);
  });
}

template <typename T>
Var<T> add(Var<T> a, Var<T> b) {
  same_tape("add", a, b);
  const auto& A = a.value();
  const auto& B = b.value();
  if (A.shape() != B.shape()) mismatch("add", A.shape(), B.shape());
  Tensor<T> c(A.rows(), A.cols());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = A[i] + B[i];
  const auto ia = a.id, ib = b.id;
  return a.tape->record(std::move(c), {ia, ib}, [ia, ib](Tape<T>& t, std::size_t self) {
    auto g = t.grad(self);
    for (auto id : {ia, ib}) {
      if (!t.requires_grad(id)) continue;
      auto gi = t.grad(id);
      for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
    }
  });
}

template <typename T>
Var<T> sub(Var<T> a, Var<T> b) {
  same_tape("sub", a, b);
  const auto& A = a.value();
  const auto& B = b.value();
  if (A.shape() != B.shape()) mismatch("sub", A.shape(), B.shape());
  Tensor<T> c(A.rows(), A.cols());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = A[i] - B[i];
  const auto ia = a.id, ib = b.id;
  return a.tape->record(std::move(c), {ia, ib}, [ia, ib](Tape<T>& t, std::size_t self) {
    auto g = t.grad(self);
    if (t.requires_grad(ia)) {
      auto ga = t.grad(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    }
    if (t.requires_grad(ib)) {
      auto gb = t.grad(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
    }
  });
}

template <typename T>
Var<T> mul(Var<T> a, Var<T> b) {
  same_tape("mul", a, b);
  const auto& A = a.value();
  const auto& B = b.value();
  if (A.shape() != B.shape()) mismatch("mul", A.shape(), B.shape());
  Tensor<T> c(A.rows(), A.cols());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = A[i] * B[i];
  const auto ia = a.id, ib = b.id;
  return a.tape->record(std::move(c), {ia, ib}, [ia, ib](Tape<T>& t, std::size_t self) {
    auto g = t.grad(self);
    const auto& Av = t.value(ia);
    const auto& Bv = t.value(ib);
    if (t.requires_grad(ia)) {
      auto ga = t.grad(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * Bv[i];
    }
    if (t.requires_grad(ib)) {
      auto gb = t.grad(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * Av[i];
    }
  });
}

template <typename T>
Var<T> scale(Var<T> a, T factor) {
  return unary<T>(a, [factor](T x) { return x * factor; }, [factor](T, T) { return factor; });
}

template <typename T>
Var<T> add_bias(Var<T> a, Var<T> bias) {
  same_tape("add_bias", a, bias);
  const auto& A = a.value();
  const auto& B = bias.value();
  if (B.rows() != 1 || B.cols() != A.cols()) mismatch("add_bias", A.shape(), B.shape());
  Tensor<T> c(A.rows(), A.cols());
  view(c.data(), c.shape()).noalias() = view(A).rowwise() + view(B).row(0);
  const auto ia = a.id, ib = bias.id;
  return a.tape->record(std::move(c), {ia, ib}, [ia, ib](Tape<T>& t, std::size_t self) {
    const auto shape = t.value(self).shape();
    const auto g = view(t.grad(self), shape);
    if (t.requires_grad(ia)) view(t.grad(ia), shape) += g;
    if (t.requires_grad(ib)) view(t.grad(ib), t.value(ib).shape()) += g.colwise().sum();
  });
}

template <typename T>
Var<T> relu(Var<T> a) {
  return unary<T>(
      a, [](T x) { return x > T(0) ? x : T(0); }, [](T x, T) { return x > T(0) ? T(1) : T(0); });
}

template <typename T>
Var<T> tanh(Var<T> a) {
  return unary_array<T>(
      a, [](const auto& x) { return x.tanh(); }, [](const auto&, const auto& y) { return T(1) - y.square(); });
}

template <typename T>
Var<T> sigmoid(Var<T> a) {
  // tanh form stays finite for large |x|
  return unary_array<T>(
      a, [](const auto& x) { return T(0.5) * (T(1) + (T(0.5) * x).tanh()); },
      [](const auto&, const auto& y) { return y * (T(1) - y); });
}

template <typename T>
Var<T> gelu(Var<T> a) {
  // tanh approximation
  static constexpr T c = T(0.7978845608028654);  // sqrt(2/pi)
  static constexpr T k = T(0.044715);
  const auto& X = a.value();
  Tensor<T> y(X.rows(), X.cols());
  {
    const auto x = view(X).array();
    view(y.data(), y.shape()).array() = T(0.5) * x * (T(1) + (c * (x + k * x.cube())).tanh());
  }
  const auto ia = a.id;
  return a.tape->record(std::move(y), {ia}, [ia](Tape<T>& t, std::size_t self) {
    const auto shape = t.value(self).shape();
    const auto x = view(t.value(ia)).array();
    const auto g = view(t.grad(self), shape).array();
    const RowMatrix<T> th = (c * (x + k * x.cube())).tanh().matrix();
    const auto tha = th.array();
    view(t.grad(ia), shape).array() +=
        g * (T(0.5) * (T(1) + tha) + T(0.5) * x * (T(1) - tha.square()) * c * (T(1) + T(3) * k * x.square()));
  });
}

template <typename T>
Var<T> activate(Var<T> a, Activation act) {
  return act == Activation::GELU ? gelu(a) : relu(a);
}

template <typename T>
Var<T> softmax_rows(Var<T> a) {
  const auto& A = a.value();
  if (A.cols() == 0) mismatch("softmax_rows", A.shape(), "has no columns");
  Tensor<T> y(A.rows(), A.cols());
  for (std::size_t r = 0; r < A.rows(); ++r) {
    T mx = A.at(r, 0);
    for (std::size_t k = 1; k < A.cols(); ++k) mx = std::max(mx, A.at(r, k));
    T sum = 0;
    for (std::size_t k = 0; k < A.cols(); ++k) sum += (y.at(r, k) = std::exp(A.at(r, k) - mx));
    for (std::size_t k = 0; k < A.cols(); ++k) y.at(r, k) /= sum;
  }
  const auto ia = a.id;
  return a.tape->record(std::move(y), {ia}, [ia](Tape<T>& t, std::size_t self) {
    const auto& Y = t.value(self);
    auto g = t.grad(self);
    auto ga = t.grad(ia);
    const auto n = Y.cols();
    for (std::size_t r = 0; r < Y.rows(); ++r) {
      T dot = 0;
      for (std::size_t k = 0; k < n; ++k) dot += g[r * n + k] * Y.at(r, k);
      for (std::size_t k = 0; k < n; ++k) ga[r * n + k] += Y.at(r, k) * (g[r * n + k] - dot);
    }
  });
}

template <typename T>
Var<T> log_sum_exp_rows(Var<T> a) {
  const auto& A = a.value();
  if (A.cols() == 0) mismatch("log_sum_exp_rows", A.shape(), "has no columns");
  Tensor<T> y(A.rows(), 1);
  for (std::size_t r = 0; r < A.rows(); ++r) {
    T mx = A.at(r, 0);
    for (std::size_t k = 1; k < A.cols(); ++k) mx = std::max(mx, A.at(r, k));
    T sum = 0;
    for (std::size_t k = 0; k < A.cols(); ++k) sum += std::exp(A.at(r, k) - mx);
    y[r] = mx + std::log(sum);
  }
  const auto ia = a.id;
  return a.tape->record(std::move(y), {ia}, [ia](Tape<T>& t, std::size_t self) {
    const auto& X = t.value(ia);
    const auto& Y = t.value(self);
    auto g = t.grad(self);
    auto ga = t.grad(ia);
    const auto n = X.cols();
    for (std::size_t r = 0; r < X.rows(); ++r)
      for (std::size_t k = 0; k < n; ++k) ga[r * n + k] += g[r] * std::exp(X.at(r, k) - Y[r]);
  });
}

template <typename T>
Var<T> concat_cols(std::span<const Var<T>> parts) {
  if (parts.empty()) throw ShapeMismatch("concat_cols: no operands");
  const auto rows = parts[0].value().rows();
  std::size_t cols = 0;
  std::vector<std::size_t> ids;
  for (const auto& p : parts) {
    same_tape("concat_cols", parts[0], p);
    if (p.value().rows() != rows) mismatch("concat_cols", parts[0].shape(), p.shape());
    cols += p.value().cols();
    ids.push_back(p.id);
  }
  Tensor<T> y(rows, cols);
  std::size_t off = 0;
  for (const auto& p : parts) {
    const auto& P = p.value();
    for (std::size_t r = 0; r < rows; ++r)
      std::copy_n(P.raw() + r * P.cols(), P.cols(), y.raw() + r * cols + off);
    off += P.cols();
  }
  return parts[0].tape->record(std::move(y), ids, [ids](Tape<T>& t, std::size_t self) {
    auto g = t.grad(self);
    const auto cols = t.value(self).cols();
    std::size_t off = 0;
    for (auto id : ids) {
      const auto pc = t.value(id).cols();
      if (t.requires_grad(id)) {
        auto gi = t.grad(id);
        for (std::size_t r = 0; r < t.value(id).rows(); ++r)
          for (std::size_t k = 0; k < pc; ++k) gi[r * pc + k] += g[r * cols + off + k];
      }
      off += pc;
    }
  });
}

template <typename T>
Var<T> concat_rows(std::span<const Var<T>> parts) {
  if (parts.empty()) throw ShapeMismatch("concat_rows: no operands");
  const auto cols = parts[0].value().cols();
  std::size_t rows = 0;
  std::vector<std::size_t> ids;
  for (const auto& p : parts) {
    same_tape("concat_rows", parts[0], p);
    if (p.value().cols() != cols) mismatch("concat_rows", parts[0].shape(), p.shape());
    rows += p.value().rows();
    ids.push_back(p.id);
  }
  Tensor<T> y(rows, cols);
  std::size_t off = 0;
  for (const auto& p : parts) {
    std::copy(p.value().data().begin(), p.value().data().end(), y.raw() + off);
    off += p.value().size();
  }
  return parts[0].tape->record(std::move(y), ids, [ids](Tape<T>& t, std::size_t self) {
    auto g = t.grad(self);
    std::size_t off = 0;
    for (auto id : ids) {
      const auto n = t.value(id).size();
      if (t.requires_grad(id)) {
        auto gi = t.grad(id);
        for (std::size_t i = 0; i < n; ++i) gi[i] += g[off + i];
      }
      off += n;
    }
  });
}

template <typename T>
Var<T> slice_rows(Var<T> a, std::size_t begin, std::size_t count) {
  const auto& A = a.value();
  if (count == 0 || begin + count > A.rows())
    mismatch("slice_rows", A.shape(), "cannot provide rows [" + std::to_string(begin) + ", " +
                                          std::to_string(begin + count) + ")");
  Tensor<T> y(count, A.cols());
  std::copy_n(A.raw() + begin * A.cols(), count * A.cols(), y.raw());
  const auto ia = a.id;
  return a.tape->record(std::move(y), {ia}, [ia, begin](Tape<T>& t, std::size_t self) {
    auto g = t.grad(self);
    auto ga = t.grad(ia);
    const auto off = begin * t.value(ia).cols();
    for (std::size_t i = 0; i < g.size(); ++i) ga[off + i] += g[i];
  });
}

template <typename T>
Var<T> slice_cols(Var<T> a, std::size_t begin, std::size_t count) {
  const auto& A = a.value();
  if (count == 0 || begin + count > A.cols())
    mismatch("slice_cols", A.shape(), "cannot provide cols [" + std::to_string(begin) + ", " +
                                          std::to_string(begin + count) + ")");
  Tensor<T> y(A.rows(), count);
  for (std::size_t r = 0; r < A.rows(); ++r)
    std::copy_n(A.raw() + r * A.cols() + begin, count, y.raw() + r * count);
  const auto ia = a.id;
  return a.tape->record(std::move(y), {ia}, [ia, begin, count](Tape<T>& t, std::size_t self) {
    auto g = t.grad(self);
    auto ga = t.grad(ia);
    const auto cols = t.value(ia).cols();
    for (std::size_t r = 0; r < t.value(ia).rows(); ++r)
      for (std::size_t k = 0; k < count; ++k) ga[r * cols + begin + k] += g[r * count + k];
  });
}

template <typename T>
Var<T> reshape(Var<T> a, std::size_t rows, std::size_t cols) {
  const auto& A = a.value();
  if (rows * cols != A.size())
    mismatch("reshape", A.shape(), Shape{rows, cols});
  Tensor<T> y({rows, cols}, std::vector<T>(A.data().begin(), A.data().end()));
  const auto ia = a.id;
  return a.tape->record(std::move(y), {ia}, [ia](Tape<T>& t, std::size_t self) {
    auto g = t.grad(self);
    auto ga = t.grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
  });
}

template <typename T>
Var<T> mean(Var<T> a) {
  const auto& A = a.value();
  if (A.empty()) mismatch("mean", A.shape(), "is empty");
  T sum = 0;
  for (auto v : A.data()) sum += v;
  const auto n = static_cast<T>(A.size());
  const auto ia = a.id;
  return a.tape->record(Tensor<T>::row({sum / n}), {ia}, [ia, n](Tape<T>& t, std::size_t self) {
    const T g = t.grad(self)[0] / n;
    for (auto& v : t.grad(ia)) v += g;
  });
}

template <typename T>
Var<T> mean_rows(Var<T> a) {
  const auto& A = a.value();
  if (A.empty()) mismatch("mean_rows", A.shape(), "is empty");
  Tensor<T> y(1, A.cols());
  for (std::size_t r = 0; r < A.rows(); ++r)
    for (std::size_t k = 0; k < A.cols(); ++k) y[k] += A.at(r, k);
  const auto n = static_cast<T>(A.rows());
  for (auto& v : y.data()) v /= n;
  const auto ia = a.id;
  return a.tape->record(std::move(y), {ia}, [ia, n](Tape<T>& t, std::size_t self) {
    auto g = t.grad(self);
    auto ga = t.grad(ia);
    const auto cols = g.size();
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g[i % cols] / n;
  });
}

template <typename T>
Var<T> pick(Var<T> a, std::size_t row, std::size_t col) {
  const auto& A = a.value();
  if (row >= A.rows() || col >= A.cols())
    mismatch("pick", A.shape(), "has no entry (" + std::to_string(row) + ", " + std::to_string(col) + ")");
  const auto ia = a.id;
  const auto idx = row * A.cols() + col;
  return a.tape->record(Tensor<T>::row({A[idx]}), {ia}, [ia, idx](Tape<T>& t, std::size_t self) {
    t.grad(ia)[idx] += t.grad(self)[0];
  });
}

template <typename T>
Var<T> layer_norm(Var<T> a, Var<T> gain, Var<T> bias, T eps) {
  same_tape("layer_norm", a, gain);
  same_tape("layer_norm", a, bias);
  const auto& X = a.value();
  const auto n = X.cols();
  if (gain.value().shape() != Shape{1, n}) mismatch("layer_norm", X.shape(), gain.shape());
  if (bias.value().shape() != Shape{1, n}) mismatch("layer_norm", X.shape(), bias.shape());
  const auto& G = gain.value();
  const auto& B = bias.value();
  Tensor<T> y(X.rows(), n);
  // normalized values and inverse deviations are needed by the backward rule
  auto xhat = std::make_shared<std::vector<T>>(X.size());
  auto inv_std = std::make_shared<std::vector<T>>(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) {
    T mu = 0;
    for (std::size_t k = 0; k < n; ++k) mu += X.at(r, k);
    mu /= static_cast<T>(n);
    T var = 0;
    for (std::size_t k = 0; k < n; ++k) var += (X.at(r, k) - mu) * (X.at(r, k) - mu);
    var /= static_cast<T>(n);
    const T is = T(1) / std::sqrt(var + eps);
    (*inv_std)[r] = is;
    for (std::size_t k = 0; k < n; ++k) {
      const T h = (X.at(r, k) - mu) * is;
      (*xhat)[r * n + k] = h;
      y.at(r, k) = h * G[k] + B[k];
    }
  }
  const auto ia = a.id, ig = gain.id, ib = bias.id;
  return a.tape->record(std::move(y), {ia, ig, ib},
                        [ia, ig, ib, xhat, inv_std](Tape<T>& t, std::size_t self) {
    auto g = t.grad(self);
    const auto& Gv = t.value(ig);
    const auto n = Gv.cols();
    const auto rows = t.value(ia).rows();
    if (t.requires_grad(ig)) {
      auto gg = t.grad(ig);
      for (std::size_t i = 0; i < g.size(); ++i) gg[i % n] += g[i] * (*xhat)[i];
    }
    if (t.requires_grad(ib)) {
      auto gb = t.grad(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i % n] += g[i];
    }
    if (t.requires_grad(ia)) {
      auto ga = t.grad(ia);
      for (std::size_t r = 0; r < rows; ++r) {
        T m1 = 0, m2 = 0;
        for (std::size_t k = 0; k < n; ++k) {
          const T dh = g[r * n + k] * Gv[k];
          m1 += dh;
          m2 += dh * (*xhat)[r * n + k];
        }
        m1 /= static_cast<T>(n);
        m2 /= static_cast<T>(n);
        for (std::size_t k = 0; k < n; ++k) {
          const T dh = g[r * n + k] * Gv[k];
          ga[r * n + k] += (*inv_std)[r] * (dh - m1 - (*xhat)[r * n + k] * m2);
        }
      }
    }
  });
}

template <typename T>
Var<T> gather_rows(Var<T> table, std::span<const int> ids) {
  const auto& E = table.value();
  if (ids.empty()) mismatch("gather_rows", E.shape(), "gathered with no ids");
  const auto cols = E.cols();
  Tensor<T> y(ids.size(), cols);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= E.rows())
      throw IdOutOfRange("gather_rows: id " + std::to_string(ids[i]) + " outside table of " +
                         std::to_string(E.rows()) + " rows");
    std::copy_n(E.raw() + static_cast<std::size_t>(ids[i]) * cols, cols, y.raw() + i * cols);
  }
  const auto it = table.id;
  std::vector<int> rows(ids.begin(), ids.end());
  return table.tape->record(std::move(y), {it}, [it, rows = std::move(rows)](Tape<T>& t, std::size_t self) {
    auto g = t.grad(self);
    auto gt = t.grad(it);
    const auto cols = t.value(it).cols();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto base = static_cast<std::size_t>(rows[i]) * cols;
      for (std::size_t k = 0; k < cols; ++k) gt[base + k] += g[i * cols + k];
    }
  });
}

template <typename T>
Var<T> dropout(Var<T> a, T rate, std::mt19937_64& rng) {
  if (rate <= T(0)) return a;
  const auto& A = a.value();
  const T keep = T(1) - rate;
  auto mask = std::make_shared<std::vector<T>>(A.size());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Tensor<T> y(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.size(); ++i) {
    (*mask)[i] = u(rng) < static_cast<double>(keep) ? T(1) / keep : T(0);
    y[i] = A[i] * (*mask)[i];
  }
  const auto ia = a.id;
  return a.tape->record(std::move(y), {ia}, [ia, mask](Tape<T>& t, std::size_t self) {
    auto g = t.grad(self);
    auto ga = t.grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (*mask)[i];
  });
}

template <typename T>
Var<T> unfold_rows(Var<T> a, std::size_t k) {
  const auto& A = a.value();
  if (k % 2 == 0) mismatch("unfold_rows", A.shape(), "needs an odd window, got " + std::to_string(k));
  const auto m = A.rows(), d = A.cols();
  const auto half = static_cast<std::ptrdiff_t>(k / 2);
  Tensor<T> y(m, k * d);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const auto src = static_cast<std::ptrdiff_t>(i) + static_cast<std::ptrdiff_t>(j) - half;
      if (src < 0 || src >= static_cast<std::ptrdiff_t>(m)) continue;
      std::copy_n(A.raw() + static_cast<std::size_t>(src) * d, d, y.raw() + i * k * d + j * d);
    }
  const auto ia = a.id;
  return a.tape->record(std::move(y), {ia}, [ia, k, half](Tape<T>& t, std::size_t self) {
    auto g = t.grad(self);
    auto ga = t.grad(ia);
    const auto m = t.value(ia).rows(), d = t.value(ia).cols();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        const auto src = static_cast<std::ptrdiff_t>(i) + static_cast<std::ptrdiff_t>(j) - half;
        if (src < 0 || src >= static_cast<std::ptrdiff_t>(m)) continue;
        for (std::size_t c = 0; c < d; ++c)
          ga[static_cast<std::size_t>(src) * d + c] += g[i * k * d + j * d + c];
      }
  });
}

template <typename T>
Var<T> max_pool(Var<T> a, std::size_t pool_rows, std::size_t pool_cols) {
  const auto& A = a.value();
  if (pool_rows == 0 || pool_cols == 0 || A.rows() < pool_rows || A.cols() < pool_cols)
    mismatch("max_pool", A.shape(), Shape{pool_rows, pool_cols});
  const auto out_r = A.rows() / pool_rows, out_c = A.cols() / pool_cols;
  Tensor<T> y(out_r, out_c);
  auto argmax = std::make_shared<std::vector<std::size_t>>(out_r * out_c);
  for (std::size_t r = 0; r < out_r; ++r)
    for (std::size_t c = 0; c < out_c; ++c) {
      std::size_t best = (r * pool_rows) * A.cols() + c * pool_cols;
      for (std::size_t i = 0; i < pool_rows; ++i)
        for (std::size_t j = 0; j < pool_cols; ++j) {
          const auto idx = (r * pool_rows + i) * A.cols() + c * pool_cols + j;
          if (A[idx] > A[best]) best = idx;
        }
      (*argmax)[r * out_c + c] = best;
      y.at(r, c) = A[best];
    }
  const auto ia = a.id;
  return a.tape->record(std::move(y), {ia}, [ia, argmax](Tape<T>& t, std::size_t self) {
    auto g = t.grad(self);
    auto ga = t.grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[(*argmax)[i]] += g[i];
  });
}

template <typename T>
Var<T> cross_entropy(Var<T> logits, std::size_t target) {
  const auto& Z = logits.value();
  if (Z.rows() != 1) mismatch("cross_entropy", Z.shape(), "is not a single row of logits");
  if (target >= Z.cols())
    throw ClassOutOfRange("cross_entropy: class " + std::to_string(target) + " outside [0, " +
                          std::to_string(Z.cols()) + ")");
  return sub(log_sum_exp_rows(logits), pick(logits, 0, target));
}

#define RFCLINK_INSTANTIATE_OPS(T)                                                   \
  template Var<T> matmul(Var<T>, Var<T>);                                            \
  template Var<T> matmul_nt(Var<T>, Var<T>);                                         \
  template Var<T> add(Var<T>, Var<T>);                                               \
  template Var<T> sub(Var<T>, Var<T>);                                               \
  template Var<T> mul(Var<T>, Var<T>);                                               \
  template Var<T> scale(Var<T>, T);                                                  \
  template Var<T> add_bias(Var<T>, Var<T>);                                          \
  template Var<T> relu(Var<T>);                                                      \
  template Var<T> tanh(Var<T>);                                                      \
  template Var<T> sigmoid(Var<T>);                                                   \
  template Var<T> gelu(Var<T>);                                                      \
  template Var<T> activate(Var<T>, Activation);                                      \
  template Var<T> softmax_rows(Var<T>);                                              \
  template Var<T> log_sum_exp_rows(Var<T>);                                          \
  template Var<T> concat_cols(std::span<const Var<T>>);                              \
  template Var<T> concat_rows(std::span<const Var<T>>);                              \
  template Var<T> slice_rows(Var<T>, std::size_t, std::size_t);                      \
  template Var<T> slice_cols(Var<T>, std::size_t, std::size_t);                      \
  template Var<T> reshape(Var<T>, std::size_t, std::size_t);                         \
  template Var<T> mean(Var<T>);                                                      \
  template Var<T> mean_rows(Var<T>);                                                 \
  template Var<T> pick(Var<T>, std::size_t, std::size_t);                            \
  template Var<T> layer_norm(Var<T>, Var<T>, Var<T>, T);                             \
  template Var<T> gather_rows(Var<T>, std::span<const int>);                         \
  template Var<T> dropout(Var<T>, T, std::mt19937_64&);                              \
  template Var<T> unfold_rows(Var<T>, std::size_t);                                  \
  template Var<T> max_pool(Var<T>, std::size_t, std::size_t);                        \
  template Var<T> cross_entropy(Var<T>, std::size_t);

RFCLINK_INSTANTIATE_OPS(float)
RFCLINK_INSTANTIATE_OPS(double)

}  // namespace rfclink::num
