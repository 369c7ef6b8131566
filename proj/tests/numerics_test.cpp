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


#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <vector>

#include "rfclink/error.hpp"
#include "rfclink/num/checkpoint.hpp"
#include "rfclink/num/grad_check.hpp"
#include "rfclink/num/ops.hpp"
#include "rfclink/num/optimizer.hpp"
#include "support.hpp"

using namespace rfclink::num;
using rfclink::testing::TempDir;

namespace {

// Sum of out * w for a fixed, irregular weight pattern, so every output entry
// contributes a distinct amount to the scalar.
template <typename T>
Var<T> project(Var<T> out) {
  Tensor<T> w(out.value().rows(), out.value().cols());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<T>(std::sin(1.0 + 0.7 * static_cast<double>(i)));
  return scale(mean(mul(out, out.tape->constant(std::move(w)))), static_cast<T>(out.value().size()));
}

template <typename T>
Var<T> P(Tape<T>& tape, ParamStore<T>& store, const char* name) {
  return tape.param(store.get(name));
}

template <typename X> struct ScalarOfImpl;
template <typename T> struct ScalarOfImpl<Tape<T>> { using type = T; };
template <typename X> using ScalarOf = typename ScalarOfImpl<std::decay_t<X>>::type;

using Shapes = std::vector<std::pair<std::string, Shape>>;

// `f` is a generic callable (Tape<T>&, ParamStore<T>&) -> Var<T>. Checks the
// double backward pass against double central differences and the float
// backward pass against the same double oracle.
template <typename F>
void check_op(F f, const Shapes& shapes) {
  ParamStore<double> pd(5);
  ParamStore<float> pf(5);
  for (const auto& [name, s] : shapes) {
    pd.add(name, s.rows, s.cols, Init::UnitNormal);
    pf.add(name, s.rows, s.cols, Init::UnitNormal);
  }
  ScalarFn<double> fd = [&](Tape<double>& t) { return project(f(t, pd)); };
  ScalarFn<float> ff = [&](Tape<float>& t) { return project(f(t, pf)); };

  GradCheckOptions o64;
  o64.step = 1e-5;
  o64.tolerance = 1e-6;
  const auto r64 = grad_check<double>(fd, pd, o64);
  EXPECT_GT(r64.checked, 0u);
  EXPECT_TRUE(r64.passed()) << "64-bit worst " << r64.worst.param << "[" << r64.worst.index
                            << "] analytic " << r64.worst.analytic << " numeric " << r64.worst.numeric;

  GradCheckOptions o32 = o64;
  o32.tolerance = 1e-4;
  const auto r32 = grad_check<float, double>(ff, pf, fd, pd, o32);
  EXPECT_TRUE(r32.passed()) << "32-bit worst " << r32.worst.param << "[" << r32.worst.index
                            << "] analytic " << r32.worst.analytic << " numeric " << r32.worst.numeric;
}

const Shape kMat{3, 4};

}  // namespace

TEST(GradCheck, Matmul) {
  check_op([](auto& t, auto& s) { return matmul(P(t, s, "a"), P(t, s, "b")); }, {{"a", {3, 4}}, {"b", {4, 5}}});
}
TEST(GradCheck, MatmulNt) {
  check_op([](auto& t, auto& s) { return matmul_nt(P(t, s, "a"), P(t, s, "b")); }, {{"a", {3, 4}}, {"b", {5, 4}}});
}
TEST(GradCheck, Add) {
  check_op([](auto& t, auto& s) { return add(P(t, s, "a"), P(t, s, "b")); }, {{"a", kMat}, {"b", kMat}});
}
TEST(GradCheck, Sub) {
  check_op([](auto& t, auto& s) { return sub(P(t, s, "a"), P(t, s, "b")); }, {{"a", kMat}, {"b", kMat}});
}
TEST(GradCheck, Mul) {
  check_op([](auto& t, auto& s) { return mul(P(t, s, "a"), P(t, s, "b")); }, {{"a", kMat}, {"b", kMat}});
}
TEST(GradCheck, MulSameOperand) {
  check_op([](auto& t, auto& s) {
    auto a = P(t, s, "a");
    return mul(a, a);
  }, {{"a", kMat}});
}
TEST(GradCheck, Scale) {
  check_op([](auto& t, auto& s) {
    using T = ScalarOf<decltype(t)>;
    return scale(P(t, s, "a"), T(-2.5));
  }, {{"a", kMat}});
}
TEST(GradCheck, AddBias) {
  check_op([](auto& t, auto& s) { return add_bias(P(t, s, "a"), P(t, s, "b")); }, {{"a", kMat}, {"b", {1, 4}}});
}
TEST(GradCheck, Relu) {
  check_op([](auto& t, auto& s) { return relu(P(t, s, "a")); }, {{"a", kMat}});
}
TEST(GradCheck, Tanh) {
  check_op([](auto& t, auto& s) { return tanh(P(t, s, "a")); }, {{"a", kMat}});
}
TEST(GradCheck, Sigmoid) {
  check_op([](auto& t, auto& s) { return sigmoid(P(t, s, "a")); }, {{"a", kMat}});
}
TEST(GradCheck, Gelu) {
  check_op([](auto& t, auto& s) { return gelu(P(t, s, "a")); }, {{"a", kMat}});
}
TEST(GradCheck, SoftmaxRows) {
  check_op([](auto& t, auto& s) { return softmax_rows(P(t, s, "a")); }, {{"a", kMat}});
}
TEST(GradCheck, LogSumExpRows) {
  check_op([](auto& t, auto& s) { return log_sum_exp_rows(P(t, s, "a")); }, {{"a", kMat}});
}
TEST(GradCheck, ConcatCols) {
  check_op([](auto& t, auto& s) {
    using V = decltype(P(t, s, "a"));
    const V parts[] = {P(t, s, "a"), P(t, s, "b")};
    return concat_cols(std::span<const V>(parts));
  }, {{"a", {3, 2}}, {"b", {3, 5}}});
}
TEST(GradCheck, ConcatRows) {
  check_op([](auto& t, auto& s) {
    using V = decltype(P(t, s, "a"));
    const V parts[] = {P(t, s, "a"), P(t, s, "b"), P(t, s, "a")};
    return concat_rows(std::span<const V>(parts));
  }, {{"a", {2, 4}}, {"b", {3, 4}}});
}
TEST(GradCheck, SliceRows) {
  check_op([](auto& t, auto& s) { return slice_rows(P(t, s, "a"), 1, 2); }, {{"a", {4, 3}}});
}
TEST(GradCheck, SliceCols) {
  check_op([](auto& t, auto& s) { return slice_cols(P(t, s, "a"), 1, 2); }, {{"a", {4, 3}}});
}
TEST(GradCheck, Reshape) {
  check_op([](auto& t, auto& s) { return reshape(P(t, s, "a"), 2, 6); }, {{"a", {4, 3}}});
}
TEST(GradCheck, Mean) {
  check_op([](auto& t, auto& s) { return mean(P(t, s, "a")); }, {{"a", kMat}});
}
TEST(GradCheck, MeanRows) {
  check_op([](auto& t, auto& s) { return mean_rows(P(t, s, "a")); }, {{"a", kMat}});
}
TEST(GradCheck, Pick) {
  check_op([](auto& t, auto& s) { return pick(P(t, s, "a"), 2, 1); }, {{"a", kMat}});
}
TEST(GradCheck, LayerNorm) {
  check_op([](auto& t, auto& s) { return layer_norm(P(t, s, "a"), P(t, s, "g"), P(t, s, "b")); },
           {{"a", {3, 6}}, {"g", {1, 6}}, {"b", {1, 6}}});
}
TEST(GradCheck, GatherRows) {
  check_op([](auto& t, auto& s) {
    static const int ids[] = {2, 0, 2, 4};
    return gather_rows(P(t, s, "table"), std::span<const int>(ids));
  }, {{"table", {5, 3}}});
}
TEST(GradCheck, Dropout) {
  check_op([](auto& t, auto& s) {
    using T = ScalarOf<decltype(t)>;
    std::mt19937_64 rng(3);
    return dropout(P(t, s, "a"), T(0.3), rng);
  }, {{"a", {4, 5}}});
}
TEST(GradCheck, UnfoldRows) {
  check_op([](auto& t, auto& s) { return unfold_rows(P(t, s, "a"), 3); }, {{"a", {4, 2}}});
}
TEST(GradCheck, MaxPool) {
  check_op([](auto& t, auto& s) { return max_pool(P(t, s, "a"), 2, 2); }, {{"a", {5, 4}}});
}
TEST(GradCheck, CrossEntropy) {
  check_op([](auto& t, auto& s) { return cross_entropy(P(t, s, "z"), 4); }, {{"z", {1, 9}}});
}
TEST(GradCheck, Composite) {
  check_op([](auto& t, auto& s) {
    auto h = gelu(add_bias(matmul(P(t, s, "x"), P(t, s, "w")), P(t, s, "b")));
    return softmax_rows(layer_norm(h, P(t, s, "g"), P(t, s, "beta")));
  }, {{"x", {3, 4}}, {"w", {4, 5}}, {"b", {1, 5}}, {"g", {1, 5}}, {"beta", {1, 5}}});
}

TEST(GradCheck, ConstantFunctionHasZeroGradient) {
  ParamStore<double> store(1);
  store.add("unused", 2, 3, Init::UnitNormal);
  ScalarFn<double> f = [](Tape<double>& t) { return t.constant(Tensor<double>(1, 1, 3.0)); };
  const auto r = grad_check<double>(f, store);
  EXPECT_EQ(r.checked, 6u);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.max_rel_error, 0.0);

  ParamStore<double> empty(1);
  const auto r0 = grad_check<double>(f, empty);
  EXPECT_EQ(r0.checked, 0u);
  EXPECT_TRUE(r0.passed());
}

// A deliberately wrong backward rule must be caught.
TEST(GradCheck, CorruptedBackwardFails) {
  ParamStore<double> store(1);
  store.add("a", 2, 2, Init::UnitNormal);
  ScalarFn<double> f = [&](Tape<double>& t) {
    auto a = P(t, store, "a");
    Tensor<double> y = a.value();
    for (auto& v : y.data()) v = v * v;
    auto out = t.record(std::move(y), {a.id}, [a](Tape<double>& tape, std::size_t self) {
      auto g = tape.grad(self);
      auto ga = tape.grad(a.id);
      const auto& x = tape.value(a.id);
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g[i] * 3.0 * x[i];  // should be 2x
    });
    return project(out);
  };
  const auto r = grad_check<double>(f, store);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.failures.size(), 4u);
  EXPECT_NEAR(r.worst.rel_error, 0.2, 1e-6);  // |3-2| / (3+2)
}

TEST(GradCheck, SampledEntries) {
  ParamStore<double> store(1);
  store.add("a", 10, 10, Init::UnitNormal);
  ScalarFn<double> f = [&](Tape<double>& t) { return project(tanh(P(t, store, "a"))); };
  GradCheckOptions o;
  o.max_entries_per_param = 7;
  EXPECT_EQ(grad_check<double>(f, store, o).checked, 7u);
}

TEST(Softmax, Examples) {
  Tape<double> t;
  auto y = softmax_rows(t.constant(Tensor<double>::row({1.0, 2.0, 3.0})));
  const long double z = std::exp(1.0L) + std::exp(2.0L) + std::exp(3.0L);
  for (int i = 0; i < 3; ++i)
    EXPECT_NEAR(y.value()[static_cast<std::size_t>(i)], static_cast<double>(std::exp(1.0L + i) / z), 1e-15);
  EXPECT_NEAR(y.value()[0], 0.0900306, 1e-7);
  EXPECT_NEAR(y.value()[2], 0.6652410, 1e-7);

  auto big = softmax_rows(t.constant(Tensor<double>::row({1000.0, 1000.0})));
  EXPECT_DOUBLE_EQ(big.value()[0], 0.5);
  EXPECT_DOUBLE_EQ(big.value()[1], 0.5);
}

TEST(Softmax, LogSumExpStable) {
  Tape<double> t;
  auto l = log_sum_exp_rows(t.constant(Tensor<double>::row({1000.0, 1000.0})));
  EXPECT_NEAR(l.value()[0], 1000.0 + std::log(2.0), 1e-12);
  auto m = log_sum_exp_rows(t.constant(Tensor<double>::row({-1000.0, -1000.0, -1000.0})));
  EXPECT_NEAR(m.value()[0], -1000.0 + std::log(3.0), 1e-12);
  EXPECT_TRUE(std::isfinite(m.value()[0]));
}

TEST(Softmax, RowsSumToOneAndShiftInvariant) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 12;
    Tensor<double> x(rows, cols), shifted(rows, cols);
    const double c = n(rng) * 20;
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = n(rng);
      shifted[i] = x[i] + c;
    }
    Tape<double> t;
    const auto& y = softmax_rows(t.constant(x)).value();
    const auto& ys = softmax_rows(t.constant(shifted)).value();
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0;
      for (std::size_t j = 0; j < cols; ++j) {
        sum += y.at(r, j);
        EXPECT_GE(y.at(r, j), 0.0);
        EXPECT_NEAR(y.at(r, j), ys.at(r, j), 1e-12);
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(CrossEntropy, MatchesNegativeLogSoftmax) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> z(9);
    for (auto& v : z) v = n(rng);
    const std::size_t target = rng() % 9;
    long double sum = 0;
    for (double v : z) sum += std::exp(static_cast<long double>(v));
    const double oracle = -static_cast<double>(std::log(std::exp(static_cast<long double>(z[target])) / sum));
    Tape<double> t;
    EXPECT_NEAR(cross_entropy(t.constant(Tensor<double>::row(z)), target).value()[0], oracle, 1e-9);
  }
  Tape<double> t;
  EXPECT_NEAR(cross_entropy(t.constant(Tensor<double>(1, 9, 0.25)), 3).value()[0], std::log(9.0), 1e-12);
  EXPECT_NEAR(std::log(9.0), 2.1972, 1e-4);
}

TEST(Ops, ShapeErrorsNameTheOp) {
  Tape<double> t;
  auto a = t.constant(Tensor<double>(2, 3));
  auto b = t.constant(Tensor<double>(2, 3));
  try {
    matmul(a, b);
    FAIL();
  } catch (const rfclink::ShapeMismatch& e) {
    EXPECT_NE(std::string(e.what()).find("matmul"), std::string::npos) << e.what();
  }
  EXPECT_THROW(add(a, t.constant(Tensor<double>(3, 2))), rfclink::ShapeMismatch);
  EXPECT_THROW(add_bias(a, t.constant(Tensor<double>(1, 2))), rfclink::ShapeMismatch);
  EXPECT_THROW(reshape(a, 4, 2), rfclink::ShapeMismatch);
  EXPECT_THROW(t.backward(a), rfclink::ShapeMismatch);
}

TEST(Ops, DropoutZeroRateIsIdentity) {
  std::mt19937_64 rng(1);
  Tape<double> t;
  Tensor<double> x(3, 3);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i) - 4.0;
  const auto& y = dropout(t.constant(x), 0.0, rng).value();
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(y[i], x[i]);
}

TEST(Ops, DropoutPreservesExpectation) {
  std::mt19937_64 rng(2);
  Tape<double> t;
  const auto& y = dropout(t.constant(Tensor<double>(200, 200, 1.0)), 0.25, rng).value();
  double sum = 0;
  std::size_t zeros = 0;
  for (double v : y.data()) {
    sum += v;
    zeros += v == 0.0;
    if (v != 0.0) EXPECT_NEAR(v, 1.0 / 0.75, 1e-12);
  }
  EXPECT_NEAR(sum / 40000.0, 1.0, 0.02);
  EXPECT_NEAR(static_cast<double>(zeros) / 40000.0, 0.25, 0.02);
}

TEST(Ops, UnfoldRowsLayout) {
  Tape<double> t;
  auto y = unfold_rows(t.constant(Tensor<double>({3, 1}, {1, 2, 3})), 3);
  EXPECT_EQ(y.value().shape(), (Shape{3, 3}));
  const std::vector<double> want{0, 1, 2, 1, 2, 3, 2, 3, 0};
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(y.value()[i], want[i]);
}

TEST(Ops, MaxPoolDropsRemainder) {
  Tape<double> t;
  auto y = max_pool(t.constant(Tensor<double>({3, 3}, {1, 5, 9, 4, 2, 8, 7, 7, 7})), 2, 2);
  EXPECT_EQ(y.value().shape(), (Shape{1, 1}));
  EXPECT_EQ(y.value()[0], 5.0);
}

TEST(ParamStore, SameSeedSameValues) {
  ParamStore<double> a(9), b(9);
  for (auto* s : {&a, &b}) {
    s->add("x", 10, 10, Init::Xavier);
    s->add("e", 50, 8, Init::Normal);
  }
  for (const auto& name : a.names())
    for (std::size_t i = 0; i < a.get(name).size(); ++i) EXPECT_EQ(a.get(name)[i], b.get(name)[i]);
  ParamStore<float> f(9);
  f.add("x", 10, 10, Init::Xavier);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(f.get("x")[i], static_cast<float>(a.get("x")[i]));
  EXPECT_THROW(a.add("x", 1, 1, Init::Zeros), rfclink::ConfigError);
  EXPECT_THROW(a.get("nope"), rfclink::ConfigError);
}

TEST(ParamStore, InitStatistics) {
  ParamStore<double> s(4);
  const auto& x = s.add("x", 300, 100, Init::Xavier);
  const auto& n = s.add("n", 300, 100, Init::Normal);
  const auto& z = s.add("z", 3, 3, Init::Zeros);
  const auto& o = s.add("o", 3, 3, Init::Ones);
  const double r = std::sqrt(6.0 / 400.0);
  double sx = 0, sxx = 0, sn = 0, snn = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_LE(std::abs(x[i]), r);
    sx += x[i];
    sxx += x[i] * x[i];
    sn += n[i];
    snn += n[i] * n[i];
  }
  const double m = static_cast<double>(x.size());
  EXPECT_NEAR(sx / m, 0.0, 0.01 * r);
  EXPECT_NEAR(sxx / m, r * r / 3.0, 0.03 * r * r / 3.0);
  EXPECT_NEAR(sn / m, 0.0, 0.001);
  EXPECT_NEAR(std::sqrt(snn / m), 0.02, 0.0005);
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(z[i], 0.0);
    EXPECT_EQ(o[i], 1.0);
  }
  EXPECT_EQ(s.parameter_count(), 60018u);
}

TEST(Checkpoint, RoundTripFloat) {
  TempDir tmp;
  ParamStore<float> a(1), b(2);
  for (auto* s : {&a, &b}) {
    s->add("w", 4, 3, Init::UnitNormal);
    s->add("b", 1, 3, Init::UnitNormal);
  }
  save_checkpoint(a, tmp / "m.txt", tmp / "p.bin");
  EXPECT_EQ(std::filesystem::file_size(tmp / "p.bin"), 15u * 4u);
  EXPECT_EQ(rfclink::testing::read_text(tmp / "m.txt"), "w 4x3 0\nb 1x3 48\n");
  load_checkpoint(b, tmp / "m.txt", tmp / "p.bin");
  for (const auto& name : a.names())
    for (std::size_t i = 0; i < a.get(name).size(); ++i) EXPECT_EQ(a.get(name)[i], b.get(name)[i]);
}

TEST(Checkpoint, DoubleStoresRoundToBinary32) {
  TempDir tmp;
  ParamStore<double> a(1), b(2);
  a.add("w", 5, 5, Init::UnitNormal);
  b.add("w", 5, 5, Init::UnitNormal);
  save_checkpoint(a, tmp / "m.txt", tmp / "p.bin");
  load_checkpoint(b, tmp / "m.txt", tmp / "p.bin");
  for (std::size_t i = 0; i < 25; ++i)
    EXPECT_EQ(b.get("w")[i], static_cast<double>(static_cast<float>(a.get("w")[i])));
}

TEST(Checkpoint, Errors) {
  TempDir tmp;
  ParamStore<float> a(1);
  a.add("w", 2, 2, Init::Ones);
  save_checkpoint(a, tmp / "m.txt", tmp / "p.bin");

  ParamStore<float> wrong_shape(1);
  wrong_shape.add("w", 2, 3, Init::Ones);
  EXPECT_THROW(load_checkpoint(wrong_shape, tmp / "m.txt", tmp / "p.bin"), rfclink::ShapeMismatch);
  ParamStore<float> extra(1);
  extra.add("w", 2, 2, Init::Ones);
  extra.add("v", 1, 1, Init::Ones);
  EXPECT_THROW(load_checkpoint(extra, tmp / "m.txt", tmp / "p.bin"), rfclink::ConfigError);
  ParamStore<float> other(1);
  other.add("q", 2, 2, Init::Ones);
  EXPECT_THROW(load_checkpoint(other, tmp / "m.txt", tmp / "p.bin"), rfclink::ConfigError);
  EXPECT_THROW(load_checkpoint(a, tmp / "none.txt", tmp / "p.bin"), rfclink::NotFound);
  rfclink::testing::write_text(tmp / "short.bin", "ab");
  EXPECT_THROW(load_checkpoint(a, tmp / "m.txt", tmp / "short.bin"), rfclink::ParseError);
  rfclink::testing::write_text(tmp / "bad.txt", "w 2by2 0\n");
  EXPECT_THROW(load_checkpoint(a, tmp / "bad.txt", tmp / "p.bin"), rfclink::ParseError);
}

TEST(Optimizer, SgdStep) {
  ParamStore<double> s(1);
  auto& w = s.add("w", 1, 3, Init::UnitNormal);
  const std::vector<double> w0(w.data().begin(), w.data().end());
  const std::vector<double> g{0.5, -1.0, 2.0};
  for (std::size_t i = 0; i < 3; ++i) w.grad()[i] = g[i];
  Optimizer<double> opt({OptimizerKind::SGD, 0.1, 0.01});
  opt.step(s);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(w[i], w0[i] - 0.1 * (g[i] + 0.01 * w0[i]), 1e-15);
    EXPECT_EQ(w.grad()[i], 0.0);
  }
}

TEST(Optimizer, AdamFirstStepMovesByLearningRate) {
  ParamStore<double> s(1);
  auto& w = s.add("w", 1, 3, Init::UnitNormal);
  const std::vector<double> w0(w.data().begin(), w.data().end());
  const std::vector<double> g{0.5, -1.0, 2.0};
  for (std::size_t i = 0; i < 3; ++i) w.grad()[i] = g[i];
  OptimizerConfig c;
  c.learning_rate = 0.01;
  Optimizer<double> opt(c);
  opt.step(s);
  for (std::size_t i = 0; i < 3; ++i) {
    const double expected = w0[i] - 0.01 * g[i] / (std::abs(g[i]) + 1e-8);
    EXPECT_NEAR(w[i], expected, 1e-12);
  }
}

TEST(Optimizer, AdamMatchesReference) {
  ParamStore<double> s(1);
  auto& w = s.add("w", 1, 1, Init::Zeros);
  OptimizerConfig c;
  c.learning_rate = 0.1;
  Optimizer<double> opt(c);
  double m = 0, v = 0, x = 0;
  const double gs[] = {1.0, -0.5, 0.25, 3.0};
  for (int t = 1; t <= 4; ++t) {
    const double g = gs[t - 1];
    w.grad()[0] = g;
    opt.step(s);
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    x -= 0.1 * (m / (1 - std::pow(0.9, t))) / (std::sqrt(v / (1 - std::pow(0.999, t))) + 1e-8);
    EXPECT_NEAR(w[0], x, 1e-12) << "step " << t;
  }
}

TEST(Optimizer, FrozenPrefixKeepsValues) {
  ParamStore<double> s(1);
  auto& a = s.add("encoder.w", 2, 2, Init::UnitNormal);
  auto& b = s.add("head.w", 2, 2, Init::UnitNormal);
  const std::vector<double> a0(a.data().begin(), a.data().end());
  const std::vector<double> b0(b.data().begin(), b.data().end());
  for (std::size_t i = 0; i < 4; ++i) a.grad()[i] = b.grad()[i] = 1.0;
  Optimizer<double> opt({OptimizerKind::SGD, 0.5, 0.0});
  opt.freeze("encoder.");
  opt.step(s);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(a[i], a0[i]);
    EXPECT_EQ(a.grad()[i], 0.0);
    EXPECT_EQ(b[i], b0[i] - 0.5);
  }
}
