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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "rfclink/num/param_store.hpp"
#include "rfclink/num/tape.hpp"

namespace rfclink::num {

struct GradCheckOptions {
  double step = 1e-5;
  double tolerance = 1e-6;
  // 0 checks every entry; otherwise a seeded sample of this many entries is
  // drawn from each parameter that is larger.
  std::size_t max_entries_per_param = 0;
  std::uint64_t seed = 7;
  // Lower bound on the denominator |analytic| + |numeric|. Entries whose
  // gradient is (near) zero are then judged on absolute difference, since
  // central differences cannot resolve them relatively.
  double floor = 1e-12;
};

struct GradCheckEntry {
  std::string param;
  std::size_t index = 0;
  double analytic = 0;
  double numeric = 0;
  double rel_error = 0;
};

struct GradCheckReport {
  std::size_t checked = 0;
  double max_rel_error = 0;
  GradCheckEntry worst;
  std::vector<GradCheckEntry> failures;

  bool passed() const { return failures.empty(); }
};

inline double relative_error(double a, double b, double floor = 1e-12) {
  return std::abs(a - b) / std::max(floor, std::abs(a) + std::abs(b));
}

template <typename T>
using ScalarFn = std::function<Var<T>(Tape<T>&)>;

// Compares backprop gradients of `analytic` (precision A) with central
// differences of `numeric` (precision N) at the same parameter values. The
// two stores must hold the same parameters; using a double-precision numeric
// side checks a float backward pass against a 64-bit oracle.
template <typename A, typename N>
GradCheckReport grad_check(const ScalarFn<A>& analytic, ParamStore<A>& analytic_params,
                           const ScalarFn<N>& numeric, ParamStore<N>& numeric_params,
                           const GradCheckOptions& options = {}) {
  analytic_params.zero_grad();
  {
    Tape<A> tape;
    tape.backward(analytic(tape));
  }
  std::mt19937_64 rng(options.seed);
  GradCheckReport report;
  const double h = options.step;
  for (const auto& name : analytic_params.names()) {
    auto& pa = analytic_params.get(name);
    auto& pn = numeric_params.get(name);
    std::vector<double> grad(pa.size(), 0.0);
    if (pa.has_grad())
      for (std::size_t i = 0; i < pa.size(); ++i) grad[i] = static_cast<double>(pa.grad()[i]);

    std::vector<std::size_t> indices(pa.size());
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    if (options.max_entries_per_param && indices.size() > options.max_entries_per_param) {
      std::shuffle(indices.begin(), indices.end(), rng);
      indices.resize(options.max_entries_per_param);
      std::sort(indices.begin(), indices.end());
    }
    for (auto i : indices) {
      const N saved = pn[i];
      pn[i] = saved + static_cast<N>(h);
      double up, down;
      {
        Tape<N> tape;
        up = static_cast<double>(numeric(tape).value()[0]);
      }
      pn[i] = saved - static_cast<N>(h);
      {
        Tape<N> tape;
        down = static_cast<double>(numeric(tape).value()[0]);
      }
      pn[i] = saved;
      GradCheckEntry e{name, i, grad[i], (up - down) / (2.0 * h), 0.0};
      e.rel_error = relative_error(e.analytic, e.numeric, options.floor);
      ++report.checked;
      if (e.rel_error >= report.max_rel_error) {
        report.max_rel_error = e.rel_error;
        report.worst = e;
      }
      if (e.rel_error >= options.tolerance) report.failures.push_back(e);
    }
  }
  analytic_params.zero_grad();
  return report;
}

template <typename T>
GradCheckReport grad_check(const ScalarFn<T>& f, ParamStore<T>& params,
                           const GradCheckOptions& options = {}) {
  return grad_check<T, T>(f, params, f, params, options);
}

}  // namespace rfclink::num
