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

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "rfclink/num/tensor.hpp"

namespace rfclink::num {

enum class Init {
  Zeros,
  Ones,
  Xavier,   // uniform(-r, r), r = sqrt(6 / (fan_in + fan_out))
  Normal,   // normal(0, 0.02), for embedding tables
  UnitNormal,
};

// Named trainable tensors. Initial values are drawn from one seeded stream in
// registration order, so a store built twice with the same seed and the same
// sequence of add() calls holds identical values. Values are drawn in double
// precision, which makes float and double stores of one model agree up to
// rounding.
template <typename T>
class ParamStore {
 public:
  explicit ParamStore(std::uint64_t seed = 42) : seed_(seed), rng_(seed) {}

  ParamStore(const ParamStore&) = delete;
  ParamStore& operator=(const ParamStore&) = delete;

  Tensor<T>& add(const std::string& name, std::size_t rows, std::size_t cols, Init init) {
    if (params_.count(name)) throw ConfigError("parameter '" + name + "' registered twice");
    Tensor<T> t(rows, cols);
    switch (init) {
      case Init::Zeros:
        break;
      case Init::Ones:
        t.fill(T(1));
        break;
      case Init::Xavier: {
        const double r = std::sqrt(6.0 / static_cast<double>(rows + cols));
        std::uniform_real_distribution<double> u(-r, r);
        for (auto& v : t.data()) v = static_cast<T>(u(rng_));
        break;
      }
      case Init::Normal: {
        std::normal_distribution<double> n(0.0, 0.02);
        for (auto& v : t.data()) v = static_cast<T>(n(rng_));
        break;
      }
      case Init::UnitNormal: {
        std::normal_distribution<double> n(0.0, 1.0);
        for (auto& v : t.data()) v = static_cast<T>(n(rng_));
        break;
      }
    }
    order_.push_back(name);
    return params_.emplace(name, std::move(t)).first->second;
  }

  bool contains(const std::string& name) const { return params_.count(name) != 0; }

  Tensor<T>& get(const std::string& name) {
    auto it = params_.find(name);
    if (it == params_.end()) throw ConfigError("no parameter named '" + name + "'");
    return it->second;
  }
  const Tensor<T>& get(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw ConfigError("no parameter named '" + name + "'");
    return it->second;
  }

  // Registration order.
  const std::vector<std::string>& names() const { return order_; }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& [_, t] : params_) n += t.size();
    return n;
  }

  void zero_grad() {
    for (auto& [_, t] : params_) t.zero_grad();
  }

  std::uint64_t seed() const { return seed_; }

  // Copies values by name from a store of any precision; names and shapes
  // must agree exactly.
  template <typename U>
  void assign_from(const ParamStore<U>& other) {
    if (other.names().size() != order_.size())
      throw ConfigError("parameter sets differ in size");
    for (const auto& name : order_) {
      const auto& src = other.get(name);
      auto& dst = get(name);
      if (src.shape() != dst.shape())
        throw ShapeMismatch("parameter '" + name + "': " + to_string(src.shape()) + " vs " +
                            to_string(dst.shape()));
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<T>(src[i]);
    }
  }

  // Copies every parameter whose name also exists in `other`; returns how
  // many were copied. Shapes of shared names must agree.
  template <typename U>
  std::size_t assign_matching_from(const ParamStore<U>& other) {
    std::size_t copied = 0;
    for (const auto& name : order_) {
      if (!other.contains(name)) continue;
      const auto& src = other.get(name);
      auto& dst = get(name);
      if (src.shape() != dst.shape())
        throw ShapeMismatch("parameter '" + name + "': " + to_string(src.shape()) + " vs " +
                            to_string(dst.shape()));
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<T>(src[i]);
      ++copied;
    }
    return copied;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::map<std::string, Tensor<T>> params_;
  std::vector<std::string> order_;
};

}  // namespace rfclink::num
