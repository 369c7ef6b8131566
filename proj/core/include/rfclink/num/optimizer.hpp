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

#include <Eigen/Core>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "rfclink/num/param_store.hpp"

namespace rfclink::num {

enum class OptimizerKind { SGD, Adam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 2e-5;
  double weight_decay = 0.0;  // L2 coefficient, added to the gradient
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Applies one update from the gradients currently held by the store, then
// clears them.
template <typename T>
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config) : config_(config) {}

  // Parameters whose name starts with `prefix` keep their values; their
  // gradients are still cleared.
  void freeze(std::string prefix) { frozen_.push_back(std::move(prefix)); }

  void step(ParamStore<T>& store) {
    ++steps_;
    const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(steps_));
    const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(steps_));
    for (const auto& name : store.names()) {
      auto& p = store.get(name);
      if (!p.has_grad()) continue;
      if (is_frozen(name)) {
        p.zero_grad();
        continue;
      }
      auto gs = p.grad();
      auto ws = p.data();
      const auto n = static_cast<Eigen::Index>(ws.size());
      const auto g = Eigen::Map<const Eigen::Array<T, Eigen::Dynamic, 1>>(gs.data(), n).template cast<double>();
      auto w = Eigen::Map<Eigen::Array<T, Eigen::Dynamic, 1>>(ws.data(), n);
      const Eigen::ArrayXd gi = g + config_.weight_decay * w.template cast<double>();
      if (config_.kind == OptimizerKind::SGD) {
        w -= (config_.learning_rate * gi).template cast<T>();
      } else {
        auto& [mv, vv] = moments_[name];
        if (mv.size() == 0) {
          mv = Eigen::ArrayXd::Zero(n);
          vv = Eigen::ArrayXd::Zero(n);
        }
        mv = config_.beta1 * mv + (1.0 - config_.beta1) * gi;
        vv = config_.beta2 * vv + (1.0 - config_.beta2) * gi.square();
        w -= (config_.learning_rate * (mv / bc1) / ((vv / bc2).sqrt() + config_.epsilon)).template cast<T>();
      }
      p.zero_grad();
    }
  }

  const OptimizerConfig& config() const { return config_; }

 private:
  bool is_frozen(const std::string& name) const {
    for (const auto& f : frozen_)
      if (name.compare(0, f.size(), f) == 0) return true;
    return false;
  }

  OptimizerConfig config_;
  std::vector<std::string> frozen_;
  long steps_ = 0;
  std::map<std::string, std::pair<Eigen::ArrayXd, Eigen::ArrayXd>> moments_;
};

}  // namespace rfclink::num
