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

#include <functional>
#include <ostream>
#include <span>
#include <string>

#include "rfclink/dataset.hpp"
#include "rfclink/eval/config.hpp"
#include "rfclink/eval/metrics.hpp"

namespace rfclink::eval {

using Predictor = std::function<std::size_t(const dataset::Sample&)>;
// Trains on the given samples with the given seed and returns a classifier
// into the schema's class indices.
using Learner = std::function<Predictor(std::span<const dataset::Sample>, std::uint64_t)>;

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_size = 0;
  Confusion confusion;
  Metrics metrics;
};

struct CvResult {
  std::vector<FoldResult> folds;
  Confusion pooled_confusion;
  Metrics pooled;  // from the confusion summed over folds
  Metrics mean;    // average of per-fold metrics
};

// Stratified k-fold: fold i is held out while the learner trains on the rest
// with seed + i. Throws TooFewSamples.
CvResult cross_validate(std::span<const dataset::Sample> samples, const dataset::PkbSchema& schema,
                        const Learner& learner, std::size_t k, std::uint64_t seed);

Metrics mean_metrics(std::span<const FoldResult> folds);

// fit() per fold.
Learner make_learner(ModelKind kind, const ExperimentConfig& config, const dataset::PkbSchema& schema);

struct RunInfo {
  std::string model;
  std::string config_hash;
  std::uint64_t seed = 0;
};

// One "fold" record per fold and a closing "summary" record, one JSON object
// per line.
void write_results(std::ostream& out, const CvResult& result, const RunInfo& info);

}  // namespace rfclink::eval
