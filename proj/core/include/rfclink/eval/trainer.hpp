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

#include <span>
#include <vector>

#include "rfclink/eval/models.hpp"
#include "rfclink/num/optimizer.hpp"

namespace rfclink::eval {

struct TrainConfig {
  std::size_t epochs = 6;
  double learning_rate = 2e-5;
  std::size_t batch_size = 1;
  std::uint64_t seed = 42;
  num::OptimizerKind optimizer = num::OptimizerKind::Adam;
  // When non-zero, training stops after exactly this many updates and
  // `epochs` is ignored.
  std::size_t iterations = 0;
  double weight_decay = 0.0;

  // Throws ConfigError.
  void validate() const;
};

// Adam at 2e-5 for the encoder-based kinds, SGD at 2e-2 for the classic
// baselines (with L2 for the SVM).
TrainConfig default_train_config(ModelKind kind);

struct TrainResult {
  std::vector<double> epoch_loss;  // mean loss of every pass over the data
  std::size_t updates = 0;
};

// Mini-batch training with a seeded shuffle per pass. Dropout draws from the
// same seeded stream. Throws EmptyTrainingSet.
template <typename T>
TrainResult train(fusion::Classifier<T>& model, std::span<const fusion::Example> examples,
                  const TrainConfig& config);

// Inference-mode class probabilities (1 x C).
template <typename T>
num::Tensor<T> predict_proba(const fusion::Classifier<T>& model, const fusion::Example& ex);

// Index of the largest logit; ties go to the lower index.
template <typename T>
std::size_t predict(const fusion::Classifier<T>& model, const fusion::Example& ex);

// Mean loss over examples in inference mode.
template <typename T>
double mean_loss(const fusion::Classifier<T>& model, std::span<const fusion::Example> examples);

}  // namespace rfclink::eval
