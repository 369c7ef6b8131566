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

#include "rfclink/eval/trainer.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "rfclink/error.hpp"

namespace rfclink::eval {

void TrainConfig::validate() const {
  if (!(learning_rate > 0)) throw ConfigError("learning_rate must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (weight_decay < 0) throw ConfigError("weight_decay must be non-negative");
}

TrainConfig default_train_config(ModelKind kind) {
  TrainConfig c;
  if (is_classic(kind)) {
    c.learning_rate = 2e-2;
    c.optimizer = num::OptimizerKind::SGD;
    if (kind == ModelKind::SVM) c.weight_decay = 1e-3;
  }
  return c;
}

template <typename T>
TrainResult train(fusion::Classifier<T>& model, std::span<const fusion::Example> examples,
                  const TrainConfig& config) {
  config.validate();
  if (examples.empty()) throw EmptyTrainingSet("train: no examples");
  TrainResult result;
  const std::size_t passes_wanted = config.iterations > 0 ? 0 : config.epochs;
  if (config.iterations == 0 && passes_wanted == 0) return result;

  num::OptimizerConfig oc;
  oc.kind = config.optimizer;
  oc.learning_rate = config.learning_rate;
  oc.weight_decay = config.weight_decay;
  num::Optimizer<T> opt(oc);
  for (const auto& p : model.frozen_prefixes()) opt.freeze(p);

  std::mt19937_64 rng(config.seed);
  encoder::ForwardContext ctx{true, &rng};
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  model.params().zero_grad();

  auto done = [&] {
    return config.iterations > 0 ? result.updates >= config.iterations
                                 : result.epoch_loss.size() >= passes_wanted;
  };
  while (!done()) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size() && !(config.iterations > 0 && done());
         start += config.batch_size) {
      const auto end = std::min(order.size(), start + config.batch_size);
      const T inv = T(1) / static_cast<T>(end - start);
      for (std::size_t i = start; i < end; ++i) {
        num::Tape<T> tape;
        auto loss = model.loss(tape, examples[order[i]], ctx);
        total += static_cast<double>(loss.value()[0]);
        ++seen;
        tape.backward(end - start == 1 ? loss : num::scale(loss, inv));
      }
      opt.step(model.params());
      ++result.updates;
    }
    result.epoch_loss.push_back(total / static_cast<double>(seen));
  }
  return result;
}

template <typename T>
num::Tensor<T> predict_proba(const fusion::Classifier<T>& model, const fusion::Example& ex) {
  num::Tape<T> tape;
  return fusion::class_probabilities(model.logits(tape, ex, encoder::ForwardContext{}).value());
}

template <typename T>
std::size_t predict(const fusion::Classifier<T>& model, const fusion::Example& ex) {
  num::Tape<T> tape;
  const auto& z = model.logits(tape, ex, encoder::ForwardContext{}).value();
  return static_cast<std::size_t>(std::max_element(z.data().begin(), z.data().end()) - z.data().begin());
}

template <typename T>
double mean_loss(const fusion::Classifier<T>& model, std::span<const fusion::Example> examples) {
  if (examples.empty()) throw EmptyInput("mean_loss: no examples");
  double total = 0;
  for (const auto& ex : examples) {
    num::Tape<T> tape;
    total += static_cast<double>(model.loss(tape, ex, encoder::ForwardContext{}).value()[0]);
  }
  return total / static_cast<double>(examples.size());
}

#define RFCLINK_INSTANTIATE(T)                                                                       \
  template TrainResult train<T>(fusion::Classifier<T>&, std::span<const fusion::Example>,          \
                                const TrainConfig&);                                               \
  template num::Tensor<T> predict_proba<T>(const fusion::Classifier<T>&, const fusion::Example&); \
  template std::size_t predict<T>(const fusion::Classifier<T>&, const fusion::Example&);          \
  template double mean_loss<T>(const fusion::Classifier<T>&, std::span<const fusion::Example>);

RFCLINK_INSTANTIATE(float)
RFCLINK_INSTANTIATE(double)
#undef RFCLINK_INSTANTIATE

}  // namespace rfclink::eval
