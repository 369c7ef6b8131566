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

#include <filesystem>
#include <memory>
#include <span>

#include "rfclink/dataset.hpp"
#include "rfclink/eval/config.hpp"

namespace rfclink::eval {

// Vocabulary over the description and field-name tokens of `samples`,
// capped at cfg.vocab_size ids.
encoder::Vocab build_vocab(std::span<const dataset::Sample> samples, const encoder::EncoderConfig& cfg);

// A model together with everything needed to feed it raw text.
struct TrainedModel {
  ModelKind kind = ModelKind::JointC;
  ExperimentConfig config;
  std::uint64_t seed = 42;
  dataset::PkbSchema schema;
  encoder::Vocab vocab;
  std::unique_ptr<fusion::Classifier<float>> model;
  TrainResult result;

  // Encoder settings with vocab_size set to the vocabulary in use.
  encoder::EncoderConfig encoder_config() const;
  fusion::Example example(const std::string& field, const std::string& description,
                          std::size_t label = 0) const;
  std::size_t predict(const std::string& field, const std::string& description) const;
  std::vector<double> probabilities(const std::string& field, const std::string& description) const;
};

// Builds an untrained model over a vocabulary.
TrainedModel make_model(ModelKind kind, const ExperimentConfig& config, const dataset::PkbSchema& schema,
                        encoder::Vocab vocab, std::uint64_t seed);

// Vocabulary from the training samples, model initialised and trained with
// `seed` (config.train.seed is overridden).
TrainedModel fit(ModelKind kind, const ExperimentConfig& config, const dataset::PkbSchema& schema,
                 std::span<const dataset::Sample> train, std::uint64_t seed);

// Checkpoint directory: manifest.txt, params.bin, config.txt, vocab.txt,
// schema.jsonl and model.json (kind, seed, config hash).
void save_model(const TrainedModel& m, const std::filesystem::path& dir);
// Throws NotFound, ParseError, ConfigError or ShapeMismatch when the files
// are missing or disagree with each other.
TrainedModel load_model(const std::filesystem::path& dir);

}  // namespace rfclink::eval
