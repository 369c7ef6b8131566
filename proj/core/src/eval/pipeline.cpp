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

#include "rfclink/eval/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rfclink/encoder/tokenizer.hpp"
#include "rfclink/error.hpp"
#include "rfclink/num/checkpoint.hpp"

namespace rfclink::eval {

encoder::Vocab build_vocab(std::span<const dataset::Sample> samples, const encoder::EncoderConfig& cfg) {
  std::vector<std::vector<std::string>> corpus;
  corpus.reserve(2 * samples.size());
  for (const auto& s : samples) {
    corpus.push_back(encoder::tokenize(s.description, cfg.max_desc_len, false));
    corpus.push_back(encoder::tokenize(s.header_field, cfg.max_field_len, false));
  }
  return encoder::Vocab::build(corpus, cfg.vocab_size);
}

encoder::EncoderConfig TrainedModel::encoder_config() const {
  auto cfg = config.encoder;
  cfg.vocab_size = vocab.size();
  return cfg;
}

fusion::Example TrainedModel::example(const std::string& field, const std::string& description,
                                      std::size_t label) const {
  return fusion::make_example(field, description, label, vocab, encoder_config());
}

std::size_t TrainedModel::predict(const std::string& field, const std::string& description) const {
  return eval::predict(*model, example(field, description));
}

std::vector<double> TrainedModel::probabilities(const std::string& field, const std::string& description) const {
  const auto p = predict_proba(*model, example(field, description));
  return {p.data().begin(), p.data().end()};
}

TrainedModel make_model(ModelKind kind, const ExperimentConfig& config, const dataset::PkbSchema& schema,
                        encoder::Vocab vocab, std::uint64_t seed) {
  TrainedModel m;
  m.kind = kind;
  m.config = config;
  m.seed = seed;
  m.schema = schema;
  m.vocab = std::move(vocab);
  ModelSpec spec;
  spec.kind = kind;
  spec.encoder = m.encoder_config();
  spec.domain = config.domain_kind;
  spec.num_classes = schema.num_classes();
  spec.mask_padding = config.mask_padding;
  spec.seed = seed;
  m.model = build_model<float>(spec);
  return m;
}

TrainedModel fit(ModelKind kind, const ExperimentConfig& config, const dataset::PkbSchema& schema,
                 std::span<const dataset::Sample> train, std::uint64_t seed) {
  if (train.empty()) throw EmptyTrainingSet("fit: no training samples");
  auto m = make_model(kind, config, schema, build_vocab(train, config.encoder), seed);
  std::vector<fusion::Example> examples;
  examples.reserve(train.size());
  for (const auto& s : train)
    examples.push_back(m.example(s.header_field, s.description, schema.class_index(s.label)));
  auto tc = config.train;
  tc.seed = seed;
  m.result = eval::train(*m.model, std::span<const fusion::Example>(examples), tc);
  return m;
}

void save_model(const TrainedModel& m, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  num::save_checkpoint(m.model->params(), dir / "manifest.txt", dir / "params.bin");
  {
    std::ofstream out(dir / "config.txt", std::ios::binary);
    out << to_text(m.config);
    if (!out) throw Error("cannot write " + (dir / "config.txt").string());
  }
  m.vocab.save(dir / "vocab.txt");
  m.schema.save(dir / "schema.jsonl");
  nlohmann::ordered_json meta;
  meta["model_kind"] = std::string(to_string(m.kind));
  meta["seed"] = m.seed;
  meta["config"] = config_hash(m.config);
  std::ofstream out(dir / "model.json", std::ios::binary);
  out << meta.dump() << '\n';
  if (!out) throw Error("cannot write " + (dir / "model.json").string());
}

TrainedModel load_model(const std::filesystem::path& dir) {
  std::ifstream meta_in(dir / "model.json");
  if (!meta_in) throw NotFound("no checkpoint at " + dir.string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("model.json: " + std::string(e.what()));
  }
  if (!meta.contains("model_kind") || !meta.contains("seed") || !meta.contains("config"))
    throw ParseError("model.json: missing model_kind, seed or config");
  const auto kind = parse_model_kind(meta["model_kind"].get<std::string>());
  const auto config = load_config(dir / "config.txt", default_config(kind));
  if (config_hash(config) != meta["config"].get<std::string>())
    throw ConfigError("config.txt does not match the checkpoint's config hash");
  auto m = make_model(kind, config, dataset::PkbSchema::load(dir / "schema.jsonl"),
                      encoder::Vocab::load(dir / "vocab.txt"), meta["seed"].get<std::uint64_t>());
  num::load_checkpoint(m.model->params(), dir / "manifest.txt", dir / "params.bin");
  return m;
}

}  // namespace rfclink::eval
