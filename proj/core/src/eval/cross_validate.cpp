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

#include "rfclink/eval/cross_validate.hpp"

#include <memory>
#include <vector>

#include <json.hpp>

#include "rfclink/error.hpp"
#include "rfclink/eval/pipeline.hpp"

namespace rfclink::eval {

CvResult cross_validate(std::span<const dataset::Sample> samples, const dataset::PkbSchema& schema,
                        const Learner& learner, std::size_t k, std::uint64_t seed) {
  const auto labels = dataset::class_indices(samples, schema);
  const auto split = dataset::make_folds(samples.size(), k, seed, labels);
  CvResult out;
  out.pooled_confusion = Confusion(schema.num_classes());
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<char> held(samples.size(), 0);
    for (auto i : split.folds[f]) held[i] = 1;
    std::vector<dataset::Sample> train;
    for (std::size_t i = 0; i < samples.size(); ++i)
      if (!held[i]) train.push_back(samples[i]);
    const auto predictor = learner(std::span<const dataset::Sample>(train), seed + f);

    FoldResult r;
    r.fold = f;
    r.train_size = train.size();
    r.confusion = Confusion(schema.num_classes());
    for (auto i : split.folds[f]) update_confusion(r.confusion, predictor(samples[i]), labels[i]);
    r.metrics = compute_metrics(r.confusion);
    out.pooled_confusion.merge(r.confusion);
    out.folds.push_back(std::move(r));
  }
  out.pooled = compute_metrics(out.pooled_confusion);
  out.mean = mean_metrics(out.folds);
  return out;
}

Metrics mean_metrics(std::span<const FoldResult> folds) {
  if (folds.empty()) throw ZeroSamples("mean_metrics: no folds");
  Metrics m;
  for (const auto& f : folds) {
    m.accuracy += f.metrics.accuracy;
    m.avg_precision += f.metrics.avg_precision;
    m.avg_recall += f.metrics.avg_recall;
    m.avg_f += f.metrics.avg_f;
    m.n += f.metrics.n;
  }
  const auto k = static_cast<double>(folds.size());
  m.accuracy /= k;
  m.avg_precision /= k;
  m.avg_recall /= k;
  m.avg_f /= k;
  return m;
}

Learner make_learner(ModelKind kind, const ExperimentConfig& config, const dataset::PkbSchema& schema) {
  return [=](std::span<const dataset::Sample> train, std::uint64_t seed) -> Predictor {
    auto model = std::make_shared<TrainedModel>(fit(kind, config, schema, train, seed));
    return [model](const dataset::Sample& s) { return model->predict(s.header_field, s.description); };
  };
}

namespace {

nlohmann::ordered_json to_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["n"] = m.n;
  j["acc"] = m.accuracy;
  j["avg_p"] = m.avg_precision;
  j["avg_r"] = m.avg_recall;
  j["avg_f"] = m.avg_f;
  return j;
}

}  // namespace

void write_results(std::ostream& out, const CvResult& result, const RunInfo& info) {
  for (const auto& f : result.folds) {
    nlohmann::ordered_json j;
    j["record"] = "fold";
    j["model"] = info.model;
    j["config"] = info.config_hash;
    j["seed"] = info.seed;
    j["fold"] = f.fold;
    j["train"] = f.train_size;
    const auto metrics = to_json(f.metrics);
    for (const auto& [key, value] : metrics.items()) j[key] = value;
    out << j.dump() << '\n';
  }
  nlohmann::ordered_json s;
  s["record"] = "summary";
  s["model"] = info.model;
  s["config"] = info.config_hash;
  s["seed"] = info.seed;
  s["folds"] = result.folds.size();
  s["pooled"] = to_json(result.pooled);
  s["mean"] = to_json(result.mean);
  out << s.dump() << '\n';
}

}  // namespace rfclink::eval
