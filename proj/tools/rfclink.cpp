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

// rfclink: fetch RFCs, parse header diagrams, build the field dataset, train
// and evaluate field classifiers, and link single fields.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "rfclink/dataset.hpp"
#include "rfclink/error.hpp"
#include "rfclink/eval/cross_validate.hpp"
#include "rfclink/eval/pipeline.hpp"
#include "rfclink/header_parser.hpp"
#include "rfclink/rfc_corpus.hpp"

namespace {

using namespace rfclink;

const std::vector<std::string> kModelKinds = {"joint-a", "joint-b", "joint-c", "encoder-only", "domain-only",
                                              "svm",     "bpnn",    "cnn",     "bigru"};

struct FetchArgs {
  std::vector<int> rfcs;
  std::string cache;
  std::string base_uri{corpus::kDefaultBaseUri};
};

int run_fetch(const FetchArgs& a) {
  corpus::FetchOptions opts;
  opts.base_uri = a.base_uri;
  int status = 0;
  for (int n : a.rfcs) {
    try {
      const auto doc = corpus::fetch_rfc(n, a.cache, opts);
      std::cout << "rfc " << n << ": " << corpus::cache_path(a.cache, n).string() << " (" << doc.lines.size()
                << " lines)\n";
    } catch (const Error& e) {
      std::cerr << "rfc " << n << ": " << e.what() << '\n';
      status = 1;
    }
  }
  return status;
}

struct ParseArgs {
  int rfc = 0;
  std::string cache, out;
};

int run_parse(const ParseArgs& a) {
  const auto doc = corpus::load_cached(a.rfc, a.cache);
  const auto diagrams = header::extract_diagrams(doc);
  const auto catalog = dataset::build_catalog(doc, diagrams);
  dataset::save_catalog(a.out, catalog);
  std::cout << "rfc " << a.rfc << ": " << diagrams.size() << " diagrams, " << catalog.size() << " fields\n";
  return 0;
}

struct BuildArgs {
  std::vector<std::string> catalogs;
  std::string annotations, schema, out;
};

void print_counts(const std::vector<dataset::Sample>& samples, const dataset::PkbSchema& schema) {
  const auto counts = dataset::category_counts(samples, schema);
  std::cout << std::left << std::setw(22) << "Category" << "Number\n";
  for (std::size_t c = 0; c < counts.size(); ++c)
    std::cout << std::left << std::setw(22) << schema.active[c] << counts[c] << '\n';
  std::cout << std::left << std::setw(22) << "Total" << samples.size() << '\n';
}

int run_build(const BuildArgs& a) {
  const auto schema = dataset::PkbSchema::load(a.schema);
  std::vector<dataset::CatalogEntry> catalog;
  for (const auto& path : a.catalogs) {
    auto part = dataset::load_catalog(path);
    catalog.insert(catalog.end(), part.begin(), part.end());
  }
  const auto annotations = dataset::load_annotations(a.annotations);
  const auto samples = dataset::build_samples(catalog, annotations, schema);
  dataset::save_samples(a.out, samples);
  print_counts(samples, schema);
  return 0;
}

struct TrainArgs {
  std::string data, schema, kind, config, out;
  std::uint64_t seed = 42;
};

eval::ExperimentConfig resolve_config(eval::ModelKind kind, const std::string& path) {
  const auto base = eval::default_config(kind);
  return path.empty() ? base : eval::load_config(path, base);
}

int run_train(const TrainArgs& a) {
  const auto kind = eval::parse_model_kind(a.kind);
  const auto schema = dataset::PkbSchema::load(a.schema);
  const auto samples = dataset::load_samples(a.data);
  const auto config = resolve_config(kind, a.config);
  const auto model = eval::fit(kind, config, schema, samples, a.seed);
  eval::save_model(model, a.out);
  if (model.result.epoch_loss.empty()) {
    std::cout << "no training passes\n";
  } else {
    std::printf("final training loss: %.6f (%zu passes, %zu updates)\n", model.result.epoch_loss.back(),
                model.result.epoch_loss.size(), model.result.updates);
  }
  return 0;
}

struct EvaluateArgs {
  std::string data, schema, kind, config, out;
  std::size_t folds = 10;
  std::uint64_t seed = 42;
};

int run_evaluate(const EvaluateArgs& a) {
  const auto kind = eval::parse_model_kind(a.kind);
  const auto schema = dataset::PkbSchema::load(a.schema);
  const auto samples = dataset::load_samples(a.data);
  const auto config = resolve_config(kind, a.config);
  const auto result =
      eval::cross_validate(samples, schema, eval::make_learner(kind, config, schema), a.folds, a.seed);
  std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + a.out);
  eval::write_results(out, result, {a.kind, eval::config_hash(config), a.seed});
  std::printf("%-14s %-8s %8s %8s %8s %8s\n", "Model", "", "Acc", "Avg_P", "Avg_R", "Avg_F");
  for (const auto& [name, m] : {std::pair{"pooled", result.pooled}, std::pair{"mean", result.mean}})
    std::printf("%-14s %-8s %7.1f%% %7.1f%% %7.1f%% %7.1f%%\n", a.kind.c_str(), name, 100 * m.accuracy,
                100 * m.avg_precision, 100 * m.avg_recall, 100 * m.avg_f);
  return 0;
}

struct LinkArgs {
  std::string checkpoint, field, description;
};

int run_link(const LinkArgs& a) {
  const auto model = eval::load_model(a.checkpoint);
  const auto p = model.probabilities(a.field, a.description);
  std::size_t best = 0;
  for (std::size_t c = 1; c < p.size(); ++c)
    if (p[c] > p[best]) best = c;
  std::printf("entity: %s (%.6f)\n", model.schema.active[best].c_str(), p[best]);
  for (std::size_t c = 0; c < p.size(); ++c) std::printf("  %-20s %.6f\n", model.schema.active[c].c_str(), p[c]);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Header field extraction and entity linking over RFC packet diagrams"};
  app.require_subcommand(1);

  FetchArgs fetch;
  auto* fetch_cmd = app.add_subcommand("fetch", "Download RFC plaintext into the cache");
  fetch_cmd->add_option("--rfc", fetch.rfcs, "RFC numbers")->required()->check(CLI::PositiveNumber);
  fetch_cmd->add_option("--cache", fetch.cache, "Cache directory")->required();
  fetch_cmd->add_option("--base-uri", fetch.base_uri, "Source URI template, {n} is the RFC number");

  ParseArgs parse;
  auto* parse_cmd = app.add_subcommand("parse", "Extract the field catalog of a cached RFC");
  parse_cmd->add_option("--rfc", parse.rfc, "RFC number")->required()->check(CLI::PositiveNumber);
  parse_cmd->add_option("--cache", parse.cache, "Cache directory")->required();
  parse_cmd->add_option("--out", parse.out, "Catalog file")->required();

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build-dataset", "Join a catalog with annotations into samples");
  build_cmd->add_option("--catalog", build.catalogs, "Catalog file(s)")->required();
  build_cmd->add_option("--annotations", build.annotations, "Annotation file")->required();
  build_cmd->add_option("--schema", build.schema, "Knowledge base schema file")->required();
  build_cmd->add_option("--out", build.out, "Sample file")->required();

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train one model on a sample file");
  train_cmd->add_option("--data", train.data, "Sample file")->required();
  train_cmd->add_option("--schema", train.schema, "Knowledge base schema file")->required();
  train_cmd->add_option("--model-kind", train.kind, "Model kind")->required()->check(CLI::IsMember(kModelKinds));
  train_cmd->add_option("--config", train.config, "key=value config file");
  train_cmd->add_option("--out", train.out, "Checkpoint directory")->required();
  train_cmd->add_option("--seed", train.seed, "Random seed")->capture_default_str();

  EvaluateArgs evaluate;
  auto* eval_cmd = app.add_subcommand("evaluate", "k-fold cross-validation of one model kind");
  eval_cmd->add_option("--data", evaluate.data, "Sample file")->required();
  eval_cmd->add_option("--schema", evaluate.schema, "Knowledge base schema file")->required();
  eval_cmd->add_option("--model-kind", evaluate.kind, "Model kind")->required()->check(CLI::IsMember(kModelKinds));
  eval_cmd->add_option("--config", evaluate.config, "key=value config file");
  eval_cmd->add_option("--folds", evaluate.folds, "Number of folds")->capture_default_str()->check(CLI::Range(2, 1000000));
  eval_cmd->add_option("--seed", evaluate.seed, "Random seed")->capture_default_str();
  eval_cmd->add_option("--out", evaluate.out, "Results file")->required();

  LinkArgs link;
  auto* link_cmd = app.add_subcommand("link", "Classify one header field with a trained checkpoint");
  link_cmd->add_option("--checkpoint", link.checkpoint, "Checkpoint directory")->required();
  link_cmd->add_option("--field", link.field, "Header field name")->required();
  link_cmd->add_option("--description", link.description, "Field description")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*fetch_cmd) return run_fetch(fetch);
    if (*parse_cmd) return run_parse(parse);
    if (*build_cmd) return run_build(build);
    if (*train_cmd) return run_train(train);
    if (*eval_cmd) return run_evaluate(evaluate);
    if (*link_cmd) return run_link(link);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
