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

#include "rfclink/eval/config.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "rfclink/error.hpp"

namespace rfclink::eval {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::size_t to_size(std::string_view v) {
  std::size_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("not a non-negative integer");
  return out;
}

double to_double(std::string_view v) {
  double out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("not a number");
  return out;
}

bool to_bool(std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("not a boolean");
}

std::string fmt(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;
using Getter = std::function<std::string(const ExperimentConfig&)>;

const std::map<std::string, std::pair<Setter, Getter>, std::less<>>& keys() {
  static const std::map<std::string, std::pair<Setter, Getter>, std::less<>> table = {
      {"activation",
       {[](ExperimentConfig& c, std::string_view v) {
          if (v == "gelu") c.encoder.activation = num::Activation::GELU;
          else if (v == "relu") c.encoder.activation = num::Activation::ReLU;
          else throw ConfigError("expected gelu or relu");
        },
        [](const ExperimentConfig& c) {
          return std::string(c.encoder.activation == num::Activation::GELU ? "gelu" : "relu");
        }}},
      {"batch_size",
       {[](ExperimentConfig& c, std::string_view v) { c.train.batch_size = to_size(v); },
        [](const ExperimentConfig& c) { return std::to_string(c.train.batch_size); }}},
      {"domain_kind",
       {[](ExperimentConfig& c, std::string_view v) {
          try {
            c.domain_kind = fusion::parse_domain_kind(v);
          } catch (const UnknownKind& e) {
            throw ConfigError(e.what());
          }
        },
        [](const ExperimentConfig& c) { return std::string(fusion::to_string(c.domain_kind)); }}},
      {"dropout",
       {[](ExperimentConfig& c, std::string_view v) { c.encoder.dropout = to_double(v); },
        [](const ExperimentConfig& c) { return fmt(c.encoder.dropout); }}},
      {"epochs",
       {[](ExperimentConfig& c, std::string_view v) { c.train.epochs = to_size(v); },
        [](const ExperimentConfig& c) { return std::to_string(c.train.epochs); }}},
      {"hidden_size",
       {[](ExperimentConfig& c, std::string_view v) { c.encoder.hidden_size = to_size(v); },
        [](const ExperimentConfig& c) { return std::to_string(c.encoder.hidden_size); }}},
      {"iterations",
       {[](ExperimentConfig& c, std::string_view v) { c.train.iterations = to_size(v); },
        [](const ExperimentConfig& c) { return std::to_string(c.train.iterations); }}},
      {"learning_rate",
       {[](ExperimentConfig& c, std::string_view v) { c.train.learning_rate = to_double(v); },
        [](const ExperimentConfig& c) { return fmt(c.train.learning_rate); }}},
      {"mask_padding",
       {[](ExperimentConfig& c, std::string_view v) { c.mask_padding = to_bool(v); },
        [](const ExperimentConfig& c) { return std::string(c.mask_padding ? "true" : "false"); }}},
      {"max_desc_len",
       {[](ExperimentConfig& c, std::string_view v) { c.encoder.max_desc_len = to_size(v); },
        [](const ExperimentConfig& c) { return std::to_string(c.encoder.max_desc_len); }}},
      {"max_field_len",
       {[](ExperimentConfig& c, std::string_view v) { c.encoder.max_field_len = to_size(v); },
        [](const ExperimentConfig& c) { return std::to_string(c.encoder.max_field_len); }}},
      {"num_blocks",
       {[](ExperimentConfig& c, std::string_view v) { c.encoder.num_blocks = to_size(v); },
        [](const ExperimentConfig& c) { return std::to_string(c.encoder.num_blocks); }}},
      {"num_heads",
       {[](ExperimentConfig& c, std::string_view v) { c.encoder.num_heads = to_size(v); },
        [](const ExperimentConfig& c) { return std::to_string(c.encoder.num_heads); }}},
      {"optimizer",
       {[](ExperimentConfig& c, std::string_view v) {
          if (v == "adam") c.train.optimizer = num::OptimizerKind::Adam;
          else if (v == "sgd") c.train.optimizer = num::OptimizerKind::SGD;
          else throw ConfigError("expected adam or sgd");
        },
        [](const ExperimentConfig& c) {
          return std::string(c.train.optimizer == num::OptimizerKind::Adam ? "adam" : "sgd");
        }}},
      {"vocab_size",
       {[](ExperimentConfig& c, std::string_view v) { c.encoder.vocab_size = to_size(v); },
        [](const ExperimentConfig& c) { return std::to_string(c.encoder.vocab_size); }}},
      {"weight_decay",
       {[](ExperimentConfig& c, std::string_view v) { c.train.weight_decay = to_double(v); },
        [](const ExperimentConfig& c) { return fmt(c.train.weight_decay); }}},
  };
  return table;
}

}  // namespace

ExperimentConfig default_config(ModelKind kind) {
  ExperimentConfig c;
  c.train = default_train_config(kind);
  return c;
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    const auto where = "config line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key=value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = keys().find(key);
    if (it == keys().end()) throw ConfigError(where + "unknown key '" + std::string(key) + "'");
    try {
      it->second.first(base, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + std::string(key) + ": " + e.what());
    }
  }
  base.encoder.validate();
  base.train.validate();
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw NotFound("config file " + path.string() + " not found");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string to_text(const ExperimentConfig& config) {
  std::string out;
  for (const auto& [key, fns] : keys()) out += key + "=" + fns.second(config) + "\n";
  return out;
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_text(config)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rfclink::eval
