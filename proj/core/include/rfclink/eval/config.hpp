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
#include <string>
#include <string_view>

#include "rfclink/eval/trainer.hpp"

namespace rfclink::eval {

// Everything a config file can set.
struct ExperimentConfig {
  encoder::EncoderConfig encoder;
  TrainConfig train;
  fusion::DomainModelKind domain_kind = fusion::DomainModelKind::BidirectionalGated;
  bool mask_padding = false;
};

// Encoder defaults plus the kind's default training settings.
ExperimentConfig default_config(ModelKind kind);

// Applies "key = value" lines on top of `base`. Blank lines and lines
// starting with '#' are skipped. Throws ConfigError naming the line for an
// unknown key or an unparsable value.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base);
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base);

// Every key, sorted, one "key=value" per line; parse_config(to_text(c), x)
// reproduces c.
std::string to_text(const ExperimentConfig& config);

// 64-bit FNV-1a of to_text(), as 16 lowercase hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace rfclink::eval
