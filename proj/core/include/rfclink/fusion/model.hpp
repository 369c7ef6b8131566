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

#include <cstddef>
#include <string>
#include <vector>

#include "rfclink/encoder/transformer.hpp"
#include "rfclink/num/ops.hpp"
#include "rfclink/num/param_store.hpp"

namespace rfclink::fusion {

// One sample, tokenized every way a model may want to read it.
struct Example {
  encoder::EncodedInput description;         // [CLS] ... [SEP]
  encoder::EncodedInput description_padded;  // same, padded to max_desc_len
  encoder::EncodedInput field;               // padded to max_field_len
  std::size_t label = 0;
};

Example make_example(const std::string& field, const std::string& description, std::size_t label,
                     const encoder::Vocab& vocab, const encoder::EncoderConfig& cfg);

// A trainable classifier over C classes. Implementations register their
// parameters in the store they are constructed with.
template <typename T>
class Classifier {
 public:
  explicit Classifier(std::uint64_t seed, std::size_t num_classes)
      : params_(seed), num_classes_(num_classes) {}
  virtual ~Classifier() = default;

  Classifier(const Classifier&) = delete;
  Classifier& operator=(const Classifier&) = delete;

  // 1 x C class scores.
  virtual num::Var<T> logits(num::Tape<T>& tape, const Example& ex,
                             const encoder::ForwardContext& ctx) const = 0;

  // Training objective for one example; mean cross-entropy unless overridden.
  virtual num::Var<T> loss(num::Tape<T>& tape, const Example& ex,
                           const encoder::ForwardContext& ctx) const {
    return num::cross_entropy(logits(tape, ex, ctx), ex.label);
  }

  // Prefixes of parameters that must not be updated during training.
  virtual std::vector<std::string> frozen_prefixes() const { return {}; }

  num::ParamStore<T>& params() { return params_; }
  const num::ParamStore<T>& params() const { return params_; }
  std::size_t num_classes() const { return num_classes_; }

 private:
  num::ParamStore<T> params_;
  std::size_t num_classes_;
};

}  // namespace rfclink::fusion
