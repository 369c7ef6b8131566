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

#include <algorithm>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "rfclink/encoder/vocab.hpp"
#include "rfclink/num/ops.hpp"
#include "rfclink/num/param_store.hpp"

namespace rfclink::encoder {

struct EncoderConfig {
  std::size_t num_blocks = 2;
  std::size_t hidden_size = 128;
  std::size_t num_heads = 4;
  std::size_t max_desc_len = 64;
  std::size_t max_field_len = 10;
  std::size_t vocab_size = 4096;
  double dropout = 0.1;
  num::Activation activation = num::Activation::GELU;

  // Throws ConfigError when a field is out of range.
  void validate() const;
  std::size_t max_positions() const { return std::max(max_desc_len, max_field_len); }
};

// Token, segment and position ids of one segment. Positions restart at 0 in
// every segment.
struct EncodedInput {
  std::vector<int> token_ids;
  std::vector<int> segment_ids;
  std::vector<int> position_ids;

  std::size_t size() const { return token_ids.size(); }
};

inline constexpr int kDescriptionSegment = 0;
inline constexpr int kFieldSegment = 1;

// [CLS] description [SEP], no padding.
EncodedInput encode_description(std::string_view text, const Vocab& vocab, const EncoderConfig& cfg);
// Description padded with [PAD] to exactly max_desc_len, for models that need
// a fixed-length input.
EncodedInput encode_description_padded(std::string_view text, const Vocab& vocab,
                                       const EncoderConfig& cfg);
// Field tokens without markers, padded with [PAD] (or truncated) to exactly
// max_field_len. A field with no tokens becomes a single [UNK].
EncodedInput encode_field(std::string_view name, const Vocab& vocab, const EncoderConfig& cfg);

// Per-call state for stochastic layers.
struct ForwardContext {
  bool training = false;
  std::mt19937_64* rng = nullptr;

  template <typename T>
  num::Var<T> dropout(num::Var<T> x, double rate) const {
    if (!training || rate <= 0.0 || rng == nullptr) return x;
    return num::dropout(x, static_cast<T>(rate), *rng);
  }
};

// Sum of token, segment and position embedding rows.
template <typename T>
class Embedding {
 public:
  Embedding(num::ParamStore<T>& store, const std::string& prefix, const EncoderConfig& cfg);

  num::Var<T> forward(num::Tape<T>& tape, const EncodedInput& input) const;

 private:
  num::Tensor<T>* token_;
  num::Tensor<T>* segment_;
  num::Tensor<T>* position_;
};

// Learned affine map x W + b.
template <typename T>
class Linear {
 public:
  Linear(num::ParamStore<T>& store, const std::string& prefix, std::size_t in, std::size_t out,
         num::Init weight_init = num::Init::Xavier);

  num::Var<T> forward(num::Tape<T>& tape, num::Var<T> x) const;
  std::size_t in() const { return weight_->rows(); }
  std::size_t out() const { return weight_->cols(); }

 private:
  num::Tensor<T>* weight_;
  num::Tensor<T>* bias_;
};

template <typename T>
class LayerNorm {
 public:
  LayerNorm(num::ParamStore<T>& store, const std::string& prefix, std::size_t width);
  num::Var<T> forward(num::Tape<T>& tape, num::Var<T> x) const;

 private:
  num::Tensor<T>* gain_;
  num::Tensor<T>* bias_;
};

template <typename T>
class SelfAttention {
 public:
  SelfAttention(num::ParamStore<T>& store, const std::string& prefix, const EncoderConfig& cfg);
  num::Var<T> forward(num::Tape<T>& tape, num::Var<T> x, const ForwardContext& ctx) const;

 private:
  std::size_t heads_;
  double dropout_;
  Linear<T> query_, key_, value_, output_;
};

// Self-attention and feedforward sublayers, each followed by a residual add
// and layer normalization.
template <typename T>
class EncoderBlock {
 public:
  EncoderBlock(num::ParamStore<T>& store, const std::string& prefix, const EncoderConfig& cfg);
  num::Var<T> forward(num::Tape<T>& tape, num::Var<T> x, const ForwardContext& ctx) const;

 private:
  double dropout_;
  num::Activation activation_;
  SelfAttention<T> attention_;
  LayerNorm<T> attention_norm_;
  Linear<T> ffn_in_, ffn_out_;
  LayerNorm<T> ffn_norm_;
};

template <typename T>
class TransformerEncoder {
 public:
  TransformerEncoder(num::ParamStore<T>& store, const std::string& prefix, const EncoderConfig& cfg);

  // [len x hidden] -> [len x hidden]; the identity when there are no blocks.
  num::Var<T> forward(num::Tape<T>& tape, num::Var<T> x, const ForwardContext& ctx) const;

 private:
  std::vector<EncoderBlock<T>> blocks_;
};

// Row 0 of the encoder output, the [CLS] summary of the sequence.
template <typename T>
num::Var<T> cls_vector(num::Var<T> hidden_states);

}  // namespace rfclink::encoder
