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

#include "rfclink/encoder/transformer.hpp"

#include <cmath>

#include "rfclink/encoder/tokenizer.hpp"
#include "rfclink/error.hpp"

namespace rfclink::encoder {

using num::Tape;
using num::Var;

void EncoderConfig::validate() const {
  if (hidden_size == 0 || num_heads == 0 || hidden_size % num_heads != 0)
    throw ConfigError("hidden_size must be a positive multiple of num_heads");
  if (max_desc_len < 2) throw ConfigError("max_desc_len must leave room for [CLS] and [SEP]");
  if (max_field_len == 0) throw ConfigError("max_field_len must be positive");
  if (vocab_size <= Vocab::kReserved) throw ConfigError("vocab_size must exceed the reserved ids");
  if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("dropout must lie in [0, 1)");
}

namespace {

EncodedInput make_input(std::vector<int> ids, int segment) {
  EncodedInput in;
  in.segment_ids.assign(ids.size(), segment);
  in.position_ids.resize(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) in.position_ids[i] = static_cast<int>(i);
  in.token_ids = std::move(ids);
  return in;
}

}  // namespace

EncodedInput encode_description(std::string_view text, const Vocab& vocab, const EncoderConfig& cfg) {
  const auto tokens = tokenize(text, cfg.max_desc_len, true);
  return make_input(vocab.ids(tokens), kDescriptionSegment);
}

EncodedInput encode_description_padded(std::string_view text, const Vocab& vocab,
                                       const EncoderConfig& cfg) {
  auto ids = vocab.ids(tokenize(text, cfg.max_desc_len, true));
  ids.resize(cfg.max_desc_len, Vocab::kPad);
  return make_input(std::move(ids), kDescriptionSegment);
}

EncodedInput encode_field(std::string_view name, const Vocab& vocab, const EncoderConfig& cfg) {
  auto ids = vocab.ids(tokenize(name, cfg.max_field_len, false));
  if (ids.empty()) ids.push_back(Vocab::kUnk);
  ids.resize(cfg.max_field_len, Vocab::kPad);
  return make_input(std::move(ids), kFieldSegment);
}

template <typename T>
Embedding<T>::Embedding(num::ParamStore<T>& store, const std::string& prefix, const EncoderConfig& cfg)
    : token_(&store.add(prefix + ".token", cfg.vocab_size, cfg.hidden_size, num::Init::Normal)),
      segment_(&store.add(prefix + ".segment", 2, cfg.hidden_size, num::Init::Normal)),
      position_(&store.add(prefix + ".position", cfg.max_positions(), cfg.hidden_size, num::Init::Normal)) {}

template <typename T>
Var<T> Embedding<T>::forward(Tape<T>& tape, const EncodedInput& input) const {
  if (input.segment_ids.size() != input.size() || input.position_ids.size() != input.size())
    throw ShapeMismatch("embed: token, segment and position ids differ in length");
  auto tok = num::gather_rows(tape.param(*token_), std::span<const int>(input.token_ids));
  auto seg = num::gather_rows(tape.param(*segment_), std::span<const int>(input.segment_ids));
  auto pos = num::gather_rows(tape.param(*position_), std::span<const int>(input.position_ids));
  return num::add(num::add(tok, seg), pos);
}

template <typename T>
Linear<T>::Linear(num::ParamStore<T>& store, const std::string& prefix, std::size_t in, std::size_t out,
                  num::Init weight_init)
    : weight_(&store.add(prefix + ".weight", in, out, weight_init)),
      bias_(&store.add(prefix + ".bias", 1, out, num::Init::Zeros)) {}

template <typename T>
Var<T> Linear<T>::forward(Tape<T>& tape, Var<T> x) const {
  return num::add_bias(num::matmul(x, tape.param(*weight_)), tape.param(*bias_));
}

template <typename T>
LayerNorm<T>::LayerNorm(num::ParamStore<T>& store, const std::string& prefix, std::size_t width)
    : gain_(&store.add(prefix + ".gain", 1, width, num::Init::Ones)),
      bias_(&store.add(prefix + ".bias", 1, width, num::Init::Zeros)) {}

template <typename T>
Var<T> LayerNorm<T>::forward(Tape<T>& tape, Var<T> x) const {
  return num::layer_norm(x, tape.param(*gain_), tape.param(*bias_));
}

template <typename T>
SelfAttention<T>::SelfAttention(num::ParamStore<T>& store, const std::string& prefix,
                                const EncoderConfig& cfg)
    : heads_(cfg.num_heads),
      dropout_(cfg.dropout),
      query_(store, prefix + ".query", cfg.hidden_size, cfg.hidden_size),
      key_(store, prefix + ".key", cfg.hidden_size, cfg.hidden_size),
      value_(store, prefix + ".value", cfg.hidden_size, cfg.hidden_size),
      output_(store, prefix + ".output", cfg.hidden_size, cfg.hidden_size) {}

template <typename T>
Var<T> SelfAttention<T>::forward(Tape<T>& tape, Var<T> x, const ForwardContext& ctx) const {
  const auto hidden = x.value().cols();
  const auto head_dim = hidden / heads_;
  const T scale = T(1) / std::sqrt(static_cast<T>(head_dim));
  auto q = query_.forward(tape, x);
  auto k = key_.forward(tape, x);
  auto v = value_.forward(tape, x);
  std::vector<Var<T>> heads;
  heads.reserve(heads_);
  for (std::size_t h = 0; h < heads_; ++h) {
    auto qh = num::slice_cols(q, h * head_dim, head_dim);
    auto kh = num::slice_cols(k, h * head_dim, head_dim);
    auto vh = num::slice_cols(v, h * head_dim, head_dim);
    auto weights = num::softmax_rows(num::scale(num::matmul_nt(qh, kh), scale));
    weights = ctx.dropout(weights, dropout_);
    heads.push_back(num::matmul(weights, vh));
  }
  auto merged = heads.size() == 1 ? heads[0] : num::concat_cols(std::span<const Var<T>>(heads));
  return output_.forward(tape, merged);
}

template <typename T>
EncoderBlock<T>::EncoderBlock(num::ParamStore<T>& store, const std::string& prefix,
                              const EncoderConfig& cfg)
    : dropout_(cfg.dropout),
      activation_(cfg.activation),
      attention_(store, prefix + ".attention", cfg),
      attention_norm_(store, prefix + ".attention_norm", cfg.hidden_size),
      ffn_in_(store, prefix + ".ffn_in", cfg.hidden_size, 4 * cfg.hidden_size),
      ffn_out_(store, prefix + ".ffn_out", 4 * cfg.hidden_size, cfg.hidden_size),
      ffn_norm_(store, prefix + ".ffn_norm", cfg.hidden_size) {}

template <typename T>
Var<T> EncoderBlock<T>::forward(Tape<T>& tape, Var<T> x, const ForwardContext& ctx) const {
  auto attended = ctx.dropout(attention_.forward(tape, x, ctx), dropout_);
  auto h = attention_norm_.forward(tape, num::add(x, attended));
  auto inner = num::activate(ffn_in_.forward(tape, h), activation_);
  auto ffn = ctx.dropout(ffn_out_.forward(tape, inner), dropout_);
  return ffn_norm_.forward(tape, num::add(h, ffn));
}

template <typename T>
TransformerEncoder<T>::TransformerEncoder(num::ParamStore<T>& store, const std::string& prefix,
                                          const EncoderConfig& cfg) {
  cfg.validate();
  blocks_.reserve(cfg.num_blocks);
  for (std::size_t i = 0; i < cfg.num_blocks; ++i)
    blocks_.emplace_back(store, prefix + ".block" + std::to_string(i), cfg);
}

template <typename T>
Var<T> TransformerEncoder<T>::forward(Tape<T>& tape, Var<T> x, const ForwardContext& ctx) const {
  for (const auto& block : blocks_) x = block.forward(tape, x, ctx);
  return x;
}

template <typename T>
Var<T> cls_vector(Var<T> hidden_states) {
  if (hidden_states.value().rows() == 0) throw EmptyInput("cls_vector: empty hidden state sequence");
  return num::slice_rows(hidden_states, 0, 1);
}

template class Embedding<float>;
template class Embedding<double>;
template class Linear<float>;
template class Linear<double>;
template class LayerNorm<float>;
template class LayerNorm<double>;
template class SelfAttention<float>;
template class SelfAttention<double>;
template class EncoderBlock<float>;
template class EncoderBlock<double>;
template class TransformerEncoder<float>;
template class TransformerEncoder<double>;
template Var<float> cls_vector(Var<float>);
template Var<double> cls_vector(Var<double>);

}  // namespace rfclink::encoder
