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

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "rfclink/encoder/transformer.hpp"

namespace rfclink::fusion {

enum class DomainModelKind { Feedforward, Convolutional, BidirectionalGated };

std::string_view to_string(DomainModelKind kind);
// Accepts "feedforward"/"bpnn", "convolutional"/"cnn", "bigru"/"bidirectional-gated".
DomainModelKind parse_domain_kind(std::string_view name);

// Single-direction gated recurrent unit over the rows of its input.
template <typename T>
class GatedRecurrent {
 public:
  GatedRecurrent(num::ParamStore<T>& store, const std::string& prefix, std::size_t in, std::size_t hidden);

  // One output row per input row, visited last-to-first when `reverse`; the
  // output keeps the input's row order either way.
  num::Var<T> forward(num::Tape<T>& tape, num::Var<T> x, bool reverse) const;

 private:
  std::size_t hidden_;
  encoder::Linear<T> input_;  // x -> [update | reset | candidate]
  num::Tensor<T>* recurrent_;
};

// Per-position non-linear layer over header-field embeddings:
// [m x hidden] -> [m x hidden].
template <typename T>
class DomainModel {
 public:
  DomainModel(num::ParamStore<T>& store, const std::string& prefix, DomainModelKind kind,
              std::size_t hidden);

  num::Var<T> forward(num::Tape<T>& tape, num::Var<T> x, const encoder::ForwardContext& ctx) const;
  DomainModelKind kind() const { return kind_; }

  static constexpr std::size_t kConvKernels = 3;
  static constexpr std::size_t kConvHeight = 3;

 private:
  DomainModelKind kind_;
  std::size_t hidden_;
  // Feedforward: first/second; Convolutional: first is the kernel bank
  // [3*hidden x 3], second maps channels back to hidden; BidirectionalGated:
  // second projects [forward | backward] to hidden.
  std::optional<encoder::Linear<T>> first_, second_;
  std::optional<GatedRecurrent<T>> forward_rnn_, backward_rnn_;
};

// Concatenates m hidden states into one row and maps it to hidden size with
// a learned matrix (no bias).
template <typename T>
class LinearAggregator {
 public:
  LinearAggregator(num::ParamStore<T>& store, const std::string& prefix, std::size_t positions,
                   std::size_t hidden);

  // `keep`, when given, zeroes the rows whose entry is false before the map.
  num::Var<T> forward(num::Tape<T>& tape, num::Var<T> states,
                      std::span<const bool> keep = {}) const;

 private:
  std::size_t positions_;
  std::size_t hidden_;
  num::Tensor<T>* weight_;
};

}  // namespace rfclink::fusion
