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

#include "rfclink/fusion/domain_model.hpp"

#include <vector>

#include "rfclink/error.hpp"

namespace rfclink::fusion {

using num::Tape;
using num::Var;

std::string_view to_string(DomainModelKind kind) {
  switch (kind) {
    case DomainModelKind::Feedforward:
      return "feedforward";
    case DomainModelKind::Convolutional:
      return "convolutional";
    case DomainModelKind::BidirectionalGated:
      return "bigru";
  }
  return "?";
}

DomainModelKind parse_domain_kind(std::string_view name) {
  if (name == "feedforward" || name == "bpnn") return DomainModelKind::Feedforward;
  if (name == "convolutional" || name == "cnn") return DomainModelKind::Convolutional;
  if (name == "bigru" || name == "bidirectional-gated") return DomainModelKind::BidirectionalGated;
  throw UnknownKind("unknown domain model kind '" + std::string(name) + "'");
}

template <typename T>
GatedRecurrent<T>::GatedRecurrent(num::ParamStore<T>& store, const std::string& prefix, std::size_t in,
                                  std::size_t hidden)
    : hidden_(hidden),
      input_(store, prefix + ".input", in, 3 * hidden),
      recurrent_(&store.add(prefix + ".recurrent", hidden, 3 * hidden, num::Init::Xavier)) {}

template <typename T>
Var<T> GatedRecurrent<T>::forward(Tape<T>& tape, Var<T> x, bool reverse) const {
  const auto m = x.value().rows();
  const auto H = hidden_;
  auto projected = input_.forward(tape, x);  // [m x 3H]
  auto U = tape.param(*recurrent_);
  auto h = tape.constant(num::Tensor<T>(1, H));
  std::vector<Var<T>> outputs(m);
  for (std::size_t step = 0; step < m; ++step) {
    const auto t = reverse ? m - 1 - step : step;
    auto xt = num::slice_rows(projected, t, 1);
    auto ht = num::matmul(h, U);
    auto gates = num::sigmoid(num::add(num::slice_cols(xt, 0, 2 * H), num::slice_cols(ht, 0, 2 * H)));
    auto update = num::slice_cols(gates, 0, H);
    auto reset = num::slice_cols(gates, H, H);
    auto candidate = num::tanh(
        num::add(num::slice_cols(xt, 2 * H, H), num::mul(reset, num::slice_cols(ht, 2 * H, H))));
    // (1 - z) * n + z * h
    h = num::add(candidate, num::mul(update, num::sub(h, candidate)));
    outputs[t] = h;
  }
  return m == 1 ? outputs[0] : num::concat_rows(std::span<const Var<T>>(outputs));
}

template <typename T>
DomainModel<T>::DomainModel(num::ParamStore<T>& store, const std::string& prefix, DomainModelKind kind,
                            std::size_t hidden)
    : kind_(kind), hidden_(hidden) {
  switch (kind) {
    case DomainModelKind::Feedforward:
      first_.emplace(store, prefix + ".ffn_in", hidden, hidden);
      second_.emplace(store, prefix + ".ffn_out", hidden, hidden);
      break;
    case DomainModelKind::Convolutional:
      first_.emplace(store, prefix + ".kernels", kConvHeight * hidden, kConvKernels);
      second_.emplace(store, prefix + ".project", kConvKernels, hidden);
      break;
    case DomainModelKind::BidirectionalGated:
      forward_rnn_.emplace(store, prefix + ".gru_forward", hidden, hidden);
      backward_rnn_.emplace(store, prefix + ".gru_backward", hidden, hidden);
      second_.emplace(store, prefix + ".project", 2 * hidden, hidden);
      break;
  }
}

template <typename T>
Var<T> DomainModel<T>::forward(Tape<T>& tape, Var<T> x, const encoder::ForwardContext&) const {
  if (x.value().cols() != hidden_)
    throw ShapeMismatch("domain_forward: expected " + std::to_string(hidden_) + " columns, got " +
                        num::to_string(x.shape()));
  if (x.value().rows() == 0) throw ShapeMismatch("domain_forward: empty field input");
  switch (kind_) {
    case DomainModelKind::Feedforward:
      return second_->forward(tape, num::relu(first_->forward(tape, x)));
    case DomainModelKind::Convolutional: {
      auto windows = num::unfold_rows(x, kConvHeight);
      return second_->forward(tape, num::relu(first_->forward(tape, windows)));
    }
    case DomainModelKind::BidirectionalGated: {
      const Var<T> both[] = {forward_rnn_->forward(tape, x, false), backward_rnn_->forward(tape, x, true)};
      return second_->forward(tape, num::concat_cols(std::span<const Var<T>>(both)));
    }
  }
  throw UnknownKind("domain_forward: unknown kind");
}

template <typename T>
LinearAggregator<T>::LinearAggregator(num::ParamStore<T>& store, const std::string& prefix,
                                      std::size_t positions, std::size_t hidden)
    : positions_(positions),
      hidden_(hidden),
      weight_(&store.add(prefix + ".weight", positions * hidden, hidden, num::Init::Xavier)) {}

template <typename T>
Var<T> LinearAggregator<T>::forward(Tape<T>& tape, Var<T> states, std::span<const bool> keep) const {
  if (states.value().shape() != num::Shape{positions_, hidden_})
    throw ShapeMismatch("aggregate: expected [" + std::to_string(positions_) + "x" +
                        std::to_string(hidden_) + "], got " + num::to_string(states.shape()));
  if (!keep.empty()) {
    if (keep.size() != positions_) throw ShapeMismatch("aggregate: mask length differs from positions");
    num::Tensor<T> mask(positions_, hidden_);
    for (std::size_t r = 0; r < positions_; ++r)
      if (keep[r])
        for (std::size_t c = 0; c < hidden_; ++c) mask.at(r, c) = T(1);
    states = num::mul(states, tape.constant(std::move(mask)));
  }
  auto flat = num::reshape(states, 1, positions_ * hidden_);
  return num::matmul(flat, tape.param(*weight_));
}

template class GatedRecurrent<float>;
template class GatedRecurrent<double>;
template class DomainModel<float>;
template class DomainModel<double>;
template class LinearAggregator<float>;
template class LinearAggregator<double>;

}  // namespace rfclink::fusion
