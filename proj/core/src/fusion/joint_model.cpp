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

#include "rfclink/fusion/joint_model.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "rfclink/error.hpp"

namespace rfclink::fusion {

using num::Tape;
using num::Var;

Example make_example(const std::string& field, const std::string& description, std::size_t label,
                     const encoder::Vocab& vocab, const encoder::EncoderConfig& cfg) {
  Example ex;
  ex.description = encoder::encode_description(description, vocab, cfg);
  ex.description_padded = encoder::encode_description_padded(description, vocab, cfg);
  ex.field = encoder::encode_field(field, vocab, cfg);
  ex.label = label;
  return ex;
}

template <typename T>
Var<T> fuse(Var<T> t_a, Var<T> t_cls, Var<T> weight, Var<T> bias) {
  if (t_a.value().rows() != 1 || t_cls.value().rows() != 1)
    throw ShapeMismatch("fuse: T_A " + num::to_string(t_a.shape()) + " and T_CLS " +
                        num::to_string(t_cls.shape()) + " must be single rows");
  return num::add(num::relu(num::add_bias(num::matmul(t_a, weight), bias)), t_cls);
}

template <typename T>
num::Tensor<T> class_probabilities(const num::Tensor<T>& logits) {
  num::Tensor<T> p(logits.rows(), logits.cols());
  const T mx = *std::max_element(logits.data().begin(), logits.data().end());
  T sum = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) sum += (p[i] = std::exp(logits[i] - mx));
  for (auto& v : p.data()) v /= sum;
  return p;
}

template <typename T>
JointModel<T>::JointModel(const JointModelOptions& options)
    : Classifier<T>(options.seed, options.num_classes),
      options_(options),
      embedding_(this->params(), "embedding", options.encoder),
      encoder_(this->params(), "encoder", options.encoder),
      domain_(this->params(), "domain", options.domain, options.encoder.hidden_size),
      aggregate_(this->params(), "aggregate", options.encoder.max_field_len, options.encoder.hidden_size),
      fusion_weight_(&this->params().add("fusion.weight", options.encoder.hidden_size,
                                         options.encoder.hidden_size, num::Init::Xavier)),
      fusion_bias_(&this->params().add("fusion.bias", 1, options.encoder.hidden_size, num::Init::Zeros)),
      classifier_(this->params(), "classifier", options.encoder.hidden_size, options.num_classes) {}

template <typename T>
typename JointModel<T>::Trace JointModel<T>::trace(Tape<T>& tape, const Example& ex,
                                                   const encoder::ForwardContext& ctx) const {
  Trace tr;
  tr.hs_e = encoder_.forward(tape, embedding_.forward(tape, ex.description), ctx);
  tr.t_cls = encoder::cls_vector(tr.hs_e);
  tr.hs_f = domain_.forward(tape, embedding_.forward(tape, ex.field), ctx);
  if (options_.mask_padding) {
    const auto n = ex.field.token_ids.size();
    std::unique_ptr<bool[]> keep(new bool[n]);
    for (std::size_t i = 0; i < n; ++i) keep[i] = ex.field.token_ids[i] != encoder::Vocab::kPad;
    tr.t_a = aggregate_.forward(tape, tr.hs_f, std::span<const bool>(keep.get(), n));
  } else {
    tr.t_a = aggregate_.forward(tape, tr.hs_f);
  }
  tr.o_a = fuse(tr.t_a, tr.t_cls, tape.param(*fusion_weight_), tape.param(*fusion_bias_));
  tr.logits = classifier_.forward(tape, tr.o_a);
  return tr;
}

template <typename T>
Var<T> JointModel<T>::logits(Tape<T>& tape, const Example& ex, const encoder::ForwardContext& ctx) const {
  return trace(tape, ex, ctx).logits;
}

template Var<float> fuse(Var<float>, Var<float>, Var<float>, Var<float>);
template Var<double> fuse(Var<double>, Var<double>, Var<double>, Var<double>);
template num::Tensor<float> class_probabilities(const num::Tensor<float>&);
template num::Tensor<double> class_probabilities(const num::Tensor<double>&);
template class JointModel<float>;
template class JointModel<double>;

}  // namespace rfclink::fusion
