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

#include "rfclink/fusion/domain_model.hpp"
#include "rfclink/fusion/model.hpp"

namespace rfclink::fusion {

// relu(t_a W + b) + t_cls
template <typename T>
num::Var<T> fuse(num::Var<T> t_a, num::Var<T> t_cls, num::Var<T> weight, num::Var<T> bias);

// Class probabilities for a 1 x C row of logits.
template <typename T>
num::Tensor<T> class_probabilities(const num::Tensor<T>& logits);

struct JointModelOptions {
  encoder::EncoderConfig encoder;
  DomainModelKind domain = DomainModelKind::BidirectionalGated;
  std::size_t num_classes = 9;
  bool mask_padding = false;
  std::uint64_t seed = 42;
};

// Description encoder and header-field domain branch joined by the fusion
// unit, followed by a linear softmax head.
template <typename T>
class JointModel : public Classifier<T> {
 public:
  explicit JointModel(const JointModelOptions& options);

  num::Var<T> logits(num::Tape<T>& tape, const Example& ex,
                     const encoder::ForwardContext& ctx) const override;

  // Intermediate values of one forward pass, for inspection and tests.
  struct Trace {
    num::Var<T> hs_e, t_cls, hs_f, t_a, o_a, logits;
  };
  Trace trace(num::Tape<T>& tape, const Example& ex, const encoder::ForwardContext& ctx) const;

  const JointModelOptions& options() const { return options_; }

 private:
  JointModelOptions options_;
  encoder::Embedding<T> embedding_;
  encoder::TransformerEncoder<T> encoder_;
  DomainModel<T> domain_;
  LinearAggregator<T> aggregate_;
  num::Tensor<T>* fusion_weight_;
  num::Tensor<T>* fusion_bias_;
  encoder::Linear<T> classifier_;
};

}  // namespace rfclink::fusion
