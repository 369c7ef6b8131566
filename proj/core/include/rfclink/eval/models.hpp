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

#include <memory>
#include <string_view>

#include "rfclink/fusion/joint_model.hpp"

namespace rfclink::eval {

enum class ModelKind {
  JointA,       // joint model, feedforward domain branch
  JointB,       // joint model, convolutional domain branch
  JointC,       // joint model, bidirectional gated domain branch
  EncoderOnly,  // encoder + [CLS] + linear
  DomainOnly,   // domain branch over description embeddings + aggregator + linear
  SVM,
  BPNN,
  CNN,
  BiGRU,
};

std::string_view to_string(ModelKind kind);
// Accepts the CLI names (joint-a ... bigru); throws UnknownKind.
ModelKind parse_model_kind(std::string_view name);
// Description-only baselines trained with SGD at 2e-2 by default.
bool is_classic(ModelKind kind);

struct ModelSpec {
  ModelKind kind = ModelKind::JointC;
  encoder::EncoderConfig encoder;
  // Domain branch of the DomainOnly baseline; joint kinds fix their own.
  fusion::DomainModelKind domain = fusion::DomainModelKind::BidirectionalGated;
  std::size_t num_classes = 9;
  bool mask_padding = false;
  std::uint64_t seed = 42;
};

// Embedding + encoder + [CLS] + linear head. Parameter names match the joint
// model's, so weights can be copied across by name.
template <typename T>
class EncoderOnlyModel : public fusion::Classifier<T> {
 public:
  explicit EncoderOnlyModel(const ModelSpec& spec);
  num::Var<T> logits(num::Tape<T>& tape, const fusion::Example& ex,
                     const encoder::ForwardContext& ctx) const override;

 private:
  encoder::Embedding<T> embedding_;
  encoder::TransformerEncoder<T> encoder_;
  encoder::Linear<T> classifier_;
};

// Domain branch over the padded description, then the linear aggregator and
// a linear head.
template <typename T>
class DomainOnlyModel : public fusion::Classifier<T> {
 public:
  explicit DomainOnlyModel(const ModelSpec& spec);
  num::Var<T> logits(num::Tape<T>& tape, const fusion::Example& ex,
                     const encoder::ForwardContext& ctx) const override;

 private:
  bool mask_padding_;
  encoder::Embedding<T> embedding_;
  fusion::DomainModel<T> domain_;
  fusion::LinearAggregator<T> aggregate_;
  encoder::Linear<T> classifier_;
};

// Linear one-vs-rest SVM over the mean of fixed random word vectors. The
// loss is the sum over classes of max(0, 1 - y_c s_c), y_c = +1 for the true
// class and -1 otherwise; L2 comes from the optimizer's weight decay.
template <typename T>
class SvmModel : public fusion::Classifier<T> {
 public:
  explicit SvmModel(const ModelSpec& spec);
  num::Var<T> logits(num::Tape<T>& tape, const fusion::Example& ex,
                     const encoder::ForwardContext& ctx) const override;
  num::Var<T> loss(num::Tape<T>& tape, const fusion::Example& ex,
                   const encoder::ForwardContext& ctx) const override;
  std::vector<std::string> frozen_prefixes() const override { return {"svm.features"}; }

 private:
  num::Tensor<T>* features_;
  encoder::Linear<T> classifier_;
};

// Mean-pooled word embeddings, one hidden ReLU layer, dropout, linear head.
template <typename T>
class FeedforwardModel : public fusion::Classifier<T> {
 public:
  explicit FeedforwardModel(const ModelSpec& spec);
  num::Var<T> logits(num::Tape<T>& tape, const fusion::Example& ex,
                     const encoder::ForwardContext& ctx) const override;

 private:
  double dropout_;
  encoder::Embedding<T> embedding_;
  encoder::Linear<T> hidden_, classifier_;
};

// Three convolution kernels of height 3 over the padded description, ReLU,
// dropout, 2 x 2 max pooling, linear head.
template <typename T>
class ConvolutionalModel : public fusion::Classifier<T> {
 public:
  explicit ConvolutionalModel(const ModelSpec& spec);
  num::Var<T> logits(num::Tape<T>& tape, const fusion::Example& ex,
                     const encoder::ForwardContext& ctx) const override;

 private:
  double dropout_;
  encoder::Embedding<T> embedding_;
  num::Tensor<T>* kernels_;
  encoder::Linear<T> classifier_;
};

// Forward and backward gated recurrent passes over the description; the two
// final states are concatenated and fed to a linear head.
template <typename T>
class BiGruModel : public fusion::Classifier<T> {
 public:
  explicit BiGruModel(const ModelSpec& spec);
  num::Var<T> logits(num::Tape<T>& tape, const fusion::Example& ex,
                     const encoder::ForwardContext& ctx) const override;

 private:
  double dropout_;
  encoder::Embedding<T> embedding_;
  fusion::GatedRecurrent<T> forward_, backward_;
  encoder::Linear<T> classifier_;
};

template <typename T>
std::unique_ptr<fusion::Classifier<T>> build_model(const ModelSpec& spec);

}  // namespace rfclink::eval
