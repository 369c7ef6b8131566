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

#include "rfclink/eval/models.hpp"

#include <string>

#include "rfclink/error.hpp"

namespace rfclink::eval {

using num::Tape;
using num::Var;

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::JointA: return "joint-a";
    case ModelKind::JointB: return "joint-b";
    case ModelKind::JointC: return "joint-c";
    case ModelKind::EncoderOnly: return "encoder-only";
    case ModelKind::DomainOnly: return "domain-only";
    case ModelKind::SVM: return "svm";
    case ModelKind::BPNN: return "bpnn";
    case ModelKind::CNN: return "cnn";
    case ModelKind::BiGRU: return "bigru";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  for (auto k : {ModelKind::JointA, ModelKind::JointB, ModelKind::JointC, ModelKind::EncoderOnly,
                 ModelKind::DomainOnly, ModelKind::SVM, ModelKind::BPNN, ModelKind::CNN, ModelKind::BiGRU})
    if (to_string(k) == name) return k;
  throw UnknownKind("unknown model kind '" + std::string(name) + "'");
}

bool is_classic(ModelKind kind) {
  return kind == ModelKind::SVM || kind == ModelKind::BPNN || kind == ModelKind::CNN || kind == ModelKind::BiGRU;
}

template <typename T>
EncoderOnlyModel<T>::EncoderOnlyModel(const ModelSpec& spec)
    : fusion::Classifier<T>(spec.seed, spec.num_classes),
      embedding_(this->params(), "embedding", spec.encoder),
      encoder_(this->params(), "encoder", spec.encoder),
      classifier_(this->params(), "classifier", spec.encoder.hidden_size, spec.num_classes) {}

template <typename T>
Var<T> EncoderOnlyModel<T>::logits(Tape<T>& tape, const fusion::Example& ex,
                                   const encoder::ForwardContext& ctx) const {
  auto hs = encoder_.forward(tape, embedding_.forward(tape, ex.description), ctx);
  return classifier_.forward(tape, encoder::cls_vector(hs));
}

template <typename T>
DomainOnlyModel<T>::DomainOnlyModel(const ModelSpec& spec)
    : fusion::Classifier<T>(spec.seed, spec.num_classes),
      mask_padding_(spec.mask_padding),
      embedding_(this->params(), "embedding", spec.encoder),
      domain_(this->params(), "domain", spec.domain, spec.encoder.hidden_size),
      aggregate_(this->params(), "aggregate", spec.encoder.max_desc_len, spec.encoder.hidden_size),
      classifier_(this->params(), "classifier", spec.encoder.hidden_size, spec.num_classes) {}

template <typename T>
Var<T> DomainOnlyModel<T>::logits(Tape<T>& tape, const fusion::Example& ex,
                                  const encoder::ForwardContext& ctx) const {
  auto states = domain_.forward(tape, embedding_.forward(tape, ex.description_padded), ctx);
  if (!mask_padding_) return classifier_.forward(tape, aggregate_.forward(tape, states));
  const auto& ids = ex.description_padded.token_ids;
  std::unique_ptr<bool[]> keep(new bool[ids.size()]);
  for (std::size_t i = 0; i < ids.size(); ++i) keep[i] = ids[i] != encoder::Vocab::kPad;
  return classifier_.forward(tape, aggregate_.forward(tape, states, std::span<const bool>(keep.get(), ids.size())));
}

template <typename T>
SvmModel<T>::SvmModel(const ModelSpec& spec)
    : fusion::Classifier<T>(spec.seed, spec.num_classes),
      features_(&this->params().add("svm.features", spec.encoder.vocab_size, spec.encoder.hidden_size,
                                    num::Init::UnitNormal)),
      classifier_(this->params(), "classifier", spec.encoder.hidden_size, spec.num_classes) {}

template <typename T>
Var<T> SvmModel<T>::logits(Tape<T>& tape, const fusion::Example& ex, const encoder::ForwardContext&) const {
  // The word vectors are fixed, so the pooled feature is a constant.
  const auto& ids = ex.description.token_ids;
  const auto h = features_->cols();
  num::Tensor<T> pooled(1, h);
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= features_->rows())
      throw IdOutOfRange("svm: token id " + std::to_string(id));
    for (std::size_t c = 0; c < h; ++c) pooled.at(0, c) += features_->at(static_cast<std::size_t>(id), c);
  }
  if (!ids.empty())
    for (auto& v : pooled.data()) v /= static_cast<T>(ids.size());
  return classifier_.forward(tape, tape.constant(std::move(pooled)));
}

template <typename T>
Var<T> SvmModel<T>::loss(Tape<T>& tape, const fusion::Example& ex, const encoder::ForwardContext& ctx) const {
  auto scores = logits(tape, ex, ctx);
  const auto c = this->num_classes();
  if (ex.label >= c) throw ClassOutOfRange("svm: label " + std::to_string(ex.label));
  num::Tensor<T> signs(1, c, T(-1));
  signs[ex.label] = T(1);
  auto margins = num::sub(tape.constant(num::Tensor<T>(1, c, T(1))), num::mul(tape.constant(std::move(signs)), scores));
  return num::scale(num::mean(num::relu(margins)), static_cast<T>(c));
}

template <typename T>
FeedforwardModel<T>::FeedforwardModel(const ModelSpec& spec)
    : fusion::Classifier<T>(spec.seed, spec.num_classes),
      dropout_(spec.encoder.dropout),
      embedding_(this->params(), "embedding", spec.encoder),
      hidden_(this->params(), "hidden", spec.encoder.hidden_size, spec.encoder.hidden_size),
      classifier_(this->params(), "classifier", spec.encoder.hidden_size, spec.num_classes) {}

template <typename T>
Var<T> FeedforwardModel<T>::logits(Tape<T>& tape, const fusion::Example& ex,
                                   const encoder::ForwardContext& ctx) const {
  auto pooled = num::mean_rows(embedding_.forward(tape, ex.description));
  auto h = ctx.dropout(num::relu(hidden_.forward(tape, pooled)), dropout_);
  return classifier_.forward(tape, h);
}

template <typename T>
ConvolutionalModel<T>::ConvolutionalModel(const ModelSpec& spec)
    : fusion::Classifier<T>(spec.seed, spec.num_classes),
      dropout_(spec.encoder.dropout),
      embedding_(this->params(), "embedding", spec.encoder),
      kernels_(&this->params().add("conv.kernels", 3 * spec.encoder.hidden_size, 3, num::Init::Xavier)),
      // 3 kernel columns padded to 4, pooled 2 x 2.
      classifier_(this->params(), "classifier", (spec.encoder.max_desc_len / 2) * 2, spec.num_classes) {}

template <typename T>
Var<T> ConvolutionalModel<T>::logits(Tape<T>& tape, const fusion::Example& ex,
                                     const encoder::ForwardContext& ctx) const {
  auto x = embedding_.forward(tape, ex.description_padded);
  auto maps = num::relu(num::matmul(num::unfold_rows(x, 3), tape.param(*kernels_)));
  const Var<T> parts[] = {maps, tape.constant(num::Tensor<T>(maps.value().rows(), 1))};
  auto pooled = num::max_pool(ctx.dropout(num::concat_cols(std::span<const Var<T>>(parts)), dropout_), 2, 2);
  const auto& s = pooled.shape();
  return classifier_.forward(tape, num::reshape(pooled, 1, s.rows * s.cols));
}

template <typename T>
BiGruModel<T>::BiGruModel(const ModelSpec& spec)
    : fusion::Classifier<T>(spec.seed, spec.num_classes),
      dropout_(spec.encoder.dropout),
      embedding_(this->params(), "embedding", spec.encoder),
      forward_(this->params(), "gru_forward", spec.encoder.hidden_size, spec.encoder.hidden_size),
      backward_(this->params(), "gru_backward", spec.encoder.hidden_size, spec.encoder.hidden_size),
      classifier_(this->params(), "classifier", 2 * spec.encoder.hidden_size, spec.num_classes) {}

template <typename T>
Var<T> BiGruModel<T>::logits(Tape<T>& tape, const fusion::Example& ex, const encoder::ForwardContext& ctx) const {
  auto x = embedding_.forward(tape, ex.description);
  const auto n = x.value().rows();
  const Var<T> finals[] = {num::slice_rows(forward_.forward(tape, x, false), n - 1, 1),
                           num::slice_rows(backward_.forward(tape, x, true), 0, 1)};
  auto h = ctx.dropout(num::concat_cols(std::span<const Var<T>>(finals)), dropout_);
  return classifier_.forward(tape, h);
}

template <typename T>
std::unique_ptr<fusion::Classifier<T>> build_model(const ModelSpec& spec) {
  spec.encoder.validate();
  auto joint = [&](fusion::DomainModelKind domain) -> std::unique_ptr<fusion::Classifier<T>> {
    fusion::JointModelOptions o;
    o.encoder = spec.encoder;
    o.domain = domain;
    o.num_classes = spec.num_classes;
    o.mask_padding = spec.mask_padding;
    o.seed = spec.seed;
    return std::make_unique<fusion::JointModel<T>>(o);
  };
  switch (spec.kind) {
    case ModelKind::JointA: return joint(fusion::DomainModelKind::Feedforward);
    case ModelKind::JointB: return joint(fusion::DomainModelKind::Convolutional);
    case ModelKind::JointC: return joint(fusion::DomainModelKind::BidirectionalGated);
    case ModelKind::EncoderOnly: return std::make_unique<EncoderOnlyModel<T>>(spec);
    case ModelKind::DomainOnly: return std::make_unique<DomainOnlyModel<T>>(spec);
    case ModelKind::SVM: return std::make_unique<SvmModel<T>>(spec);
    case ModelKind::BPNN: return std::make_unique<FeedforwardModel<T>>(spec);
    case ModelKind::CNN: return std::make_unique<ConvolutionalModel<T>>(spec);
    case ModelKind::BiGRU: return std::make_unique<BiGruModel<T>>(spec);
  }
  throw UnknownKind("build_model: unknown kind");
}

#define RFCLINK_INSTANTIATE(T)                                          \
  template class EncoderOnlyModel<T>;                                   \
  template class DomainOnlyModel<T>;                                    \
  template class SvmModel<T>;                                           \
  template class FeedforwardModel<T>;                                   \
  template class ConvolutionalModel<T>;                                 \
  template class BiGruModel<T>;                                         \
  template std::unique_ptr<fusion::Classifier<T>> build_model<T>(const ModelSpec&);

RFCLINK_INSTANTIATE(float)
RFCLINK_INSTANTIATE(double)
#undef RFCLINK_INSTANTIATE

}  // namespace rfclink::eval
