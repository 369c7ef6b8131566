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

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "rfclink/num/tape.hpp"

// Differentiable operations over Tape values. Every op validates shapes and
// throws ShapeMismatch naming itself and the offending shapes.
namespace rfclink::num {

enum class Activation { ReLU, GELU };

template <typename T> Var<T> matmul(Var<T> a, Var<T> b);
// a * transpose(b)
template <typename T> Var<T> matmul_nt(Var<T> a, Var<T> b);

template <typename T> Var<T> add(Var<T> a, Var<T> b);
template <typename T> Var<T> sub(Var<T> a, Var<T> b);
template <typename T> Var<T> mul(Var<T> a, Var<T> b);
template <typename T> Var<T> scale(Var<T> a, T factor);
// Adds a 1 x n bias to every row of an m x n value.
template <typename T> Var<T> add_bias(Var<T> a, Var<T> bias);

template <typename T> Var<T> relu(Var<T> a);
template <typename T> Var<T> tanh(Var<T> a);
template <typename T> Var<T> sigmoid(Var<T> a);
template <typename T> Var<T> gelu(Var<T> a);
template <typename T> Var<T> activate(Var<T> a, Activation act);

template <typename T> Var<T> softmax_rows(Var<T> a);
// m x n -> m x 1, numerically stable.
template <typename T> Var<T> log_sum_exp_rows(Var<T> a);

template <typename T> Var<T> concat_cols(std::span<const Var<T>> parts);
template <typename T> Var<T> concat_rows(std::span<const Var<T>> parts);
template <typename T> Var<T> slice_rows(Var<T> a, std::size_t begin, std::size_t count);
template <typename T> Var<T> slice_cols(Var<T> a, std::size_t begin, std::size_t count);
template <typename T> Var<T> reshape(Var<T> a, std::size_t rows, std::size_t cols);

// Mean over all entries, 1 x 1.
template <typename T> Var<T> mean(Var<T> a);
// Column-wise mean over rows, 1 x n.
template <typename T> Var<T> mean_rows(Var<T> a);
template <typename T> Var<T> pick(Var<T> a, std::size_t row, std::size_t col);

template <typename T>
Var<T> layer_norm(Var<T> a, Var<T> gain, Var<T> bias, T eps = T(1e-5));

// Embedding lookup: one row of `table` per id.
template <typename T> Var<T> gather_rows(Var<T> table, std::span<const int> ids);

// Inverted dropout; identity when rate == 0.
template <typename T> Var<T> dropout(Var<T> a, T rate, std::mt19937_64& rng);

// Row i of the result concatenates rows i-k/2 .. i+k/2 of `a`, zero padded at
// both ends (same-padding window for 1-D convolution). k must be odd.
template <typename T> Var<T> unfold_rows(Var<T> a, std::size_t k);

// Non-overlapping max pooling with a window of pool_rows x pool_cols;
// trailing rows/cols that do not fill a window are dropped.
template <typename T> Var<T> max_pool(Var<T> a, std::size_t pool_rows, std::size_t pool_cols);

// -z[target] + log(sum_j exp(z[j])) for a 1 x C row of logits.
template <typename T> Var<T> cross_entropy(Var<T> logits, std::size_t target);

}  // namespace rfclink::num
