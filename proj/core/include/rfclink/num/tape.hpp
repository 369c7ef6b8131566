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
#include <deque>
#include <functional>
#include <span>
#include <vector>

#include "rfclink/num/tensor.hpp"

namespace rfclink::num {

template <typename T>
class Tape;

// Handle to a value recorded on a Tape.
template <typename T>
struct Var {
  Tape<T>* tape = nullptr;
  std::size_t id = 0;

  const Tensor<T>& value() const { return tape->value(id); }
  const Shape& shape() const { return value().shape(); }
};

// Reverse-mode recording for one forward/backward pass. Each recorded value
// carries its own backward rule; a tape is discarded after backward().
template <typename T>
class Tape {
 public:
  // Invoked during backward with the id of the node whose gradient is ready.
  using BackwardFn = std::function<void(Tape&, std::size_t)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var<T> constant(Tensor<T> value) {
    Node& n = nodes_.emplace_back();
    n.owned = std::move(value);
    return {this, nodes_.size() - 1};
  }

  // Leaf bound to a trainable tensor. Gradients accumulate into p.grad().
  Var<T> param(Tensor<T>& p) {
    Node& n = nodes_.emplace_back();
    n.external = &p;
    n.requires_grad = true;
    return {this, nodes_.size() - 1};
  }

  Var<T> record(Tensor<T> value, std::initializer_list<std::size_t> inputs, BackwardFn fn) {
    return record(std::move(value), std::span<const std::size_t>(inputs.begin(), inputs.size()),
                  std::move(fn));
  }

  Var<T> record(Tensor<T> value, std::span<const std::size_t> inputs, BackwardFn fn) {
    bool needs = false;
    for (auto id : inputs) needs = needs || nodes_[id].requires_grad;
    Node& n = nodes_.emplace_back();
    n.owned = std::move(value);
    n.requires_grad = needs;
    if (needs) n.backward = std::move(fn);
    return {this, nodes_.size() - 1};
  }

  const Tensor<T>& value(std::size_t id) const {
    const Node& n = nodes_[id];
    return n.external ? *n.external : n.owned;
  }

  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }

  // Gradient buffer of a node, zero-initialized on first access.
  std::span<T> grad(std::size_t id) {
    Node& n = nodes_[id];
    if (n.external) return n.external->grad();
    if (n.grad.empty()) n.grad.assign(n.owned.size(), T(0));
    return n.grad;
  }

  bool has_grad(std::size_t id) const {
    const Node& n = nodes_[id];
    return n.external ? n.external->has_grad() : !n.grad.empty();
  }

  // Seeds d(root)/d(root) = 1 and runs every backward rule in reverse order.
  void backward(Var<T> root) {
    if (value(root.id).size() != 1) {
      throw ShapeMismatch("backward: root must be a scalar, got " + to_string(root.shape()));
    }
    grad(root.id)[0] += T(1);
    for (std::size_t i = root.id + 1; i-- > 0;) {
      Node& n = nodes_[i];
      if (!n.requires_grad || !n.backward || n.grad.empty()) continue;
      n.backward(*this, i);
    }
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor<T> owned;
    Tensor<T>* external = nullptr;
    std::vector<T> grad;
    bool requires_grad = false;
    BackwardFn backward;
  };

  // deque keeps node addresses stable while recording.
  std::deque<Node> nodes_;
};

}  // namespace rfclink::num
