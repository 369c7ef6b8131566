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
#include <vector>

namespace rfclink::eval {

// Per-class true positive, false positive and false negative counts.
struct Confusion {
  explicit Confusion(std::size_t num_classes = 0)
      : tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0) {}

  std::vector<std::size_t> tp, fp, fn;
  std::size_t n = 0;  // updates so far

  std::size_t num_classes() const { return tp.size(); }
  // Counts of another confusion over the same classes are added to these.
  void merge(const Confusion& other);
  bool operator==(const Confusion&) const = default;
};

struct Metrics {
  double accuracy = 0;
  double avg_precision = 0;
  double avg_recall = 0;
  double avg_f = 0;
  std::size_t n = 0;

  bool operator==(const Metrics&) const = default;
};

// predicted == truth: TP(predicted) += 1; otherwise FP(predicted) and
// FN(truth) += 1. Throws ClassOutOfRange.
void update_confusion(Confusion& c, std::size_t predicted, std::size_t truth);

// Accuracy and macro-averaged precision, recall and F over N updates. A class
// whose precision or recall has a zero denominator contributes 0. Throws
// ZeroSamples when n == 0.
Metrics compute_metrics(const Confusion& c, std::size_t n);
inline Metrics compute_metrics(const Confusion& c) { return compute_metrics(c, c.n); }

}  // namespace rfclink::eval
