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

#include "rfclink/eval/metrics.hpp"

#include <string>

#include "rfclink/error.hpp"

namespace rfclink::eval {

void Confusion::merge(const Confusion& other) {
  if (other.num_classes() != num_classes())
    throw ShapeMismatch("confusion over " + std::to_string(other.num_classes()) + " classes merged into " +
                        std::to_string(num_classes()));
  for (std::size_t c = 0; c < num_classes(); ++c) {
    tp[c] += other.tp[c];
    fp[c] += other.fp[c];
    fn[c] += other.fn[c];
  }
  n += other.n;
}

void update_confusion(Confusion& c, std::size_t predicted, std::size_t truth) {
  const auto k = c.num_classes();
  if (predicted >= k || truth >= k)
    throw ClassOutOfRange("update_confusion: classes " + std::to_string(predicted) + ", " +
                          std::to_string(truth) + " with C = " + std::to_string(k));
  if (predicted == truth) {
    ++c.tp[predicted];
  } else {
    ++c.fp[predicted];
    ++c.fn[truth];
  }
  ++c.n;
}

Metrics compute_metrics(const Confusion& c, std::size_t n) {
  if (n == 0) throw ZeroSamples("compute_metrics: no samples");
  const auto k = c.num_classes();
  if (k == 0) throw ClassOutOfRange("compute_metrics: no classes");
  Metrics m;
  m.n = n;
  std::size_t correct = 0;
  double p = 0, r = 0;
  for (std::size_t a = 0; a < k; ++a) {
    correct += c.tp[a];
    if (c.tp[a] + c.fp[a] > 0) p += static_cast<double>(c.tp[a]) / static_cast<double>(c.tp[a] + c.fp[a]);
    if (c.tp[a] + c.fn[a] > 0) r += static_cast<double>(c.tp[a]) / static_cast<double>(c.tp[a] + c.fn[a]);
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  m.avg_precision = p / static_cast<double>(k);
  m.avg_recall = r / static_cast<double>(k);
  m.avg_f = m.avg_precision + m.avg_recall > 0
                ? 2.0 * m.avg_precision * m.avg_recall / (m.avg_precision + m.avg_recall)
                : 0.0;
  return m;
}

}  // namespace rfclink::eval
