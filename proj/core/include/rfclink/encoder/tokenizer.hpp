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

#include <string>
#include <string_view>
#include <vector>

namespace rfclink::encoder {

inline constexpr std::string_view kPadToken = "[PAD]";
inline constexpr std::string_view kUnkToken = "[UNK]";
inline constexpr std::string_view kClsToken = "[CLS]";
inline constexpr std::string_view kSepToken = "[SEP]";

// Lowercases, splits on whitespace, and emits every ASCII punctuation
// character as a token of its own. The result is truncated to max_len; with
// `wrap` two of those slots hold the [CLS] prefix and [SEP] suffix.
std::vector<std::string> tokenize(std::string_view text, std::size_t max_len, bool wrap);

}  // namespace rfclink::encoder
