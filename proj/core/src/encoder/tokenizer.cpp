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

#include "rfclink/encoder/tokenizer.hpp"

#include <cctype>

namespace rfclink::encoder {

std::vector<std::string> tokenize(std::string_view text, std::size_t max_len, bool wrap) {
  std::vector<std::string> words;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) words.push_back(std::move(cur));
    cur.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      flush();
      words.emplace_back(1, ch);
    } else {
      cur.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    }
  }
  flush();

  const std::size_t reserved = wrap ? 2 : 0;
  const std::size_t room = max_len > reserved ? max_len - reserved : 0;
  if (words.size() > room) words.resize(room);
  if (!wrap) return words;

  std::vector<std::string> out;
  out.reserve(words.size() + 2);
  out.emplace_back(kClsToken);
  for (auto& w : words) out.push_back(std::move(w));
  out.emplace_back(kSepToken);
  return out;
}

}  // namespace rfclink::encoder
