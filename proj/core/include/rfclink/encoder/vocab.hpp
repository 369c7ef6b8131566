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

#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rfclink::encoder {

// Token <-> id table with the four reserved ids fixed at the front.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kCls = 2;
  static constexpr int kSep = 3;
  static constexpr std::size_t kReserved = 4;

  Vocab();

  // Frequency-ranked over the given token streams (ties broken by byte
  // order), every token seen at least once, capped at max_size ids in total.
  static Vocab build(std::span<const std::vector<std::string>> corpus, std::size_t max_size);

  // One token per line; line n (0-based) holds id n + 4.
  static Vocab load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  int id(const std::string& token) const;
  std::vector<int> ids(std::span<const std::string> tokens) const;
  const std::string& token(int id) const;
  std::size_t size() const { return tokens_.size(); }

  bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

 private:
  void push(std::string token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace rfclink::encoder
