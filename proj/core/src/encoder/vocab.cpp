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

#include "rfclink/encoder/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "rfclink/encoder/tokenizer.hpp"
#include "rfclink/error.hpp"

namespace rfclink::encoder {

Vocab::Vocab() {
  push(std::string(kPadToken));
  push(std::string(kUnkToken));
  push(std::string(kClsToken));
  push(std::string(kSepToken));
}

void Vocab::push(std::string token) {
  index_.emplace(token, static_cast<int>(tokens_.size()));
  tokens_.push_back(std::move(token));
}

Vocab Vocab::build(std::span<const std::vector<std::string>> corpus, std::size_t max_size) {
  std::map<std::string, std::size_t> counts;
  for (const auto& seq : corpus)
    for (const auto& tok : seq) ++counts[tok];
  Vocab v;
  for (std::size_t i = 0; i < kReserved; ++i) counts.erase(v.tokens_[i]);

  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (auto& [tok, _] : ranked) {
    if (v.size() >= max_size) break;
    v.push(tok);
  }
  return v;
}

Vocab Vocab::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFound("vocab file " + path.string() + " not found");
  Vocab v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || v.index_.count(line))
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": empty or repeated token");
    v.push(line);
  }
  return v;
}

void Vocab::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write vocab file " + path.string());
  for (std::size_t i = kReserved; i < tokens_.size(); ++i) out << tokens_[i] << '\n';
}

int Vocab::id(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

std::vector<int> Vocab::ids(std::span<const std::string> tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(id(t));
  return out;
}

const std::string& Vocab::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size())
    throw IdOutOfRange("token id " + std::to_string(id) + " outside vocabulary of " +
                       std::to_string(tokens_.size()));
  return tokens_[static_cast<std::size_t>(id)];
}

}  // namespace rfclink::encoder
