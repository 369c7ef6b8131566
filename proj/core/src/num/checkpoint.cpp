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

#include "rfclink/num/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace rfclink::num {
namespace {

void put_le32(std::ostream& os, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  const char bytes[4] = {static_cast<char>(bits & 0xff), static_cast<char>((bits >> 8) & 0xff),
                         static_cast<char>((bits >> 16) & 0xff), static_cast<char>((bits >> 24) & 0xff)};
  os.write(bytes, 4);
}

float get_le32(const unsigned char* p) {
  const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                             (static_cast<std::uint32_t>(p[2]) << 16) |
                             (static_cast<std::uint32_t>(p[3]) << 24);
  return std::bit_cast<float>(bits);
}

}  // namespace

template <typename T>
void save_checkpoint(const ParamStore<T>& store, const std::filesystem::path& manifest,
                     const std::filesystem::path& payload) {
  std::ofstream man(manifest, std::ios::binary);
  std::ofstream bin(payload, std::ios::binary);
  if (!man || !bin) throw Error("cannot write checkpoint at " + manifest.string());
  std::size_t offset = 0;
  for (const auto& name : store.names()) {
    const auto& t = store.get(name);
    man << name << ' ' << t.rows() << 'x' << t.cols() << ' ' << offset << '\n';
    for (auto v : t.data()) put_le32(bin, static_cast<float>(v));
    offset += 4 * t.size();
  }
  if (!man || !bin) throw Error("failed writing checkpoint at " + manifest.string());
}

template <typename T>
void load_checkpoint(ParamStore<T>& store, const std::filesystem::path& manifest,
                     const std::filesystem::path& payload) {
  std::ifstream man(manifest);
  if (!man) throw NotFound("checkpoint manifest " + manifest.string() + " not found");
  std::ifstream bin(payload, std::ios::binary);
  if (!bin) throw NotFound("checkpoint payload " + payload.string() + " not found");
  const std::string bytes((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());

  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(man, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string name, shape;
    std::size_t offset = 0;
    if (!(is >> name >> shape >> offset))
      throw ParseError(manifest.string() + ":" + std::to_string(lineno) + ": malformed manifest entry");
    const auto x = shape.find('x');
    if (x == std::string::npos)
      throw ParseError(manifest.string() + ":" + std::to_string(lineno) + ": malformed shape '" + shape + "'");
    const Shape s{std::stoul(shape.substr(0, x)), std::stoul(shape.substr(x + 1))};
    if (!store.contains(name)) throw ConfigError("checkpoint has unknown parameter '" + name + "'");
    auto& t = store.get(name);
    if (t.shape() != s)
      throw ShapeMismatch("checkpoint parameter '" + name + "' is " + to_string(s) + ", model expects " +
                          to_string(t.shape()));
    if (offset + 4 * t.size() > bytes.size())
      throw ParseError(manifest.string() + ":" + std::to_string(lineno) + ": payload too short");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + offset;
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<T>(get_le32(p + 4 * i));
    seen.insert(name);
  }
  for (const auto& name : store.names())
    if (!seen.count(name)) throw ConfigError("checkpoint is missing parameter '" + name + "'");
}

template void save_checkpoint(const ParamStore<float>&, const std::filesystem::path&, const std::filesystem::path&);
template void save_checkpoint(const ParamStore<double>&, const std::filesystem::path&, const std::filesystem::path&);
template void load_checkpoint(ParamStore<float>&, const std::filesystem::path&, const std::filesystem::path&);
template void load_checkpoint(ParamStore<double>&, const std::filesystem::path&, const std::filesystem::path&);

}  // namespace rfclink::num
