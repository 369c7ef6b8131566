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

#include "rfclink/rfc_corpus.hpp"

#include <httplib.h>

#include <fstream>
#include <random>
#include <regex>
#include <sstream>
#include <system_error>

#include "rfclink/error.hpp"

namespace rfclink::corpus {
namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw NotFound("cannot open " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string expand(std::string_view tmpl, int n) {
  std::string out(tmpl);
  const auto pos = out.find("{n}");
  if (pos == std::string::npos) throw Error("base URI '" + out + "' lacks the {n} placeholder");
  out.replace(pos, 3, std::to_string(n));
  return out;
}

std::string download(const std::string& uri, const FetchOptions& options) {
  if (uri.rfind("file://", 0) == 0) {
    const std::filesystem::path p = uri.substr(7);
    if (!std::filesystem::exists(p)) throw NotFound(uri + ": no such document");
    return read_file(p);
  }
  const auto scheme_end = uri.find("://");
  if (scheme_end == std::string::npos) throw Error("unsupported URI '" + uri + "'");
  const auto path_start = uri.find('/', scheme_end + 3);
  const std::string origin = uri.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : uri.substr(path_start);

  httplib::Client client(origin);
  client.set_connection_timeout(options.timeout);
  client.set_read_timeout(options.timeout);
  client.set_follow_location(true);
  auto res = client.Get(path);
  if (!res) throw NetworkError(uri + ": " + httplib::to_string(res.error()));
  if (res->status == 404) throw NotFound(uri + ": 404 not found");
  if (res->status != 200) throw NetworkError(uri + ": HTTP status " + std::to_string(res->status));
  return res->body;
}

void write_atomically(const std::filesystem::path& target, const std::string& bytes) {
  std::filesystem::create_directories(target.parent_path());
  auto tmp = target;
  tmp += ".part" + std::to_string(std::random_device{}());
  {
    std::ofstream out(tmp, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("cannot write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace

bool is_page_footer(std::string_view line) {
  static const std::regex footer(R"(\[Page \d+\]\s*$)");
  return std::regex_search(line.begin(), line.end(), footer);
}

std::vector<std::string> clean_document(std::string_view raw) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : raw) {
    if (c == '\n') {
      lines.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(std::move(cur));

  std::vector<std::string> out;
  out.reserve(lines.size());
  bool drop_banner = false;
  for (auto& line : lines) {
    const bool had_feed = line.find('\f') != std::string::npos;
    if (had_feed) std::erase(line, '\f');
    const bool blank = line.find_first_not_of(" \t") == std::string::npos;
    if (had_feed && blank) continue;
    if (is_page_footer(line)) {
      drop_banner = true;
      continue;
    }
    if (drop_banner && !blank) {
      drop_banner = false;
      continue;
    }
    out.push_back(std::move(line));
  }
  return out;
}

std::filesystem::path cache_path(const std::filesystem::path& cache_dir, int rfc_number) {
  return cache_dir / ("rfc" + std::to_string(rfc_number) + ".txt");
}

RfcDocument make_document(int rfc_number, std::string_view raw, std::string source_uri) {
  if (rfc_number <= 0) throw NotFound("invalid RFC number " + std::to_string(rfc_number));
  RfcDocument doc;
  doc.rfc_number = rfc_number;
  doc.lines = clean_document(raw);
  doc.source_uri = std::move(source_uri);
  doc.fetched_at = std::chrono::system_clock::now();
  return doc;
}

RfcDocument load_cached(int rfc_number, const std::filesystem::path& cache_dir) {
  if (rfc_number <= 0) throw NotFound("invalid RFC number " + std::to_string(rfc_number));
  const auto path = cache_path(cache_dir, rfc_number);
  if (!std::filesystem::exists(path))
    throw NotFound("RFC " + std::to_string(rfc_number) + " not fetched (no " + path.string() + ")");
  auto doc = make_document(rfc_number, read_file(path), "file://" + std::filesystem::absolute(path).string());
  std::error_code ec;
  const auto mtime = std::filesystem::last_write_time(path, ec);
  if (!ec) {
    doc.fetched_at = std::chrono::time_point_cast<std::chrono::system_clock::duration>(
        std::chrono::file_clock::to_sys(mtime));
  }
  return doc;
}

RfcDocument fetch_rfc(int rfc_number, const std::filesystem::path& cache_dir, const FetchOptions& options) {
  if (rfc_number <= 0) throw NotFound("invalid RFC number " + std::to_string(rfc_number));
  if (std::filesystem::exists(cache_path(cache_dir, rfc_number))) return load_cached(rfc_number, cache_dir);
  const auto uri = expand(options.base_uri, rfc_number);
  const auto bytes = download(uri, options);
  write_atomically(cache_path(cache_dir, rfc_number), bytes);
  return make_document(rfc_number, bytes, uri);
}

}  // namespace rfclink::corpus
