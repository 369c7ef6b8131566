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

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rfclink::corpus {

// Plaintext RFC with pagination removed; lines are addressable by index.
struct RfcDocument {
  int rfc_number = 0;
  std::vector<std::string> lines;
  std::string source_uri;
  std::chrono::system_clock::time_point fetched_at{};
};

// "{n}" is replaced by the RFC number. http://, https:// and file:// are
// understood.
inline constexpr std::string_view kDefaultBaseUri = "https://www.rfc-editor.org/rfc/rfc{n}.txt";

struct FetchOptions {
  std::string base_uri{kDefaultBaseUri};
  std::chrono::seconds timeout{30};
};

// Splits raw text into lines and drops pagination: form feeds, every line
// ending in a "[Page N]" footer, and the first non-blank line after each
// footer (the running title banner of the next page). Nothing else is
// removed and line order is preserved.
std::vector<std::string> clean_document(std::string_view raw);

// True for a page footer line, e.g. "Postel                     [Page 3]".
bool is_page_footer(std::string_view line);

std::filesystem::path cache_path(const std::filesystem::path& cache_dir, int rfc_number);

// Reads <cache_dir>/rfc<n>.txt when present; otherwise downloads it and
// stores the exact remote bytes there before cleaning.
// Throws NotFound for a non-positive number or a missing remote document and
// NetworkError when the source is unreachable.
RfcDocument fetch_rfc(int rfc_number, const std::filesystem::path& cache_dir,
                      const FetchOptions& options = {});

// Cache-only variant; throws NotFound("... not fetched") on a cache miss.
RfcDocument load_cached(int rfc_number, const std::filesystem::path& cache_dir);

// Cleans already-loaded text into a document.
RfcDocument make_document(int rfc_number, std::string_view raw, std::string source_uri);

}  // namespace rfclink::corpus
