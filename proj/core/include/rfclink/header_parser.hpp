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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rfclink/rfc_corpus.hpp"

namespace rfclink::header {

// A named bit span of a header diagram.
struct HeaderField {
  std::string name;  // verbatim cell text, trimmed
  std::size_t bit_offset = 0;
  std::size_t bit_width = 0;
  int rfc_number = 0;
  std::size_t diagram_index = 0;
  bool unnamed = false;  // blank cell; name is "unnamed@<offset>"

  bool operator==(const HeaderField&) const = default;
};

struct HeaderDiagram {
  int rfc_number = 0;
  std::size_t index = 0;
  std::size_t start_line = 0;  // inclusive, into the cleaned document
  std::size_t end_line = 0;    // inclusive
  std::vector<std::string> rows;
  std::vector<HeaderField> fields;
  // Set when a row holds an open-ended field ("Options", "data", "...");
  // fields at or beyond `fixed_bits` belong to that variable part.
  bool variable_length = false;
  std::size_t fixed_bits = 0;
  std::size_t total_bits = 0;
};

enum class RowKind {
  Ruler,      // +-+-+-...+
  Separator,  // + ... + inside a multi-row cell
  Content,    // | ... |
  Caption,    // bit index line: "0 1 2 3 ..."
  Other,
};

RowKind classify_row(std::string_view line);

// Finds every run of ruler/content rows bracketed by at least two rulers.
// Fields are left empty.
std::vector<HeaderDiagram> detect_diagrams(const corpus::RfcDocument& doc);

// Splits one content row on '|'. A cell of L characters spans (L + 1) / 2
// bits. Throws MalformedRow if the row is not '|'-delimited or a cell has an
// even character count.
std::vector<HeaderField> parse_row(std::string_view row, std::size_t row_bit_base);

// Parses every content row of a detected diagram, joining multi-line cell
// text and merging cells that continue over several 32-bit rows. Errors
// carry the document line number.
HeaderDiagram parse_diagram(HeaderDiagram diagram);

// detect_diagrams + parse_diagram.
std::vector<HeaderDiagram> extract_diagrams(const corpus::RfcDocument& doc);

// Inverse of parse_row for fields laid out in one row: a '|'-delimited row
// whose cells have the character widths implied by the bit widths.
std::string render_row(std::span<const HeaderField> fields);

}  // namespace rfclink::header
