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

#include "rfclink/header_parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>

#include "rfclink/error.hpp"

namespace rfclink::header {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct Cell {
  std::size_t begin = 0;  // index of the opening '|' in the trimmed row
  std::size_t width = 0;  // bits
  std::string text;       // trimmed
};

std::vector<Cell> split_cells(std::string_view row) {
  const auto t = trim(row);
  if (t.size() < 2 || t.front() != '|' || t.back() != '|')
    throw MalformedRow("row is not delimited by '|': \"" + std::string(t) + "\"");
  std::vector<Cell> cells;
  std::size_t open = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] != '|') continue;
    const auto len = i - open - 1;
    if ((len + 1) % 2 != 0)
      throw MalformedRow("cell \"" + std::string(t.substr(open + 1, len)) + "\" spans " +
                         std::to_string(len) + " characters, which is not a whole number of bits");
    cells.push_back({open, (len + 1) / 2, std::string(trim(t.substr(open + 1, len)))});
    open = i;
  }
  return cells;
}

// Joins the pieces of a cell written over several lines. Vertically spelled
// names ("U" / "R" / "G") are concatenated without spaces.
std::string join_pieces(const std::vector<std::string>& pieces) {
  std::vector<std::string> nonempty;
  for (const auto& p : pieces)
    if (!p.empty()) nonempty.push_back(p);
  const bool letters = !nonempty.empty() &&
                       std::all_of(nonempty.begin(), nonempty.end(), [](const auto& p) { return p.size() == 1; });
  std::string out;
  for (const auto& p : nonempty) {
    if (!out.empty() && !letters) out.push_back(' ');
    out += p;
  }
  return out;
}

bool is_variable_name(std::string_view name) {
  if (name.find("...") != std::string_view::npos || name.find("\xE2\x80\xA6") != std::string_view::npos)
    return true;
  const auto l = lower(name);
  if (l.find("variable") != std::string::npos) return true;
  static const char* const open_ended[] = {"options", "option", "data", "payload", "padding",
                                           "payload data", "user data"};
  return std::any_of(std::begin(open_ended), std::end(open_ended), [&](const char* k) { return l == k; });
}

// One parsed 32-bit (or narrower) row, or several rows merged into one cell.
struct Unit {
  std::vector<Cell> cells;
  std::size_t bits = 0;
  bool single() const { return cells.size() == 1; }
};

}  // namespace

RowKind classify_row(std::string_view line) {
  static const std::regex ruler(R"(^\+([-=]\+)+$)");
  static const std::regex caption(R"(^[0-9]( +[0-9])*$)");
  const auto t = trim(line);
  if (t.empty()) return RowKind::Other;
  const std::string s(t);
  if (std::regex_match(s, ruler)) return RowKind::Ruler;
  if (s.size() >= 2 && s.front() == '|' && s.back() == '|') return RowKind::Content;
  auto edge = [](char c) { return c == '+' || c == '|' || c == '~' || c == '/' || c == '\\'; };
  if (s.size() >= 3 && edge(s.front()) && edge(s.back()) && (s.front() != '|' || s.back() != '|') &&
      s.find(' ') != std::string::npos)
    return RowKind::Separator;
  if (std::regex_match(s, caption)) return RowKind::Caption;
  return RowKind::Other;
}

std::vector<HeaderDiagram> detect_diagrams(const corpus::RfcDocument& doc) {
  std::vector<HeaderDiagram> out;
  const auto& lines = doc.lines;
  auto in_box = [](RowKind k) { return k == RowKind::Ruler || k == RowKind::Separator || k == RowKind::Content; };
  std::size_t i = 0;
  while (i < lines.size()) {
    if (!in_box(classify_row(lines[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < lines.size() && in_box(classify_row(lines[j]))) ++j;
    // run is [i, j); trim to first..last ruler
    std::optional<std::size_t> first, last;
    std::size_t rulers = 0;
    for (std::size_t r = i; r < j; ++r) {
      if (classify_row(lines[r]) != RowKind::Ruler) continue;
      if (!first) first = r;
      last = r;
      ++rulers;
    }
    bool has_content = false;
    if (first && last)
      for (std::size_t r = *first; r <= *last; ++r) has_content = has_content || classify_row(lines[r]) == RowKind::Content;
    if (rulers >= 2 && has_content) {
      std::size_t start = *first;
      while (start > 0 && *first - start < 2 && classify_row(lines[start - 1]) == RowKind::Caption) --start;
      HeaderDiagram d;
      d.rfc_number = doc.rfc_number;
      d.index = out.size();
      d.start_line = start;
      d.end_line = *last;
      d.rows.assign(lines.begin() + static_cast<std::ptrdiff_t>(start),
                    lines.begin() + static_cast<std::ptrdiff_t>(*last) + 1);
      out.push_back(std::move(d));
    }
    i = j;
  }
  return out;
}

std::vector<HeaderField> parse_row(std::string_view row, std::size_t row_bit_base) {
  std::vector<HeaderField> fields;
  std::size_t offset = row_bit_base;
  for (auto& cell : split_cells(row)) {
    HeaderField f;
    f.bit_offset = offset;
    f.bit_width = cell.width;
    f.unnamed = cell.text.empty();
    f.name = f.unnamed ? "unnamed@" + std::to_string(offset) : std::move(cell.text);
    offset += cell.width;
    fields.push_back(std::move(f));
  }
  return fields;
}

HeaderDiagram parse_diagram(HeaderDiagram d) {
  d.fields.clear();
  std::vector<Unit> units;

  // Rows between two rulers. Consecutive content lines form one bit row
  // with multi-line cell text; a separator starts a new bit row.
  std::vector<std::vector<std::size_t>> bit_rows;
  std::vector<std::string> block_texts;
  bool have_separator = false;

  auto fail = [&](std::size_t r, const std::string& what) -> MalformedRow {
    return MalformedRow("RFC " + std::to_string(d.rfc_number) + " line " +
                        std::to_string(d.start_line + r + 1) + ": " + what);
  };

  auto parse_bit_row = [&](const std::vector<std::size_t>& rows) {
    Unit u;
    try {
      u.cells = split_cells(d.rows[rows.front()]);
    } catch (const MalformedRow& e) {
      throw fail(rows.front(), e.what());
    }
    std::vector<std::vector<std::string>> pieces(u.cells.size());
    for (std::size_t r : rows) {
      std::vector<Cell> cells;
      try {
        cells = split_cells(d.rows[r]);
      } catch (const MalformedRow& e) {
        throw fail(r, e.what());
      }
      if (cells.size() != u.cells.size() ||
          !std::equal(cells.begin(), cells.end(), u.cells.begin(),
                      [](const Cell& a, const Cell& b) { return a.begin == b.begin; }))
        throw fail(r, "cell boundaries differ from the line above");
      for (std::size_t c = 0; c < cells.size(); ++c) pieces[c].push_back(cells[c].text);
    }
    for (std::size_t c = 0; c < u.cells.size(); ++c) {
      u.cells[c].text = join_pieces(pieces[c]);
      u.bits += u.cells[c].width;
    }
    return u;
  };

  auto flush = [&] {
    if (bit_rows.empty()) {
      block_texts.clear();
      have_separator = false;
      return;
    }
    std::vector<Unit> parsed;
    for (const auto& rows : bit_rows) parsed.push_back(parse_bit_row(rows));
    const bool stacked = parsed.size() > 1 && std::all_of(parsed.begin(), parsed.end(), [&](const Unit& u) {
                           return u.single() && u.bits == parsed.front().bits;
                         });
    if (stacked) {
      Unit merged = parsed.front();
      merged.bits = 0;
      for (const auto& u : parsed) merged.bits += u.bits;
      merged.cells.front().width = merged.bits;
      merged.cells.front().text = join_pieces(block_texts);
      units.push_back(std::move(merged));
    } else {
      for (auto& u : parsed) units.push_back(std::move(u));
    }
    bit_rows.clear();
    block_texts.clear();
    have_separator = false;
  };

  for (std::size_t r = 0; r < d.rows.size(); ++r) {
    switch (classify_row(d.rows[r])) {
      case RowKind::Ruler:
        flush();
        break;
      case RowKind::Content: {
        if (bit_rows.empty() || have_separator) bit_rows.emplace_back();
        have_separator = false;
        bit_rows.back().push_back(r);
        const auto t = trim(d.rows[r]);
        block_texts.emplace_back(trim(t.substr(1, t.size() - 2)));
        break;
      }
      case RowKind::Separator: {
        have_separator = true;
        const auto t = trim(d.rows[r]);
        block_texts.emplace_back(trim(t.substr(1, t.size() - 2)));
        break;
      }
      case RowKind::Caption:
      case RowKind::Other:
        break;
    }
  }
  flush();

  // A full-width cell repeated under the same name, or followed by a blank
  // full-width row, continues over the next row.
  std::vector<Unit> merged;
  for (auto& u : units) {
    if (!merged.empty()) {
      auto& prev = merged.back();
      const bool continues = prev.single() && u.single() && !prev.cells.front().text.empty() &&
                             (u.cells.front().text.empty() || u.cells.front().text == prev.cells.front().text);
      if (continues) {
        prev.bits += u.bits;
        prev.cells.front().width += u.bits;
        continue;
      }
    }
    merged.push_back(std::move(u));
  }

  std::size_t base = 0;
  for (const auto& u : merged) {
    std::size_t offset = base;
    for (const auto& cell : u.cells) {
      HeaderField f;
      f.bit_offset = offset;
      f.bit_width = cell.width;
      f.rfc_number = d.rfc_number;
      f.diagram_index = d.index;
      f.unnamed = cell.text.empty();
      f.name = f.unnamed ? "unnamed@" + std::to_string(offset) : cell.text;
      if (!d.variable_length && !f.unnamed && is_variable_name(f.name)) {
        d.variable_length = true;
        d.fixed_bits = base;
      }
      offset += cell.width;
      d.fields.push_back(std::move(f));
    }
    base += u.bits;
  }
  d.total_bits = base;
  if (!d.variable_length) d.fixed_bits = base;
  return d;
}

std::vector<HeaderDiagram> extract_diagrams(const corpus::RfcDocument& doc) {
  auto diagrams = detect_diagrams(doc);
  for (auto& d : diagrams) d = parse_diagram(std::move(d));
  return diagrams;
}

std::string render_row(std::span<const HeaderField> fields) {
  std::string row = "|";
  for (const auto& f : fields) {
    const auto len = 2 * f.bit_width - 1;
    std::string text = f.unnamed ? std::string() : f.name.substr(0, len);
    const auto pad = len - text.size();
    row.append(pad / 2, ' ');
    row += text;
    row.append(pad - pad / 2, ' ');
    row.push_back('|');
  }
  return row;
}

}  // namespace rfclink::header
