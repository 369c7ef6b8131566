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

#include "rfclink/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include <json.hpp>

#include "rfclink/error.hpp"

namespace rfclink::dataset {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::vector<std::string> word_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (is_alnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

// Drops "(...)" groups and an "=value" suffix: "Ver=2" -> "Ver".
std::string strip_decorations(std::string_view name) {
  std::string out;
  int depth = 0;
  for (char c : name) {
    if (c == '(') ++depth;
    else if (c == ')' && depth > 0) --depth;
    else if (depth == 0) out.push_back(c);
  }
  if (const auto eq = out.find('='); eq != std::string::npos) out.erase(eq);
  return out;
}

// Equal, or the shorter (at least two characters) begins the longer.
bool token_match(const std::string& a, const std::string& b) {
  if (a == b) return true;
  const auto& shorter = a.size() < b.size() ? a : b;
  const auto& longer = a.size() < b.size() ? b : a;
  return shorter.size() >= 2 && longer.compare(0, shorter.size(), shorter) == 0;
}

bool all_digits(const std::string& t) {
  return std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

// Text of a paragraph's first line up to ':', '(' or a run of two spaces.
std::string_view heading_title(std::string_view line) {
  const auto b = line.find_first_not_of(' ');
  if (b == std::string_view::npos) return {};
  line.remove_prefix(b);
  // keep the space after a section number: "2.3.  Checksum"
  std::size_t start = 0;
  while (start < line.size() && (std::isdigit(static_cast<unsigned char>(line[start])) || line[start] == '.')) ++start;
  while (start < line.size() && line[start] == ' ') ++start;
  auto end = std::min({line.find(':', start), line.find('(', start), line.find("  ", start)});
  return line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
}

std::size_t indent_of(const std::string& line) {
  const auto p = line.find_first_not_of(' ');
  return p == std::string::npos ? line.size() : p;
}

// Text of every top-level "(...)" group.
std::vector<std::string> paren_groups(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') {
      if (depth++ > 0) cur.push_back(c);
    } else if (c == ')' && depth > 0) {
      if (--depth == 0) out.push_back(std::move(cur)), cur.clear();
      else cur.push_back(c);
    } else if (depth > 0) {
      cur.push_back(c);
    }
  }
  return out;
}

// Does `lead` begin with `name`, token by token? A one-line heading shorter
// than the name also matches when it has at least two tokens.
bool leads_with(const std::vector<std::string>& lead, const std::vector<std::string>& name, bool heading) {
  if (lead.empty() || name.empty()) return false;
  std::size_t n = name.size();
  if (lead.size() < n) {
    if (!heading || lead.size() < 2) return false;
    n = lead.size();
  }
  for (std::size_t t = 0; t < n; ++t)
    if (!token_match(name[t], lead[t])) return false;
  return true;
}

// Lowercase alphanumeric words separated by single spaces.
std::string normalize_words(std::string_view s) {
  std::string out;
  for (const auto& t : word_tokens(s)) out += (out.empty() ? "" : " ") + t;
  return out;
}

bool contains_word(const std::string& haystack_lower, const std::string& needle_lower) {
  if (needle_lower.empty()) return false;
  for (auto pos = haystack_lower.find(needle_lower); pos != std::string::npos;
       pos = haystack_lower.find(needle_lower, pos + 1)) {
    const auto end = pos + needle_lower.size();
    const bool left = pos == 0 || !is_alnum(haystack_lower[pos - 1]);
    const bool right = end == haystack_lower.size() || !is_alnum(haystack_lower[end]);
    if (left && right) return true;
  }
  return false;
}

struct Paragraph {
  std::size_t first = 0, last = 0;  // inclusive line indices
};

std::string join_lines(const std::vector<std::string>& lines, std::size_t first, std::size_t last) {
  std::string out;
  for (std::size_t i = first; i <= last; ++i) {
    const auto& l = lines[i];
    const auto b = l.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = l.find_last_not_of(" \t");
    if (!out.empty()) out.push_back(' ');
    out.append(l, b, e - b + 1);
  }
  return out;
}

template <typename T>
T require(const ordered_json& j, const char* key, std::size_t line) {
  if (!j.contains(key)) throw ParseError("line " + std::to_string(line) + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError("line " + std::to_string(line) + ": bad value for '" + key + "'");
  }
}

template <typename F>
void for_each_record(const std::filesystem::path& path, F&& f) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open " + path.string());
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError("line " + std::to_string(line_no) + ": not a record");
    f(j, line_no);
  }
}

template <typename Range, typename F>
void write_records(const std::filesystem::path& path, const Range& items, F&& to_json) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw NotFound("cannot write " + path.string());
  for (const auto& item : items) out << to_json(item).dump() << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

PkbSchema PkbSchema::standard() {
  PkbSchema s;
  s.active = {"Identifier-label", "Length",         "Data",     "Boolean",  "Identifier-address",
              "Enum",             "Version Number", "Reserved", "Checksum"};
  s.entities = s.active;
  for (const char* extra : {"Timestamp", "Pointer", "Option"}) s.entities.emplace_back(extra);
  return s;
}

void PkbSchema::validate() const {
  std::set<std::string> seen;
  for (const auto& e : entities)
    if (!seen.insert(e).second) throw ConfigError("duplicate entity '" + e + "'");
  std::set<std::string> seen_active;
  for (const auto& a : active) {
    if (!seen.count(a)) throw ConfigError("active entity '" + a + "' is not declared");
    if (!seen_active.insert(a).second) throw ConfigError("duplicate active entity '" + a + "'");
  }
  if (active.size() < 2) throw ConfigError("schema needs at least two active entities");
}

PkbSchema PkbSchema::load(const std::filesystem::path& path) {
  PkbSchema s;
  for_each_record(path, [&](const ordered_json& j, std::size_t line) {
    auto name = require<std::string>(j, "name", line);
    if (require<bool>(j, "active", line)) s.active.push_back(name);
    s.entities.push_back(std::move(name));
  });
  s.validate();
  return s;
}

void PkbSchema::save(const std::filesystem::path& path) const {
  write_records(path, entities, [&](const std::string& e) {
    ordered_json j;
    j["name"] = e;
    j["active"] = std::find(active.begin(), active.end(), e) != active.end();
    return j;
  });
}

std::size_t PkbSchema::class_index(const std::string& label) const {
  const auto it = std::find(active.begin(), active.end(), label);
  if (it == active.end()) throw UnknownLabel("'" + label + "' is not an active entity");
  return static_cast<std::size_t>(it - active.begin());
}

const std::string& PkbSchema::class_name(std::size_t index) const {
  if (index >= active.size()) throw ClassOutOfRange("class " + std::to_string(index));
  return active[index];
}

std::string to_string(const FieldKey& key) {
  return "rfc " + std::to_string(key.rfc) + " diagram " + std::to_string(key.diagram) + " offset " +
         std::to_string(key.offset);
}

std::string link_description(const corpus::RfcDocument& doc, const header::HeaderDiagram& diagram,
                             const header::HeaderField& field, std::size_t window) {
  const auto& lines = doc.lines;
  std::vector<Paragraph> paras;
  for (std::size_t i = diagram.end_line + 1; i < lines.size() && paras.size() < window;) {
    if (lines[i].find_first_not_of(" \t") == std::string::npos) {
      ++i;
      continue;
    }
    Paragraph p{i, i};
    while (p.last + 1 < lines.size() && lines[p.last + 1].find_first_not_of(" \t") != std::string::npos)
      ++p.last;
    paras.push_back(p);
    i = p.last + 1;
  }

  if (field.unnamed) return {};
  auto name_tokens = word_tokens(strip_decorations(field.name));
  if (name_tokens.empty()) name_tokens = word_tokens(field.name);
  if (name_tokens.empty()) return {};
  // "synchronization source (SSRC) identifier" may be described under "SSRC".
  std::vector<std::vector<std::string>> aliases;
  for (const auto& g : paren_groups(field.name))
    if (auto t = word_tokens(g); !t.empty() && !std::all_of(t.begin(), t.end(), all_digits))
      aliases.push_back(std::move(t));

  auto with_body = [&](std::size_t p) {
    const auto indent = indent_of(lines[paras[p].first]);
    auto last = paras[p].last;
    for (std::size_t q = p + 1; q < paras.size() && indent_of(lines[paras[q].first]) > indent; ++q)
      last = paras[q].last;
    return join_lines(lines, paras[p].first, last);
  };

  // A heading that names the field exactly beats any prefix match:
  // "Checksum: 16 bits" over "Checksum Coverage (CsCov): 4 bits".
  for (std::size_t p = 0; p < paras.size(); ++p) {
    auto title = word_tokens(heading_title(lines[paras[p].first]));
    title.erase(title.begin(), std::find_if(title.begin(), title.end(), [](const std::string& t) { return !all_digits(t); }));
    if (title.empty()) continue;
    bool exact = title == name_tokens;
    for (const auto& a : aliases) exact = exact || title == a;
    if (exact) return with_body(p);
  }

  for (std::size_t p = 0; p < paras.size(); ++p) {
    const auto& first = lines[paras[p].first];
    auto lead = word_tokens(first);
    // section numbers: "2.3. Reserved0 (bits 1-12)"
    const auto numbered = std::find_if(lead.begin(), lead.end(), [](const std::string& t) { return !all_digits(t); });
    lead.erase(lead.begin(), numbered);
    const bool heading = paras[p].first == paras[p].last;
    bool match = leads_with(lead, name_tokens, heading);
    for (const auto& a : aliases) match = match || leads_with(lead, a, false);
    const auto groups = paren_groups(first);
    match = match || (!groups.empty() && word_tokens(groups.front()) == name_tokens);
    if (match) return with_body(p);
  }

  for (const auto& raw : {field.name, strip_decorations(field.name)}) {
    const auto needle = normalize_words(raw);
    const auto spaced = lower(raw);
    for (std::size_t p = 0; p < paras.size(); ++p) {
      const auto text = lower(join_lines(lines, paras[p].first, paras[p].last));
      if (contains_word(text, spaced.substr(0, spaced.find_last_not_of(' ') + 1)) ||
          contains_word(normalize_words(text), needle))
        return with_body(p);
    }
  }
  return {};
}

std::vector<CatalogEntry> build_catalog(const corpus::RfcDocument& doc,
                                        std::span<const header::HeaderDiagram> diagrams,
                                        std::size_t window) {
  std::vector<CatalogEntry> out;
  for (const auto& d : diagrams) {
    for (const auto& f : d.fields) {
      CatalogEntry e;
      e.rfc = f.rfc_number;
      e.diagram = f.diagram_index;
      e.offset = f.bit_offset;
      e.width = f.bit_width;
      e.name = f.name;
      e.variable = d.variable_length && f.bit_offset >= d.fixed_bits;
      e.description = link_description(doc, d, f, window);
      out.push_back(std::move(e));
    }
  }
  return out;
}

std::vector<Sample> build_samples(std::span<const CatalogEntry> catalog,
                                  std::span<const Annotation> annotations, const PkbSchema& schema) {
  std::map<FieldKey, const CatalogEntry*> index;
  for (const auto& e : catalog) index.emplace(e.key(), &e);
  std::vector<Sample> out;
  for (const auto& a : annotations) {
    const auto it = index.find(a.key());
    if (it == index.end()) throw DanglingAnnotation(to_string(a.key()) + " matches no field");
    if (std::find(schema.active.begin(), schema.active.end(), a.label) == schema.active.end())
      throw UnknownLabel(to_string(a.key()) + ": label '" + a.label + "' is not an active entity");
    const auto& e = *it->second;
    if (e.description.empty() || e.name.empty()) continue;
    out.push_back({e.name, e.description, a.label, e.rfc, e.diagram, e.offset});
  }
  return out;
}

std::vector<std::size_t> class_indices(std::span<const Sample> samples, const PkbSchema& schema) {
  std::vector<std::size_t> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(schema.class_index(s.label));
  return out;
}

std::vector<std::size_t> category_counts(std::span<const Sample> samples, const PkbSchema& schema) {
  std::vector<std::size_t> counts(schema.num_classes(), 0);
  for (const auto& s : samples) ++counts[schema.class_index(s.label)];
  return counts;
}

DatasetSplit make_folds(std::size_t n, std::size_t k, std::uint64_t seed,
                        std::span<const std::size_t> labels) {
  if (k < 2) throw ConfigError("need at least 2 folds, got " + std::to_string(k));
  if (n < k)
    throw TooFewSamples(std::to_string(n) + " samples cannot fill " + std::to_string(k) + " folds");
  if (labels.size() != n)
    throw ShapeMismatch("make_folds: " + std::to_string(labels.size()) + " labels for " +
                        std::to_string(n) + " samples");
  std::map<std::size_t, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < n; ++i) by_label[labels[i]].push_back(i);

  std::mt19937_64 rng(seed);
  DatasetSplit split;
  split.folds.resize(k);
  std::size_t next = 0;
  for (auto& [_, idx] : by_label) {
    std::shuffle(idx.begin(), idx.end(), rng);
    for (auto i : idx) {
      split.folds[next].push_back(i);
      next = (next + 1) % k;
    }
  }
  for (auto& f : split.folds) std::sort(f.begin(), f.end());
  return split;
}

void save_samples(const std::filesystem::path& path, std::span<const Sample> samples) {
  write_records(path, samples, [](const Sample& s) {
    ordered_json j;
    j["rfc"] = s.rfc_number;
    j["diagram"] = s.diagram_index;
    j["offset"] = s.field_offset;
    j["field"] = s.header_field;
    j["description"] = s.description;
    j["label"] = s.label;
    return j;
  });
}

std::vector<Sample> load_samples(const std::filesystem::path& path) {
  std::vector<Sample> out;
  for_each_record(path, [&](const ordered_json& j, std::size_t line) {
    Sample s;
    s.rfc_number = require<int>(j, "rfc", line);
    s.diagram_index = require<std::size_t>(j, "diagram", line);
    s.field_offset = require<std::size_t>(j, "offset", line);
    s.header_field = require<std::string>(j, "field", line);
    s.description = require<std::string>(j, "description", line);
    s.label = require<std::string>(j, "label", line);
    if (s.rfc_number <= 0) throw ParseError("line " + std::to_string(line) + ": rfc must be positive");
    if (s.header_field.empty() || s.description.empty() || s.label.empty())
      throw ParseError("line " + std::to_string(line) + ": empty field, description or label");
    out.push_back(std::move(s));
  });
  return out;
}

void save_catalog(const std::filesystem::path& path, std::span<const CatalogEntry> catalog) {
  write_records(path, catalog, [](const CatalogEntry& e) {
    ordered_json j;
    j["rfc"] = e.rfc;
    j["diagram"] = e.diagram;
    j["offset"] = e.offset;
    j["width"] = e.width;
    j["name"] = e.name;
    j["variable"] = e.variable;
    j["description"] = e.description;
    return j;
  });
}

std::vector<CatalogEntry> load_catalog(const std::filesystem::path& path) {
  std::vector<CatalogEntry> out;
  for_each_record(path, [&](const ordered_json& j, std::size_t line) {
    CatalogEntry e;
    e.rfc = require<int>(j, "rfc", line);
    e.diagram = require<std::size_t>(j, "diagram", line);
    e.offset = require<std::size_t>(j, "offset", line);
    e.width = require<std::size_t>(j, "width", line);
    e.name = require<std::string>(j, "name", line);
    e.variable = j.contains("variable") ? require<bool>(j, "variable", line) : false;
    e.description = j.contains("description") ? require<std::string>(j, "description", line) : "";
    out.push_back(std::move(e));
  });
  return out;
}

void save_annotations(const std::filesystem::path& path, std::span<const Annotation> annotations) {
  write_records(path, annotations, [](const Annotation& a) {
    ordered_json j;
    j["rfc"] = a.rfc;
    j["diagram"] = a.diagram;
    j["offset"] = a.offset;
    j["label"] = a.label;
    return j;
  });
}

std::vector<Annotation> load_annotations(const std::filesystem::path& path) {
  std::vector<Annotation> out;
  for_each_record(path, [&](const ordered_json& j, std::size_t line) {
    out.push_back({require<int>(j, "rfc", line), require<std::size_t>(j, "diagram", line),
                   require<std::size_t>(j, "offset", line), require<std::string>(j, "label", line)});
  });
  return out;
}

}  // namespace rfclink::dataset
