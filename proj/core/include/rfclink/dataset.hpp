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

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rfclink/header_parser.hpp"
#include "rfclink/rfc_corpus.hpp"

namespace rfclink::dataset {

// Protocol knowledge base entities. `active` is the ordered label space of the
// classifier; its order defines class indices.
struct PkbSchema {
  std::vector<std::string> entities;
  std::vector<std::string> active;

  // The twelve bundled entities, nine of them active.
  static PkbSchema standard();

  // One record per line: {"name": ..., "active": true|false}.
  static PkbSchema load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  // Throws ConfigError on duplicate names, an active name that is not an
  // entity, or fewer than two active entities.
  void validate() const;

  std::size_t num_classes() const { return active.size(); }
  // Throws UnknownLabel.
  std::size_t class_index(const std::string& label) const;
  const std::string& class_name(std::size_t index) const;
};

struct FieldKey {
  int rfc = 0;
  std::size_t diagram = 0;
  std::size_t offset = 0;

  auto operator<=>(const FieldKey&) const = default;
};

std::string to_string(const FieldKey& key);

// One parsed field with its linked description, as written by `parse`.
struct CatalogEntry {
  int rfc = 0;
  std::size_t diagram = 0;
  std::size_t offset = 0;
  std::size_t width = 0;
  std::string name;
  bool variable = false;  // at or beyond the diagram's variable-length part
  std::string description;

  FieldKey key() const { return {rfc, diagram, offset}; }
  bool operator==(const CatalogEntry&) const = default;
};

struct Annotation {
  int rfc = 0;
  std::size_t diagram = 0;
  std::size_t offset = 0;
  std::string label;

  FieldKey key() const { return {rfc, diagram, offset}; }
  bool operator==(const Annotation&) const = default;
};

// {header field, description, entity} with its provenance.
struct Sample {
  std::string header_field;
  std::string description;
  std::string label;
  int rfc_number = 0;
  std::size_t diagram_index = 0;
  std::size_t field_offset = 0;

  bool operator==(const Sample&) const = default;
};

struct DatasetSplit {
  std::vector<std::vector<std::size_t>> folds;  // sorted sample indices
};

// Scans up to `window` paragraphs after the diagram. The first paragraph
// whose leading tokens match the field name's tokens (equal, or a prefix of
// at least two characters) wins; paragraphs right after it that are indented
// deeper are taken as its body. Otherwise the nearest paragraph mentioning the
// name as a whole word, case-insensitively. Otherwise "".
std::string link_description(const corpus::RfcDocument& doc, const header::HeaderDiagram& diagram,
                             const header::HeaderField& field, std::size_t window = 80);

// Every field of every diagram with its description.
std::vector<CatalogEntry> build_catalog(const corpus::RfcDocument& doc,
                                        std::span<const header::HeaderDiagram> diagrams,
                                        std::size_t window = 80);

// One sample per annotation whose field has a description, in annotation
// order. Throws DanglingAnnotation and UnknownLabel naming the key.
std::vector<Sample> build_samples(std::span<const CatalogEntry> catalog,
                                  std::span<const Annotation> annotations, const PkbSchema& schema);

// Class index of every sample.
std::vector<std::size_t> class_indices(std::span<const Sample> samples, const PkbSchema& schema);

// Samples per active entity, in schema order.
std::vector<std::size_t> category_counts(std::span<const Sample> samples, const PkbSchema& schema);

// Stratified k-fold partition. Within each label (in increasing label order)
// indices are shuffled by one seeded stream and dealt round-robin, the deal
// continuing where the previous label stopped.
DatasetSplit make_folds(std::size_t n, std::size_t k, std::uint64_t seed,
                        std::span<const std::size_t> labels);

// Line-delimited records. Loaders throw ParseError with the line number.
void save_samples(const std::filesystem::path& path, std::span<const Sample> samples);
std::vector<Sample> load_samples(const std::filesystem::path& path);

void save_catalog(const std::filesystem::path& path, std::span<const CatalogEntry> catalog);
std::vector<CatalogEntry> load_catalog(const std::filesystem::path& path);

void save_annotations(const std::filesystem::path& path, std::span<const Annotation> annotations);
std::vector<Annotation> load_annotations(const std::filesystem::path& path);

}  // namespace rfclink::dataset
