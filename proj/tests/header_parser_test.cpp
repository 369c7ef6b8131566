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


#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "rfclink/error.hpp"
#include "rfclink/header_parser.hpp"
#include "rfclink/rfc_corpus.hpp"
#include "support.hpp"

namespace corpus = rfclink::corpus;
namespace header = rfclink::header;
using header::HeaderField;
using header::RowKind;

namespace {

struct Expect {
  std::string name;
  std::size_t offset, width;
};

void expect_fields(const std::vector<HeaderField>& got, const std::vector<Expect>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(got[i].name, want[i].name) << "field " << i;
    EXPECT_EQ(got[i].bit_offset, want[i].offset) << want[i].name;
    EXPECT_EQ(got[i].bit_width, want[i].width) << want[i].name;
  }
}

corpus::RfcDocument doc_of(int n, std::vector<std::string> lines) {
  corpus::RfcDocument d;
  d.rfc_number = n;
  d.lines = std::move(lines);
  return d;
}

// A row whose cells have widths `w`, each cell 2w - 1 characters wide.
std::string row_of(const std::vector<std::size_t>& widths, const std::vector<std::string>& names) {
  std::string row = "|";
  for (std::size_t i = 0; i < widths.size(); ++i) {
    std::string cell(2 * widths[i] - 1, ' ');
    const auto& n = names[i];
    if (n.size() <= cell.size()) cell.replace((cell.size() - n.size()) / 2, n.size(), n);
    row += cell + "|";
  }
  return row;
}

const std::string kRuler = "+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+-+";

}  // namespace

TEST(ParseRow, IPv4FirstRow) {
  const auto f = header::parse_row("|Version|  IHL  |Type of Service|          Total Length         |", 0);
  expect_fields(f, {{"Version", 0, 4}, {"IHL", 4, 4}, {"Type of Service", 8, 8}, {"Total Length", 16, 16}});
}

TEST(ParseRow, FullWidthRowAtBase) {
  const auto f = header::parse_row("|                       Source Address                          |", 96);
  expect_fields(f, {{"Source Address", 96, 32}});
}

TEST(ParseRow, Degenerate) {
  EXPECT_THROW(header::parse_row("||", 0), rfclink::MalformedRow);
  EXPECT_THROW(header::parse_row("|ab|", 0), rfclink::MalformedRow);
  EXPECT_THROW(header::parse_row("no bars here", 0), rfclink::MalformedRow);
  EXPECT_THROW(header::parse_row("|abc", 0), rfclink::MalformedRow);
}

TEST(ParseRow, BlankCellIsUnnamed) {
  const auto f = header::parse_row("|   |       |", 8);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_TRUE(f[0].unnamed);
  EXPECT_EQ(f[0].name, "unnamed@8");
  EXPECT_EQ(f[1].name, "unnamed@10");
  EXPECT_EQ(f[1].bit_width, 4u);
}

TEST(ParseRow, IndentationIgnored) {
  const auto f = header::parse_row("      |Version|  IHL  |   ", 0);
  expect_fields(f, {{"Version", 0, 4}, {"IHL", 4, 4}});
}

// Rows built from random partitions of 32 bits come back exactly.
TEST(ParseRowProperty, RandomPartitionsRecovered) {
  std::mt19937_64 rng(20260418);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::size_t> widths;
    std::size_t left = 32;
    while (left > 0) {
      std::uniform_int_distribution<std::size_t> pick(1, left);
      widths.push_back(pick(rng));
      left -= widths.back();
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < widths.size(); ++i) names.push_back(std::string(1, static_cast<char>('A' + i % 26)));
    const auto base = 32 * (trial % 7);
    const auto f = header::parse_row(row_of(widths, names), base);
    ASSERT_EQ(f.size(), widths.size());
    std::size_t off = base, sum = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      EXPECT_EQ(f[i].bit_width, widths[i]);
      EXPECT_EQ(f[i].bit_offset, off);
      EXPECT_EQ(f[i].name, names[i]);
      off += widths[i];
      sum += f[i].bit_width;
    }
    EXPECT_EQ(sum, 32u);
  }
}

TEST(RenderRow, RoundTripKeepsCellBoundaries) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> widths;
    std::size_t left = 32;
    while (left > 0) {
      std::uniform_int_distribution<std::size_t> pick(1, std::min<std::size_t>(left, 12));
      widths.push_back(pick(rng));
      left -= widths.back();
    }
    std::vector<std::string> names(widths.size(), "x");
    const auto original = row_of(widths, names);
    const auto parsed = header::parse_row(original, 0);
    const auto rendered = header::render_row(parsed);
    ASSERT_EQ(rendered.size(), original.size());
    for (std::size_t i = 0; i < original.size(); ++i)
      EXPECT_EQ(rendered[i] == '|', original[i] == '|') << "column " << i;
    EXPECT_EQ(header::parse_row(rendered, 0), parsed);
  }
}

TEST(ClassifyRow, Kinds) {
  EXPECT_EQ(header::classify_row("   " + kRuler), RowKind::Ruler);
  EXPECT_EQ(header::classify_row("+=+=+=+"), RowKind::Ruler);
  EXPECT_EQ(header::classify_row("|  a  |"), RowKind::Content);
  EXPECT_EQ(header::classify_row("+           Source            +"), RowKind::Separator);
  EXPECT_EQ(header::classify_row("~    Options    ~"), RowKind::Separator);
  EXPECT_EQ(header::classify_row(" 0                   1                   2"), RowKind::Caption);
  EXPECT_EQ(header::classify_row("The Version field"), RowKind::Other);
  EXPECT_EQ(header::classify_row(""), RowKind::Other);
}

TEST(DetectDiagrams, ProseOnly) {
  EXPECT_TRUE(header::detect_diagrams(doc_of(1, {"Some text.", "", "More | text |"})).empty());
}

TEST(DetectDiagrams, SingleRulerIsIgnored) {
  EXPECT_TRUE(header::detect_diagrams(doc_of(1, {"prose", kRuler, "prose"})).empty());
}

TEST(DetectDiagrams, CaptionIncludedButNotParsed) {
  const auto d = header::extract_diagrams(doc_of(
      9, {"text", "",
          "    0                   1                   2                   3",
          "    0 1 2 3 4 5 6 7 8 9 0 1 2 3 4 5 6 7 8 9 0 1 2 3 4 5 6 7 8 9 0 1",
          "   " + kRuler,
          "   |                            Whole                              |",
          "   " + kRuler, "", "Whole: the only field."}));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].start_line, 2u);
  EXPECT_EQ(d[0].end_line, 6u);
  expect_fields(d[0].fields, {{"Whole", 0, 32}});
}

TEST(ParseDiagram, MalformedRowCarriesLineNumber) {
  const auto doc = doc_of(5, {"x", kRuler, "|  ab  |  cd |", kRuler});
  try {
    header::extract_diagrams(doc);
    FAIL() << "expected MalformedRow";
  } catch (const rfclink::MalformedRow& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(ParseDiagram, RowsAndCellsMerge) {
  // A 64-bit address over two rows, the second left blank.
  const auto d = header::extract_diagrams(doc_of(
      3, {kRuler, "|         Type          |               Length                  |", kRuler,
          "|                          Address                              |",
          "+                                                               +",
          "|                                                               |", kRuler}));
  ASSERT_EQ(d.size(), 1u);
  expect_fields(d[0].fields, {{"Type", 0, 12}, {"Length", 12, 20}, {"Address", 32, 64}});
}

class Fixture : public ::testing::Test {
 protected:
  static std::vector<header::HeaderDiagram> diagrams(int rfc) {
    return header::extract_diagrams(corpus::load_cached(rfc, rfclink::testing::rfc_cache()));
  }
};

TEST_F(Fixture, Rfc791FixedHeader) {
  const auto d = diagrams(791);
  ASSERT_FALSE(d.empty());
  const auto raw = header::detect_diagrams(corpus::load_cached(791, rfclink::testing::rfc_cache()));
  const auto first_content = std::find_if(raw[0].rows.begin(), raw[0].rows.end(), [](const std::string& r) {
    return header::classify_row(r) == RowKind::Content;
  });
  ASSERT_NE(first_content, raw[0].rows.end());
  EXPECT_NE(first_content->find("Version"), std::string::npos);

  std::vector<HeaderField> fixed;
  for (const auto& f : d[0].fields)
    if (!d[0].variable_length || f.bit_offset < d[0].fixed_bits) fixed.push_back(f);
  expect_fields(fixed, {{"Version", 0, 4},
                        {"IHL", 4, 4},
                        {"Type of Service", 8, 8},
                        {"Total Length", 16, 16},
                        {"Identification", 32, 16},
                        {"Flags", 48, 3},
                        {"Fragment Offset", 51, 13},
                        {"Time to Live", 64, 8},
                        {"Protocol", 72, 8},
                        {"Header Checksum", 80, 16},
                        {"Source Address", 96, 32},
                        {"Destination Address", 128, 32}});
  EXPECT_TRUE(d[0].variable_length);
  EXPECT_EQ(d[0].fixed_bits, 160u);
}

TEST_F(Fixture, Rfc3451KeepsNamesVerbatimAndFlagBits) {
  const auto d = diagrams(3451);
  ASSERT_FALSE(d.empty());
  const auto& f = d[0].fields;
  auto find = [&](const std::string& n) {
    return std::find_if(f.begin(), f.end(), [&](const HeaderField& x) { return x.name == n; });
  };
  ASSERT_NE(find("HDR_LEN"), f.end());
  EXPECT_EQ(find("HDR_LEN")->bit_offset, 16u);
  EXPECT_EQ(find("HDR_LEN")->bit_width, 8u);
  for (const char* flag : {"S", "H", "T", "R", "A", "B"}) {
    ASSERT_NE(find(flag), f.end()) << flag;
    EXPECT_EQ(find(flag)->bit_width, 1u) << flag;
  }
}

TEST_F(Fixture, Rfc793VerticalFlagNames) {
  const auto d = diagrams(793);
  ASSERT_FALSE(d.empty());
  std::vector<std::string> flags;
  for (const auto& f : d[0].fields)
    if (f.bit_offset >= 106 && f.bit_offset < 112) flags.push_back(f.name);
  EXPECT_EQ(flags, (std::vector<std::string>{"URG", "ACK", "PSH", "RST", "SYN", "FIN"}));
}

TEST_F(Fixture, Rfc8200AddressesSpanFourRows) {
  const auto d = diagrams(8200);
  ASSERT_FALSE(d.empty());
  expect_fields({d[0].fields.begin() + 6, d[0].fields.end()},
                {{"Source Address", 64, 128}, {"Destination Address", 192, 128}});
}

// Over every bundled fixture: fields are gapless and ordered, and every full
// row of the fixed part adds up to 32 bits.
TEST_F(Fixture, GaplessRowsEverywhere) {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(rfclink::testing::rfc_cache())) {
    const auto stem = entry.path().stem().string();
    const int n = std::stoi(stem.substr(3));
    for (const auto& d : diagrams(n)) {
      ++seen;
      ASSERT_FALSE(d.fields.empty()) << "RFC " << n;
      std::size_t off = 0;
      for (const auto& f : d.fields) {
        EXPECT_GE(f.bit_width, 1u);
        EXPECT_EQ(f.bit_offset, off) << "RFC " << n << " diagram " << d.index << " " << f.name;
        off = f.bit_offset + f.bit_width;
        EXPECT_EQ(f.rfc_number, n);
        EXPECT_EQ(f.diagram_index, d.index);
      }
      EXPECT_EQ(off, d.total_bits);
      const auto fixed = d.variable_length ? d.fixed_bits : d.total_bits;
      EXPECT_EQ(fixed % 32, 0u) << "RFC " << n << " diagram " << d.index;
    }
  }
  EXPECT_GE(seen, 16u);
}
