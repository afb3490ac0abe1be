#include <functional>
#include <random>
#include <set>

#include "doctest.h"
#include "idiolect/csv.hpp"
#include "idiolect/error.hpp"
#include "idiolect/segmentation.hpp"
#include "idiolect/unicode.hpp"

using namespace idiolect;

namespace {

std::string repeat(std::string_view unit, std::size_t times) {
  std::string s;
  for (std::size_t i = 0; i < times; ++i) s += unit;
  return s;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::Config;
}

}  // namespace

TEST_CASE("select_eligible") {
  const std::map<std::string, std::string> texts{{"a", repeat("x", 12000)}, {"b", repeat("x", 9999)}};
  const auto e = select_eligible(texts, 10000);
  CHECK(e.eligible.size() == 1);
  CHECK(e.eligible.count("a") == 1);
  REQUIRE(e.log.size() == 2);
  CHECK(e.log[0].included);
  CHECK_FALSE(e.log[1].included);
  CHECK(e.log[1].length == 9999);

  CHECK(kind_of([] { select_eligible({}, 10000); }) == ErrorKind::NoEligibleCharacters);
  CHECK(kind_of([&] { select_eligible(texts, 0); }) == ErrorKind::Config);

  // multibyte letters count once
  const auto nordic = select_eligible({{"c", repeat("å", 10000)}}, 10000);
  CHECK(nordic.eligible.size() == 1);
}

TEST_CASE("chunk_text") {
  SUBCASE("exact budget") {
    const auto chunks = chunk_text(repeat("abcde", 2000), 5, 2000);
    REQUIRE(chunks.size() == 5);
    for (const auto& c : chunks) CHECK(c.size() == 2000);
  }
  SUBCASE("tail discarded") {
    const auto text = repeat("0123456789", 1070);
    const auto chunks = chunk_text(text, 5, 2000);
    REQUIRE(chunks.size() == 5);
    std::string joined;
    for (const auto& c : chunks) joined += c;
    CHECK(joined == text.substr(0, 10000));
  }
  SUBCASE("too short") {
    CHECK(kind_of([] { chunk_text(repeat("x", 9999), 5, 2000); }) == ErrorKind::InsufficientText);
  }
  SUBCASE("bad parameters") {
    CHECK(kind_of([] { chunk_text("abcd", 1, 2); }) == ErrorKind::Config);
    CHECK(kind_of([] { chunk_text("abcd", 2, 0); }) == ErrorKind::Config);
  }
  SUBCASE("slices by scalar value, never inside a multibyte sequence") {
    const auto chunks = chunk_text("åøæßé", 2, 2);
    CHECK(chunks == std::vector<std::string>{"åø", "æß"});
  }
}

TEST_CASE("property: chunk concatenation equals the input prefix") {
  std::mt19937_64 rng(3);
  const std::vector<std::string> alphabet{"a", "b", " ", "å", "ß", "€", "𝄞"};
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t count = 2 + rng() % 5;
    const std::size_t size = 1 + rng() % 20;
    const std::size_t len = count * size + rng() % 15;
    std::string text;
    for (std::size_t i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
    const auto chunks = chunk_text(text, count, size);
    REQUIRE(chunks.size() == count);
    std::string joined;
    for (const auto& c : chunks) {
      CHECK(unicode::length(c) == size);
      joined += c;
    }
    const auto scalars = unicode::decode(text);
    CHECK(joined == unicode::encode(std::u32string_view(scalars).substr(0, count * size)));
  }
}

TEST_CASE("category labels") {
  const ChunkSource s{"ghosts", "archer", "mrs. alving"};
  CHECK(category_label(LabelingMode::Character, s) == "ghosts/mrs. alving");
  CHECK(category_label(LabelingMode::Play, s) == "ghosts");
  CHECK(category_label(LabelingMode::CharacterByTranslator, s) == "archer/ghosts/mrs. alving");
  CHECK(parse_labeling_mode("character_by_translator") == LabelingMode::CharacterByTranslator);
  CHECK(to_string(LabelingMode::Play) == "play");
  CHECK(kind_of([] { parse_labeling_mode("persona"); }) == ErrorKind::Config);
}

TEST_CASE("build_chunks and manifest") {
  const std::vector<CharacterText> chars{
      {{"doll", "original", "nora"}, repeat("n", 25)},
      {{"doll", "original", "helmer"}, repeat("h", 21)},
  };
  const auto chunks = build_chunks(chars, LabelingMode::Character, 2, 10);
  REQUIRE(chunks.size() == 4);
  CHECK(chunks[0].chunk_id == "doll/helmer#000");
  CHECK(chunks[1].chunk_id == "doll/helmer#001");
  CHECK(chunks[2].chunk_id == "doll/nora#000");
  for (const auto& c : chunks) CHECK(c.size_units == 10);
  CHECK(chunks[3].text == repeat("n", 10));

  // play labeling pools characters; ids stay unique
  const auto pooled = build_chunks(chars, LabelingMode::Play, 2, 10);
  std::set<std::string> ids;
  for (const auto& c : pooled) {
    CHECK(c.category == "doll");
    ids.insert(c.chunk_id);
  }
  CHECK(ids.size() == 4);

  const auto manifest = chunk_manifest_csv(chunks);
  const auto rows = csv::parse(manifest);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"chunk_id", "category", "play_id", "translator", "speaker",
                                            "size_units"});
  CHECK(rows[1] == std::vector<std::string>{"doll/helmer#000", "doll/helmer", "doll", "original", "helmer",
                                            "10"});
}
