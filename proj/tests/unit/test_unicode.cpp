#include "doctest.h"
#include "idiolect/csv.hpp"
#include "idiolect/error.hpp"
#include "idiolect/unicode.hpp"

using namespace idiolect;

TEST_CASE("strict utf-8 decoding") {
  CHECK(unicode::decode("aå€𝄞") == U"aå€𝄞");
  CHECK(unicode::length("åøß") == 3);
  CHECK(unicode::is_valid("plain"));

  for (std::string bad : {"\xff", "a\xc3", "\xc0\xaf", "\xed\xa0\x80", "\xf4\x90\x80\x80"}) {
    CAPTURE(bad);
    CHECK_FALSE(unicode::is_valid(bad));
    try {
      unicode::decode(bad);
      FAIL("expected InvalidEncoding");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidEncoding);
    }
  }
}

TEST_CASE("encode is the inverse of decode") {
  const std::string s = "Fru Alving: «Å, nei!» ß";
  CHECK(unicode::encode(unicode::decode(s)) == s);
}

TEST_CASE("latin-1 transcoding") {
  CHECK(unicode::latin1_to_utf8("S\xf8ren \xe5") == "Søren å");
}

TEST_CASE("nfc composes decomposed letters") {
  CHECK(unicode::nfc("a\xcc\x8a") == "å");
  CHECK(unicode::length(unicode::nfc("a\xcc\x8a")) == 1);
}

TEST_CASE("character classes and folding") {
  CHECK(unicode::is_alpha(U'ø'));
  CHECK_FALSE(unicode::is_alpha(U'7'));
  CHECK(unicode::is_alnum(U'7'));
  CHECK(unicode::is_space(U' '));
  CHECK(unicode::is_upper(U'Å'));
  CHECK(unicode::is_lower(U'ß'));
  CHECK(unicode::fold("ÅSE Ø") == "åse ø");
  // simple folding keeps the length
  CHECK(unicode::fold("STRAßE") == "straße");
}

TEST_CASE("whitespace collapse") {
  CHECK(unicode::collapse_whitespace("  a \t b\n\n c  ") == "a b c");
  CHECK(unicode::collapse_whitespace(" \n ").empty());
}

TEST_CASE("csv quoting round trip") {
  const std::vector<std::string> fields{"plain", "a,b", "say \"hi\"", "two\nlines", ""};
  const auto text = csv::row(fields);
  CHECK(text == "plain,\"a,b\",\"say \"\"hi\"\"\",\"two\nlines\",\n");
  const auto rows = csv::parse(text);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == fields);
}

TEST_CASE("error kinds map to exit codes") {
  CHECK(exit_code(ErrorKind::Config) == 2);
  CHECK(exit_code(ErrorKind::PreconditionFailed) == 2);
  CHECK(exit_code(ErrorKind::NoTurnsFound) == 3);
  CHECK(exit_code(ErrorKind::InsufficientText) == 3);
  CHECK(exit_code(ErrorKind::NoEligibleCharacters) == 3);
  CHECK(exit_code(ErrorKind::DegenerateCategory) == 4);
  CHECK(exit_code(ErrorKind::EmptyDistribution) == 4);
  CHECK(exit_code(ErrorKind::ModeMismatch) == 4);
}
