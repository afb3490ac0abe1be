#include "idiolect/tokenization.hpp"

#include <algorithm>
#include <charconv>

#include "idiolect/csv.hpp"
#include "idiolect/error.hpp"
#include "idiolect/unicode.hpp"

namespace idiolect {

namespace {

bool is_apostrophe(char32_t c) { return c == U'\'' || c == U'’'; }

std::vector<std::string> letters(std::u32string_view text, const TokenizationMode& mode) {
  std::vector<std::string> out;
  for (char32_t c : text) {
    if (unicode::is_space(c)) continue;
    if (mode.drop_non_letters && !unicode::is_alpha(c)) continue;
    std::string s;
    unicode::append(s, mode.case_folding ? unicode::fold(c) : c);
    out.push_back(std::move(s));
  }
  return out;
}

// Maximal alphanumeric runs; an apostrophe flanked by alphanumerics stays inside the word.
std::vector<std::string> words(std::u32string_view text, const TokenizationMode& mode) {
  std::vector<std::string> out;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char32_t c = text[i];
    if (unicode::is_alnum(c)) {
      unicode::append(current, mode.case_folding ? unicode::fold(c) : c);
    } else if (is_apostrophe(c) && !current.empty() && i + 1 < text.size() &&
               unicode::is_alnum(text[i + 1])) {
      unicode::append(current, c);
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

}  // namespace

void TokenizationMode::validate() const {
  if (n < 1 || n > kMaxN) {
    throw Error(ErrorKind::Config, "n-gram order must be in 1.." + std::to_string(kMaxN));
  }
  if ((kind == TokenKind::LetterUnigram || kind == TokenKind::WordUnigram) && n != 1) {
    throw Error(ErrorKind::Config, "unigram modes require n = 1");
  }
}

std::string TokenizationMode::name() const {
  std::string out;
  switch (kind) {
    case TokenKind::LetterUnigram: out = "letter_unigram"; break;
    case TokenKind::WordUnigram: out = "word_unigram"; break;
    case TokenKind::LetterNgram: out = "letter_ngram" + std::to_string(n); break;
    case TokenKind::WordNgram: out = "word_ngram" + std::to_string(n); break;
  }
  if (!case_folding) out += "+nofold";
  if (is_letter_mode() && !drop_non_letters) out += "+keepall";
  return out;
}

TokenizationMode parse_tokenization_mode(std::string_view name) {
  TokenizationMode mode;
  std::string_view base = name.substr(0, name.find('+'));
  std::string_view flags = base.size() < name.size() ? name.substr(base.size()) : std::string_view{};
  auto parse_n = [&](std::string_view prefix) {
    std::size_t n = 0;
    const auto digits = base.substr(prefix.size());
    // accept both "letter_ngram3" and "letter_ngram:3"
    const auto d = digits.starts_with(':') ? digits.substr(1) : digits;
    const auto [ptr, ec] = std::from_chars(d.data(), d.data() + d.size(), n);
    if (ec != std::errc() || ptr != d.data() + d.size()) {
      throw Error(ErrorKind::Config, "bad n-gram order in mode '" + std::string(name) + "'");
    }
    return n;
  };
  if (base == "letter_unigram") {
    mode.kind = TokenKind::LetterUnigram;
  } else if (base == "word_unigram") {
    mode.kind = TokenKind::WordUnigram;
  } else if (base.starts_with("letter_ngram")) {
    mode.kind = TokenKind::LetterNgram;
    mode.n = parse_n("letter_ngram");
  } else if (base.starts_with("word_ngram")) {
    mode.kind = TokenKind::WordNgram;
    mode.n = parse_n("word_ngram");
  } else {
    throw Error(ErrorKind::Config, "unknown tokenization mode '" + std::string(name) + "'");
  }
  while (!flags.empty()) {
    flags.remove_prefix(1);
    const auto flag = flags.substr(0, flags.find('+'));
    if (flag == "nofold") {
      mode.case_folding = false;
    } else if (flag == "keepall") {
      mode.drop_non_letters = false;
    } else {
      throw Error(ErrorKind::Config, "unknown mode flag '" + std::string(flag) + "'");
    }
    flags.remove_prefix(flag.size());
  }
  mode.validate();
  return mode;
}

TokenDistribution tokenize(std::string_view text, const TokenizationMode& mode,
                           std::string chunk_id) {
  mode.validate();
  const std::u32string scalars = unicode::decode(text);
  const auto units = mode.is_letter_mode() ? letters(scalars, mode) : words(scalars, mode);
  const std::string joiner = mode.is_letter_mode() ? "" : " ";

  TokenDistribution dist{std::move(chunk_id), mode, {}, 0};
  const std::size_t n = mode.n;
  if (units.size() >= n) {
    for (std::size_t i = 0; i + n <= units.size(); ++i) {
      std::string token = units[i];
      for (std::size_t k = 1; k < n; ++k) token += joiner + units[i + k];
      ++dist.counts[token];
      ++dist.total;
    }
  }
  if (dist.total == 0) {
    throw Error(ErrorKind::EmptyDistribution,
                "no " + mode.name() + " tokens in chunk '" + dist.chunk_id + "'");
  }
  return dist;
}

std::string token_dump_csv(std::vector<TokenDistribution> dists) {
  std::sort(dists.begin(), dists.end(),
            [](const auto& a, const auto& b) { return a.chunk_id < b.chunk_id; });
  std::string out = csv::row({"chunk_id", "token", "count"});
  for (const auto& d : dists) {
    for (const auto& [token, count] : d.counts) {
      out += csv::row({d.chunk_id, token, std::to_string(count)});
    }
  }
  return out;
}

}  // namespace idiolect
