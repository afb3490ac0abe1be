#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace idiolect {

enum class TokenKind { LetterUnigram, WordUnigram, LetterNgram, WordNgram };

struct TokenizationMode {
  TokenKind kind = TokenKind::LetterUnigram;
  std::size_t n = 1;
  bool case_folding = true;
  /// Letter modes only: keep alphabetic scalars only. When false every non-whitespace
  /// scalar counts; whitespace is never a token.
  bool drop_non_letters = true;

  static constexpr std::size_t kMaxN = 5;

  void validate() const;

  bool is_letter_mode() const noexcept {
    return kind == TokenKind::LetterUnigram || kind == TokenKind::LetterNgram;
  }

  /// Stable name used for CLI flags and output file names, e.g. "letter_unigram",
  /// "word_ngram3", "letter_unigram+nofold+keepall".
  std::string name() const;

  bool operator==(const TokenizationMode&) const = default;
};

/// Inverse of TokenizationMode::name(); throws Error(Config) on unknown names.
TokenizationMode parse_tokenization_mode(std::string_view name);

/// Token counts for one chunk. Map keys are UTF-8, so iteration is in code-point order.
struct TokenDistribution {
  std::string chunk_id;
  TokenizationMode mode;
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;
};

/// Throws EmptyDistribution when the text yields no tokens.
TokenDistribution tokenize(std::string_view text, const TokenizationMode& mode,
                           std::string chunk_id = {});

/// Columns chunk_id, token, count sorted by (chunk_id, token).
std::string token_dump_csv(std::vector<TokenDistribution> dists);

}  // namespace idiolect
