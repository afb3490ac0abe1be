#pragma once

#include <string>
#include <string_view>

// Thin UTF-8 helpers over ICU. All text inside the library is NFC-normalized UTF-8;
// "characters" always means Unicode scalar values.
namespace idiolect::unicode {

/// Strict UTF-8 decode. Throws Error(InvalidEncoding) naming the byte offset of the
/// first ill-formed sequence.
std::u32string decode(std::string_view utf8);

std::string encode(std::u32string_view text);
void append(std::string& out, char32_t c);

bool is_valid(std::string_view utf8) noexcept;

/// Number of scalar values; the input must be valid UTF-8.
std::size_t length(std::string_view utf8);

std::string latin1_to_utf8(std::string_view bytes);

std::string nfc(std::string_view utf8);

bool is_alpha(char32_t c) noexcept;
bool is_alnum(char32_t c) noexcept;
bool is_space(char32_t c) noexcept;
bool is_upper(char32_t c) noexcept;
bool is_lower(char32_t c) noexcept;

/// Simple (length-preserving) case folding of one scalar.
char32_t fold(char32_t c) noexcept;
char32_t to_upper(char32_t c) noexcept;

std::string fold(std::string_view utf8);

/// Collapse every run of whitespace to one ASCII space and trim both ends.
std::string collapse_whitespace(std::string_view utf8);

}  // namespace idiolect::unicode
