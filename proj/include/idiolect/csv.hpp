#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace idiolect::csv {

/// RFC 4180 quoting: only fields containing a comma, quote, CR or LF are quoted.
std::string escape(std::string_view field);

std::string row(const std::vector<std::string>& fields);

/// Parses RFC 4180 text into rows of fields.
std::vector<std::vector<std::string>> parse(std::string_view text);

}  // namespace idiolect::csv
