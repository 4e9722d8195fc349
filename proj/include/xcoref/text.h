#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace xcoref {

// ASCII lowercasing; bytes outside A-Z (including UTF-8 sequences) pass
// through unchanged.
std::string to_lower(std::string_view s);

// Splits on runs of ASCII whitespace.
std::vector<std::string_view> split_whitespace(std::string_view s);

std::string_view trim(std::string_view s);

}  // namespace xcoref
