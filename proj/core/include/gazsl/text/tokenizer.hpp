#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gazsl::text {

/// Splits UTF-8 text into maximal runs of letters, lowercased.
/// Digits, punctuation and whitespace separate runs and are dropped.
/// Invalid UTF-8 bytes are treated as separators.
std::vector<std::string> tokenize(std::string_view raw_text);

}  // namespace gazsl::text
