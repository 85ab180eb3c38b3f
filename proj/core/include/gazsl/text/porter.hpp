#pragma once

#include <string>
#include <string_view>

namespace gazsl::text {

/// Porter (1980) suffix stripping, steps 1a through 5b, as originally
/// published (no later extensions such as "logi" -> "log").
/// Expects a lowercase ASCII term; other bytes are treated as consonants.
std::string porter_stem(std::string_view term);

}  // namespace gazsl::text
