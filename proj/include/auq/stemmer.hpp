#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace auq::text {

/// Porter (1980) English stemmer. Input is lowercased first; words of length
/// <= 2 and words containing non-letters are returned lowercased but unstemmed.
std::string stem(std::string_view term);

/// Splits on anything that is not an ASCII letter/digit (bytes >= 0x80 are
/// kept as word characters), lowercases and stems every token.
std::vector<std::string> stemmed_tokens(std::string_view text);

}  // namespace auq::text
