#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace finset {

// Reference tokenization rule used for all token accounting:
// split on whitespace, then split each maximal alphanumeric run from
// adjacent punctuation; every punctuation character is its own token.
// Bytes >= 0x80 (UTF-8 continuation/lead bytes) count as word characters.
std::vector<std::string> tokenize(std::string_view text);

std::size_t count_tokens(std::string_view text);

// ASCII lowercase; bytes >= 0x80 pass through unchanged.
std::string to_lower(std::string_view text);

bool is_word_token(std::string_view token);

}  // namespace finset
