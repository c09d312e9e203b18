#include "finset/tokenize.hpp"

#include <cctype>

namespace finset {

namespace {

inline bool is_space_byte(unsigned char c) { return std::isspace(c) != 0; }

inline bool is_word_byte(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_space_byte(c)) {
            ++i;
            continue;
        }
        if (is_word_byte(c)) {
            std::size_t start = i;
            while (i < n && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
            tokens.emplace_back(text.substr(start, i - start));
        } else {
            // punctuation: one token per character
            tokens.emplace_back(text.substr(i, 1));
            ++i;
        }
    }
    return tokens;
}

std::size_t count_tokens(std::string_view text) {
    std::size_t count = 0;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_space_byte(c)) {
            ++i;
        } else if (is_word_byte(c)) {
            while (i < n && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
            ++count;
        } else {
            ++i;
            ++count;
        }
    }
    return count;
}

std::string to_lower(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    }
    return out;
}

bool is_word_token(std::string_view token) {
    return !token.empty() && is_word_byte(static_cast<unsigned char>(token.front()));
}

}  // namespace finset
