#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace topicret::utf8 {

inline bool is_continuation(unsigned char byte) {
    return (byte & 0xC0u) == 0x80u;
}

/// Number of unicode scalar values in a UTF-8 string.
inline std::size_t length(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        if (!is_continuation(c)) {
            ++n;
        }
    }
    return n;
}

/// Decodes the scalar value starting at `pos` and advances `pos` past it.
/// Ill-formed sequences decode to U+FFFD and consume one byte.
char32_t decode_next(std::string_view s, std::size_t& pos);

void append(std::string& out, char32_t cp);

} // namespace topicret::utf8
