#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ontoir::detail {

// Decodes one code point; returns 0xFFFFFFFF for malformed input and always
// advances by at least one byte.
inline std::uint32_t next_code_point(std::string_view text, std::size_t& pos)
{
    auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
    unsigned char lead = byte(pos++);
    if (lead < 0x80) {
        return lead;
    }
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if ((lead & 0xE0) == 0xC0) {
        extra = 1;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        extra = 2;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        extra = 3;
        cp = lead & 0x07;
    } else {
        return 0xFFFFFFFFu;
    }
    if (pos + extra > text.size()) {
        return 0xFFFFFFFFu;
    }
    for (std::size_t i = 0; i < extra; ++i) {
        if ((byte(pos) & 0xC0) != 0x80) {
            return 0xFFFFFFFFu;
        }
        cp = (cp << 6) | (byte(pos++) & 0x3F);
    }
    return cp;
}

inline void append_code_point(std::string& out, std::uint32_t cp)
{
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

} // namespace ontoir::detail
