#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "utf8.hpp"

namespace ontoir {

namespace detail {

// Base letters for U+0100..U+017F (Latin Extended-A), one entry per code
// point; '|' separates entries so multi-letter folds (ij, oe) fit.
inline constexpr std::string_view latin_extended_a =
    "a|a|a|a|a|a|c|c|c|c|c|c|c|c|d|d|d|d|e|e|e|e|e|e|e|e|e|e|g|g|g|g|g|g|g|g|h|h|h|h|"
    "i|i|i|i|i|i|i|i|i|i|ij|ij|j|j|k|k|k|l|l|l|l|l|l|l|l|l|l|n|n|n|n|n|n|n|n|n|o|o|o|o|o|o|"
    "oe|oe|r|r|r|r|r|r|s|s|s|s|s|s|s|s|t|t|t|t|t|t|u|u|u|u|u|u|u|u|u|u|u|u|w|w|y|y|y|z|z|z|z|z|z|s";

// U+00C0..U+00FF. Empty entries (x and division sign) are separators.
inline constexpr std::string_view latin_1_letters =
    "a|a|a|a|a|a|ae|c|e|e|e|e|i|i|i|i|d|n|o|o|o|o|o||o|u|u|u|u|y|th|ss|"
    "a|a|a|a|a|a|ae|c|e|e|e|e|i|i|i|i|d|n|o|o|o|o|o||o|u|u|u|u|y|th|y";

inline std::string_view table_entry(std::string_view table, std::size_t index)
{
    std::size_t start = 0;
    for (std::size_t i = 0; i < index; ++i) {
        start = table.find('|', start) + 1;
    }
    auto end = table.find('|', start);
    return table.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
}

struct folded {
    bool word = false;  // false: the code point separates tokens
    std::string_view ascii;  // replacement when non-empty
    std::uint32_t keep = 0;  // otherwise emit this code point (0 = nothing)
};

inline folded fold(std::uint32_t cp)
{
    static const auto tables = [] {
        std::vector<std::string_view> latin1(64), exta(128);
        for (std::size_t i = 0; i < 64; ++i) {
            latin1[i] = table_entry(latin_1_letters, i);
        }
        for (std::size_t i = 0; i < 128; ++i) {
            exta[i] = table_entry(latin_extended_a, i);
        }
        return std::pair{std::move(latin1), std::move(exta)};
    }();
    static constexpr std::string_view ascii_letters = "abcdefghijklmnopqrstuvwxyz";
    static constexpr std::string_view ascii_digits = "0123456789";

    if (cp < 0x80) {
        if (cp >= 'a' && cp <= 'z') {
            return {true, ascii_letters.substr(cp - 'a', 1), 0};
        }
        if (cp >= 'A' && cp <= 'Z') {
            return {true, ascii_letters.substr(cp - 'A', 1), 0};
        }
        if (cp >= '0' && cp <= '9') {
            return {true, ascii_digits.substr(cp - '0', 1), 0};
        }
        return {};
    }
    if (cp < 0xC0) {
        switch (cp) {
        case 0xAA: return {true, "a", 0};
        case 0xBA: return {true, "o", 0};
        case 0xB2: return {true, "2", 0};
        case 0xB3: return {true, "3", 0};
        case 0xB9: return {true, "1", 0};
        default: return {};
        }
    }
    if (cp < 0x100) {
        auto entry = tables.first[cp - 0xC0];
        return entry.empty() ? folded{} : folded{true, entry, 0};
    }
    if (cp < 0x180) {
        return {true, tables.second[cp - 0x100], 0};
    }
    if (cp >= 0x300 && cp <= 0x36F) {
        return {true, {}, 0};  // combining marks vanish inside a word
    }
    if (cp >= 0x391 && cp <= 0x3A9) {
        return {true, {}, cp + 0x20};
    }
    if (cp >= 0x400 && cp <= 0x40F) {
        return {true, {}, cp + 0x50};
    }
    if (cp >= 0x410 && cp <= 0x42F) {
        return {true, {}, cp + 0x20};
    }
    if ((cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x2190 && cp <= 0x2BFF) || (cp >= 0x3000 && cp <= 0x303F) ||
        (cp >= 0xFE30 && cp <= 0xFE4F) || cp == 0xFEFF) {
        return {};
    }
    if (cp >= 0xFF10 && cp <= 0xFF19) {
        return {true, ascii_digits.substr(cp - 0xFF10, 1), 0};
    }
    if (cp >= 0xFF21 && cp <= 0xFF3A) {
        return {true, ascii_letters.substr(cp - 0xFF21, 1), 0};
    }
    if (cp >= 0xFF41 && cp <= 0xFF5A) {
        return {true, ascii_letters.substr(cp - 0xFF41, 1), 0};
    }
    if (cp >= 0xFF00 && cp <= 0xFF65) {
        return {};
    }
    return {true, {}, cp};
}

} // namespace detail

/// The word function W: lowercase, fold Latin accents to ASCII, split on
/// runs of non-alphanumerics. Order and duplicates are preserved.
///
///     tokenize("Hôtel Istria Montparnasse") == {"hotel", "istria", "montparnasse"}
///     tokenize("LA_BANQUE_1")               == {"la", "banque", "1"}
inline std::vector<std::string> tokenize(std::string_view text)
{
    std::vector<std::string> out;
    std::string current;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto cp = detail::next_code_point(text, pos);
        auto f = cp == 0xFFFFFFFFu ? detail::folded{} : detail::fold(cp);
        if (!f.word) {
            if (!current.empty()) {
                out.push_back(std::move(current));
                current.clear();
            }
            continue;
        }
        if (!f.ascii.empty()) {
            current += f.ascii;
        } else if (f.keep != 0) {
            detail::append_code_point(current, f.keep);
        }
    }
    if (!current.empty()) {
        out.push_back(std::move(current));
    }
    return out;
}

} // namespace ontoir
