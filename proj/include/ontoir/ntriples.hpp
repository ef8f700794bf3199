#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "utf8.hpp"

namespace ontoir {

namespace detail {

class line_parser {
public:
    line_parser(std::string_view line, std::size_t number) : line_(line), number_(number) {}

    Triple parse()
    {
        Triple t;
        t.subject = subject();
        skip_ws();
        t.predicate = iri("predicate");
        skip_ws();
        if (peek() == '"') {
            t.object = literal();
            t.object_is_literal = true;
        } else {
            t.object = node("object");
        }
        skip_ws();
        if (peek() != '.') {
            fail("expected '.' after object");
        }
        ++pos_;
        skip_ws();
        if (pos_ < line_.size() && line_[pos_] != '#') {
            fail("unexpected text after '.'");
        }
        return t;
    }

private:
    char peek() const { return pos_ < line_.size() ? line_[pos_] : '\0'; }

    void skip_ws()
    {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) {
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& message) const
    {
        throw parse_error(message, number_, std::string(line_));
    }

    std::string subject()
    {
        skip_ws();
        return node("subject");
    }

    std::string node(const char* role)
    {
        if (line_.substr(pos_, 2) == "_:") {
            fail("blank nodes are not supported");
        }
        return iri(role);
    }

    std::string iri(const char* role)
    {
        if (peek() != '<') {
            fail(std::string("expected IRI for ") + role);
        }
        auto end = line_.find('>', pos_ + 1);
        if (end == std::string_view::npos) {
            fail("unterminated IRI");
        }
        auto text = line_.substr(pos_ + 1, end - pos_ - 1);
        for (char c : text) {
            if (static_cast<unsigned char>(c) < 0x20 || c == '<' || c == '"') {
                fail("invalid character in IRI");
            }
        }
        if (!absolute(text)) {
            fail(std::string(role) + " is not an absolute IRI");
        }
        pos_ = end + 1;
        return std::string(text);
    }

    static bool absolute(std::string_view iri)
    {
        auto colon = iri.find(':');
        if (colon == std::string_view::npos || colon == 0) {
            return false;
        }
        auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
        if (!alpha(iri[0])) {
            return false;
        }
        return std::all_of(iri.begin() + 1, iri.begin() + static_cast<std::ptrdiff_t>(colon), [&](char c) {
            return alpha(c) || (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.';
        });
    }

    std::uint32_t hex(std::size_t digits)
    {
        if (pos_ + digits > line_.size()) {
            fail("truncated unicode escape");
        }
        std::uint32_t cp = 0;
        for (std::size_t i = 0; i < digits; ++i) {
            char c = line_[pos_++];
            cp <<= 4;
            if (c >= '0' && c <= '9') {
                cp |= static_cast<std::uint32_t>(c - '0');
            } else if (c >= 'a' && c <= 'f') {
                cp |= static_cast<std::uint32_t>(c - 'a' + 10);
            } else if (c >= 'A' && c <= 'F') {
                cp |= static_cast<std::uint32_t>(c - 'A' + 10);
            } else {
                fail("invalid unicode escape");
            }
        }
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            fail("invalid code point in escape");
        }
        return cp;
    }

    std::string literal()
    {
        ++pos_;  // opening quote
        std::string out;
        while (true) {
            if (pos_ >= line_.size()) {
                fail("unterminated literal");
            }
            char c = line_[pos_++];
            if (c == '"') {
                break;
            }
            if (c != '\\') {
                out += c;
                continue;
            }
            if (pos_ >= line_.size()) {
                fail("unterminated literal");
            }
            char esc = line_[pos_++];
            switch (esc) {
            case 't': out += '\t'; break;
            case 'b': out += '\b'; break;
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            case 'f': out += '\f'; break;
            case '"': out += '"'; break;
            case '\'': out += '\''; break;
            case '\\': out += '\\'; break;
            case 'u': append_code_point(out, hex(4)); break;
            case 'U': append_code_point(out, hex(8)); break;
            default: fail(std::string("unknown escape \\") + esc);
            }
        }
        // Language tags and datatypes are accepted and dropped.
        if (peek() == '@') {
            ++pos_;
            auto start = pos_;
            while (pos_ < line_.size() &&
                   (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '-')) {
                ++pos_;
            }
            if (pos_ == start) {
                fail("empty language tag");
            }
        } else if (line_.substr(pos_, 2) == "^^") {
            pos_ += 2;
            iri("datatype");
        }
        return out;
    }

    std::string_view line_;
    std::size_t number_;
    std::size_t pos_ = 0;
};

inline std::string escape_literal(std::string_view text)
{
    std::string out;
    out.reserve(text.size() + 2);
    for (char c : text) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '"': out += "\\\""; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace detail

/// Parses line-oriented N-Triples. Blank lines and '#' comments are skipped;
/// duplicates are kept. Throws parse_error with the 1-based line number.
inline std::vector<Triple> parse_ntriples(std::string_view text)
{
    std::vector<Triple> out;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++number;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        auto first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos || line[first] == '#') {
            continue;
        }
        out.push_back(detail::line_parser(line, number).parse());
    }
    return out;
}

// Graph edges as triples, sorted by (subject, predicate, object).
inline std::vector<Triple> to_triples(const Graph& graph)
{
    std::vector<Triple> out;
    out.reserve(graph.edge_count());
    for (const auto& e : graph.edges()) {
        const auto& target = graph.node(e.target);
        out.push_back({*graph.node(e.source).iri, graph.predicate_iri(e.label), target.key(), !target.is_entity()});
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Canonical export: one statement per line, LF, sorted.
inline std::string write_ntriples(const Graph& graph)
{
    std::string out;
    for (const auto& t : to_triples(graph)) {
        out += '<';
        out += t.subject;
        out += "> <";
        out += t.predicate;
        out += "> ";
        if (t.object_is_literal) {
            out += '"';
            out += detail::escape_literal(t.object);
            out += '"';
        } else {
            out += '<';
            out += t.object;
            out += '>';
        }
        out += " .\n";
    }
    return out;
}

} // namespace ontoir
