#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "graph.hpp"

namespace ontoir {

struct PatternTerm {
    enum class Kind : std::uint8_t {
        Variable,  // ?x
        Name,      // bare local name, matches any node with that label
        Iri,       // <http://...>
        Literal,   // "text"
    };

    Kind kind = Kind::Name;
    std::string text;  // variables keep their leading '?'

    bool is_variable() const noexcept { return kind == Kind::Variable; }

    friend bool operator==(const PatternTerm&, const PatternTerm&) = default;
};

struct TriplePattern {
    PatternTerm subject;
    PatternTerm predicate;
    PatternTerm object;

    friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

/// Horn rule over triple patterns. Every head variable occurs in the body.
struct Rule {
    std::string name;
    TriplePattern head;
    std::vector<TriplePattern> body;

    friend bool operator==(const Rule&, const Rule&) = default;
};

/// Journey-pattern materialization settings.
struct PatternConfig {
    std::string pattern_label;
    std::string path_predicate;
    std::size_t max_hops = 1;
    std::vector<std::string> attach_predicates;

    friend bool operator==(const PatternConfig&, const PatternConfig&) = default;
};

struct RuleSet {
    std::vector<Rule> rules;
    std::vector<PatternConfig> patterns;
};

namespace detail {

struct rule_token {
    enum class Kind { Name, Variable, Iri, String, Punct, End };
    Kind kind = Kind::End;
    std::string text;
};

class rule_lexer {
public:
    rule_lexer(std::string_view line, std::size_t number) : line_(line), number_(number) { advance(); }

    const rule_token& peek() const noexcept { return current_; }

    rule_token take()
    {
        auto t = current_;
        advance();
        return t;
    }

    bool at_punct(std::string_view p) const { return current_.kind == rule_token::Kind::Punct && current_.text == p; }

    void expect_punct(std::string_view p)
    {
        if (!at_punct(p)) {
            fail("expected '" + std::string(p) + "'");
        }
        advance();
    }

    [[noreturn]] void fail(const std::string& message) const
    {
        auto near = current_.kind == rule_token::Kind::End ? std::string("end of line") : "'" + current_.text + "'";
        throw parse_error(message + " near " + near, number_, std::string(line_));
    }

    std::size_t line_number() const noexcept { return number_; }

private:
    static bool name_char(char c)
    {
        auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || c == '_' || c == '-' || u >= 0x80;
    }

    void advance()
    {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) {
            ++pos_;
        }
        if (pos_ >= line_.size() || line_[pos_] == '#') {
            current_ = {rule_token::Kind::End, {}};
            return;
        }
        char c = line_[pos_];
        if (c == '<') {
            auto end = line_.find('>', pos_);
            if (end == std::string_view::npos) {
                throw parse_error("unterminated IRI", number_, std::string(line_));
            }
            current_ = {rule_token::Kind::Iri, std::string(line_.substr(pos_ + 1, end - pos_ - 1))};
            pos_ = end + 1;
            return;
        }
        if (c == '"') {
            std::string text;
            ++pos_;
            while (true) {
                if (pos_ >= line_.size()) {
                    throw parse_error("unterminated literal", number_, std::string(line_));
                }
                char d = line_[pos_++];
                if (d == '"') {
                    break;
                }
                if (d == '\\' && pos_ < line_.size()) {
                    d = line_[pos_++];
                }
                text += d;
            }
            current_ = {rule_token::Kind::String, std::move(text)};
            return;
        }
        if (line_.substr(pos_, 2) == ":-") {
            current_ = {rule_token::Kind::Punct, ":-"};
            pos_ += 2;
            return;
        }
        if (c == '?' || c == '@' || name_char(c)) {
            auto start = pos_++;
            while (pos_ < line_.size() && name_char(line_[pos_])) {
                ++pos_;
            }
            auto text = std::string(line_.substr(start, pos_ - start));
            if ((c == '?' || c == '@') && text.size() == 1) {
                throw parse_error(std::string("dangling '") + c + "'", number_, std::string(line_));
            }
            current_ = {c == '?' ? rule_token::Kind::Variable : rule_token::Kind::Name, std::move(text)};
            return;
        }
        if (std::string_view("(),.{}:;=").find(c) != std::string_view::npos) {
            current_ = {rule_token::Kind::Punct, std::string(1, c)};
            ++pos_;
            return;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", number_, std::string(line_));
    }

    std::string_view line_;
    std::size_t number_;
    std::size_t pos_ = 0;
    rule_token current_;
};

inline PatternTerm pattern_term(rule_lexer& lex, const char* role)
{
    auto tok = lex.peek();
    PatternTerm term;
    switch (tok.kind) {
    case rule_token::Kind::Variable: term = {PatternTerm::Kind::Variable, tok.text}; break;
    case rule_token::Kind::Name:
        if (tok.text.front() == '@') {
            lex.fail(std::string("expected ") + role);
        }
        term = {PatternTerm::Kind::Name, tok.text};
        break;
    case rule_token::Kind::Iri: term = {PatternTerm::Kind::Iri, tok.text}; break;
    case rule_token::Kind::String: term = {PatternTerm::Kind::Literal, tok.text}; break;
    default: lex.fail(std::string("expected ") + role);
    }
    lex.take();
    return term;
}

inline TriplePattern triple_pattern(rule_lexer& lex)
{
    lex.expect_punct("(");
    TriplePattern p;
    p.subject = pattern_term(lex, "subject");
    p.predicate = pattern_term(lex, "predicate");
    p.object = pattern_term(lex, "object");
    lex.expect_punct(")");
    if (p.subject.kind == PatternTerm::Kind::Literal) {
        lex.fail("literal in subject position");
    }
    if (p.predicate.kind == PatternTerm::Kind::Literal) {
        lex.fail("literal in predicate position");
    }
    return p;
}

// Variables bind either nodes or edge labels, never both.
inline void check_rule(const Rule& rule, std::size_t line)
{
    std::set<std::string> bound;
    std::map<std::string, bool> as_predicate;
    auto note = [&](const PatternTerm& t, bool predicate) {
        if (!t.is_variable()) {
            return;
        }
        auto [it, inserted] = as_predicate.emplace(t.text, predicate);
        if (!inserted && it->second != predicate) {
            throw parse_error("variable " + t.text + " used both as predicate and as node", line);
        }
    };
    for (const auto& atom : rule.body) {
        for (const auto* t : {&atom.subject, &atom.object}) {
            note(*t, false);
            if (t->is_variable()) {
                bound.insert(t->text);
            }
        }
        note(atom.predicate, true);
        if (atom.predicate.is_variable()) {
            bound.insert(atom.predicate.text);
        }
    }
    const auto& h = rule.head;
    note(h.subject, false);
    note(h.predicate, true);
    note(h.object, false);
    for (const auto* t : {&h.subject, &h.predicate, &h.object}) {
        if (t->is_variable() && !bound.contains(t->text)) {
            throw safety_error(t->text, line);
        }
    }
}

inline std::string config_value(rule_lexer& lex)
{
    auto tok = lex.peek();
    if (tok.kind == rule_token::Kind::Name) {
        lex.take();
        return tok.text;
    }
    if (tok.kind == rule_token::Kind::Iri) {
        lex.take();
        return std::string(local_name(tok.text));
    }
    lex.fail("expected value");
}

inline PatternConfig pattern_config(rule_lexer& lex)
{
    lex.take();  // @pattern
    PatternConfig config;
    const auto& name = lex.peek();
    if (name.kind != rule_token::Kind::Name || name.text.front() == '@') {
        lex.fail("expected pattern name");
    }
    config.pattern_label = lex.take().text;
    lex.expect_punct("{");

    // A comma either continues the current value list or starts a new
    // `key: value` / `key = value` setting.
    std::vector<std::pair<std::string, std::vector<std::string>>> settings;
    while (!lex.at_punct("}")) {
        if (lex.peek().kind != rule_token::Kind::Name) {
            lex.fail("expected setting name");
        }
        auto key = lex.take().text;
        if (!lex.at_punct(":") && !lex.at_punct("=")) {
            lex.fail("expected ':' or '=' after " + key);
        }
        lex.take();
        settings.push_back({key, {config_value(lex)}});
        while (lex.at_punct(",")) {
            lex.take();
            auto value = config_value(lex);
            if (lex.at_punct(":") || lex.at_punct("=")) {
                lex.take();
                settings.push_back({value, {config_value(lex)}});
            } else {
                settings.back().second.push_back(std::move(value));
            }
        }
        if (!lex.at_punct("}")) {
            lex.expect_punct(";");
        }
    }
    lex.take();
    if (lex.peek().kind != rule_token::Kind::End) {
        lex.fail("unexpected text after pattern");
    }

    bool have_path = false;
    for (const auto& [key, values] : settings) {
        if (key == "path") {
            if (values.size() != 1) {
                lex.fail("path takes exactly one predicate");
            }
            config.path_predicate = values.front();
            have_path = true;
        } else if (key == "attach") {
            config.attach_predicates.insert(config.attach_predicates.end(), values.begin(), values.end());
        } else if (key == "max_hops") {
            const auto& hops = values.front();
            bool digits = !hops.empty() && std::all_of(hops.begin(), hops.end(), [](char c) { return c >= '0' && c <= '9'; });
            if (values.size() != 1 || !digits || hops.size() > 9 || std::stoul(hops) == 0) {
                lex.fail("max_hops must be a positive integer");
            }
            config.max_hops = std::stoul(hops);
        } else {
            lex.fail("unknown setting '" + key + "'");
        }
    }
    if (!have_path) {
        lex.fail("pattern " + config.pattern_label + " has no path predicate");
    }
    return config;
}

} // namespace detail

/// Parses the rule language. One statement per line:
///
///     # comment
///     name: (?y is_encircled_by ?x) :- (?x encircles ?y).
///     @pattern SERVICE_JOURNEY_PATTERN { path: next_stop, max_hops = 4; attach: is_encircled; }
///
/// Rule names are optional and default to rule<N>, counting rules from 1.
inline RuleSet parse_rules(std::string_view text)
{
    RuleSet out;
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
        detail::rule_lexer lex(line, number);
        const auto& first = lex.peek();
        if (first.kind == detail::rule_token::Kind::End) {
            continue;
        }
        if (first.kind == detail::rule_token::Kind::Name && first.text == "@pattern") {
            out.patterns.push_back(detail::pattern_config(lex));
            continue;
        }
        Rule rule;
        if (first.kind == detail::rule_token::Kind::Name && first.text.front() != '@') {
            rule.name = lex.take().text;
            lex.expect_punct(":");
        } else if (first.kind != detail::rule_token::Kind::Punct) {
            lex.fail("expected rule or @pattern");
        }
        rule.head = detail::triple_pattern(lex);
        lex.expect_punct(":-");
        rule.body.push_back(detail::triple_pattern(lex));
        while (lex.at_punct(",")) {
            lex.take();
            rule.body.push_back(detail::triple_pattern(lex));
        }
        lex.expect_punct(".");
        if (lex.peek().kind != detail::rule_token::Kind::End) {
            lex.fail("unexpected text after rule");
        }
        if (rule.name.empty()) {
            rule.name = "rule" + std::to_string(out.rules.size() + 1);
        }
        detail::check_rule(rule, number);
        out.rules.push_back(std::move(rule));
    }
    return out;
}

} // namespace ontoir
