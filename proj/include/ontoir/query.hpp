#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "index.hpp"
#include "tokenizer.hpp"

namespace ontoir {

enum class QueryField : std::uint8_t { Dataset, Entity, Attribute, Value, Any };

inline std::string_view query_field_name(QueryField f) noexcept
{
    switch (f) {
    case QueryField::Dataset: return "Dataset";
    case QueryField::Entity: return "Entity";
    case QueryField::Attribute: return "Attribute";
    case QueryField::Value: return "Value";
    case QueryField::Any: return "Any";
    }
    return "?";
}

// Short field names used in query strings and projections.
inline std::string_view short_name(Field f) noexcept
{
    switch (f) {
    case Field::Dataset: return "d";
    case Field::Entity: return "e";
    case Field::Attribute: return "at";
    case Field::Value: return "v";
    }
    return "?";
}

inline std::optional<QueryField> parse_query_field(std::string_view name) noexcept
{
    if (name == "d") return QueryField::Dataset;
    if (name == "e") return QueryField::Entity;
    if (name == "at") return QueryField::Attribute;
    if (name == "v") return QueryField::Value;
    if (name == "*") return QueryField::Any;
    return std::nullopt;
}

/// Keyword selection condition f:k. More than one term means a phrase:
/// the terms must occur consecutively inside one value of the field.
struct Condition {
    QueryField field = QueryField::Any;
    std::vector<std::string> terms;

    friend auto operator<=>(const Condition&, const Condition&) = default;
};

struct QueryNode {
    enum class Op : std::uint8_t { Cond, And, Or, Not };

    Op op = Op::Cond;
    Condition condition;             // Op::Cond only
    std::vector<QueryNode> children; // And/Or: two or more; Not: exactly one

    static QueryNode leaf(QueryField field, std::vector<std::string> terms)
    {
        return {Op::Cond, {field, std::move(terms)}, {}};
    }
    static QueryNode all_of(std::vector<QueryNode> children) { return {Op::And, {}, std::move(children)}; }
    static QueryNode any_of(std::vector<QueryNode> children) { return {Op::Or, {}, std::move(children)}; }
    static QueryNode negate(QueryNode child) { return {Op::Not, {}, {std::move(child)}}; }

    friend bool operator==(const QueryNode&, const QueryNode&) = default;
};

struct QueryAst {
    QueryNode root;
    std::vector<Field> projection{Field::Entity, Field::Attribute, Field::Value};

    friend bool operator==(const QueryAst&, const QueryAst&) = default;
};

// Compact debugging form, e.g. And(Cond(Any,"hotel"),Cond(Any,"istria")).
inline std::string to_string(const QueryNode& node)
{
    switch (node.op) {
    case QueryNode::Op::Cond: {
        std::string out = "Cond(" + std::string(query_field_name(node.condition.field)) + ",\"";
        for (std::size_t i = 0; i < node.condition.terms.size(); ++i) {
            out += (i ? " " : "") + node.condition.terms[i];
        }
        return out + "\")";
    }
    case QueryNode::Op::Not: return "Not(" + to_string(node.children.front()) + ")";
    case QueryNode::Op::And:
    case QueryNode::Op::Or: {
        std::string out = node.op == QueryNode::Op::And ? "And(" : "Or(";
        for (std::size_t i = 0; i < node.children.size(); ++i) {
            out += (i ? "," : "") + to_string(node.children[i]);
        }
        return out + ")";
    }
    }
    return {};
}

namespace detail {

struct query_token {
    enum class Kind { Word, Phrase, Field, LParen, RParen, Pipe, End };
    Kind kind = Kind::End;
    std::string text;
    std::size_t offset = 0;
};

class query_lexer {
public:
    explicit query_lexer(std::string_view text) : text_(text) { advance(); }

    const query_token& peek() const noexcept { return current_; }
    query_token take()
    {
        auto t = current_;
        advance();
        return t;
    }
    bool at_keyword(std::string_view k) const
    {
        return current_.kind == query_token::Kind::Word && current_.text == k;
    }
    std::string_view rest() const { return text_.substr(current_.offset); }

private:
    static bool word_char(char c)
    {
        return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '"' && c != '|' &&
               c != ':';
    }

    void advance()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        current_ = {};
        current_.offset = pos_;
        if (pos_ >= text_.size()) {
            return;
        }
        char c = text_[pos_];
        switch (c) {
        case '(': current_.kind = query_token::Kind::LParen; ++pos_; return;
        case ')': current_.kind = query_token::Kind::RParen; ++pos_; return;
        case '|': current_.kind = query_token::Kind::Pipe; ++pos_; return;
        case ':': throw query_error("missing field name before ':'", pos_);
        case '"': {
            auto end = text_.find('"', pos_ + 1);
            if (end == std::string_view::npos) {
                throw query_error("unterminated phrase", pos_);
            }
            current_.kind = query_token::Kind::Phrase;
            current_.text = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
            pos_ = end + 1;
            return;
        }
        default: break;
        }
        auto start = pos_;
        while (pos_ < text_.size() && word_char(text_[pos_])) {
            ++pos_;
        }
        current_.text = std::string(text_.substr(start, pos_ - start));
        if (pos_ < text_.size() && text_[pos_] == ':') {
            if (!parse_query_field(current_.text)) {
                throw field_error(current_.text, start);
            }
            ++pos_;
            current_.kind = query_token::Kind::Field;
            return;
        }
        current_.kind = query_token::Kind::Word;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    query_token current_;
};

class query_parser {
public:
    explicit query_parser(std::string_view text) : lex_(text) {}

    QueryAst parse()
    {
        if (lex_.peek().kind == query_token::Kind::End) {
            throw empty_query_error();
        }
        QueryAst ast;
        ast.root = or_expr();
        if (lex_.peek().kind == query_token::Kind::Pipe) {
            ast.projection = field_list(lex_.take().offset + 1);
            return ast;
        }
        if (lex_.peek().kind != query_token::Kind::End) {
            throw query_error("unexpected '" + describe(lex_.peek()) + "'", lex_.peek().offset);
        }
        return ast;
    }

private:
    static std::string describe(const query_token& t)
    {
        switch (t.kind) {
        case query_token::Kind::LParen: return "(";
        case query_token::Kind::RParen: return ")";
        case query_token::Kind::Pipe: return "|";
        case query_token::Kind::End: return "end of query";
        case query_token::Kind::Field: return t.text + ":";
        default: return t.text;
        }
    }

    bool starts_operand() const
    {
        const auto& t = lex_.peek();
        switch (t.kind) {
        case query_token::Kind::Word: return t.text != "OR";
        case query_token::Kind::Phrase:
        case query_token::Kind::Field:
        case query_token::Kind::LParen: return true;
        default: return false;
        }
    }

    QueryNode or_expr()
    {
        std::vector<QueryNode> parts{and_expr()};
        while (lex_.at_keyword("OR")) {
            lex_.take();
            parts.push_back(and_expr());
        }
        return parts.size() == 1 ? std::move(parts.front()) : QueryNode::any_of(std::move(parts));
    }

    QueryNode and_expr()
    {
        std::vector<QueryNode> parts{not_expr()};
        while (starts_operand()) {
            if (lex_.at_keyword("AND")) {
                lex_.take();
            }
            parts.push_back(not_expr());
        }
        return parts.size() == 1 ? std::move(parts.front()) : QueryNode::all_of(std::move(parts));
    }

    QueryNode not_expr()
    {
        const auto& t = lex_.peek();
        if (t.kind == query_token::Kind::Word && t.text == "NOT") {
            lex_.take();
            return QueryNode::negate(not_expr());
        }
        if (t.kind == query_token::Kind::LParen) {
            auto open = lex_.take();
            auto inner = or_expr();
            if (lex_.peek().kind != query_token::Kind::RParen) {
                throw query_error("expected ')' to close '(' at offset " + std::to_string(open.offset),
                                  lex_.peek().offset);
            }
            lex_.take();
            return inner;
        }
        auto field = QueryField::Any;
        if (t.kind == query_token::Kind::Field) {
            field = *parse_query_field(lex_.take().text);
            const auto& next = lex_.peek();
            if (next.kind != query_token::Kind::Word && next.kind != query_token::Kind::Phrase) {
                throw query_error("expected term after field prefix", next.offset);
            }
        } else if (t.kind != query_token::Kind::Word && t.kind != query_token::Kind::Phrase) {
            throw query_error("expected term, found '" + describe(t) + "'", t.offset);
        } else if (t.kind == query_token::Kind::Word && (t.text == "AND" || t.text == "OR")) {
            throw query_error("operator " + t.text + " needs a left operand", t.offset);
        }
        auto term = lex_.take();
        auto terms = tokenize(term.text);
        if (terms.empty()) {
            throw query_error("term '" + term.text + "' has no searchable characters", term.offset);
        }
        return QueryNode::leaf(field, std::move(terms));
    }

    // The raw suffix after '|' is read directly so that projection names
    // are not lexed as search terms.
    std::vector<Field> field_list(std::size_t offset)
    {
        if (lex_.peek().kind == query_token::Kind::End) {
            throw query_error("empty projection", offset);
        }
        auto base = lex_.peek().offset;
        auto text = lex_.rest();
        auto separator = [](char c) { return std::isspace(static_cast<unsigned char>(c)) || c == ','; };
        std::vector<Field> out;
        std::size_t pos = 0;
        while (pos < text.size()) {
            if (separator(text[pos])) {
                ++pos;
                continue;
            }
            auto start = pos;
            while (pos < text.size() && !separator(text[pos])) {
                ++pos;
            }
            auto name = text.substr(start, pos - start);
            auto f = parse_query_field(name);
            if (!f || *f == QueryField::Any) {
                throw field_error(std::string(name), base + start);
            }
            out.push_back(static_cast<Field>(*f));
        }
        return out;
    }

    query_lexer lex_;
};

} // namespace detail

/// Parses a keyword query.
///
///     query   := or ('|' fields)?
///     or      := and ('OR' and)*
///     and     := not (('AND')? not)*
///     not     := 'NOT' not | '(' or ')' | (field ':')? (word | '"' phrase '"')
///     field   := d | e | at | v | *
///
/// Bare keywords search every field. Words are normalized with tokenize();
/// a word that splits into several terms ("Port-Royal") becomes a phrase.
inline QueryAst parse_query(std::string_view text)
{
    return detail::query_parser(text).parse();
}

} // namespace ontoir
