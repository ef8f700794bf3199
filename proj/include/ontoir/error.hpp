#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ontoir {

// Base of every error the library throws.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed user input (N-Triples, rules, queries, qrels). `line` is 1-based;
// 0 means "not line oriented", in which case `offset` carries the position.
class parse_error : public error {
public:
    parse_error(std::string message, std::size_t line, std::string text = {}, std::size_t offset = 0)
        : error(format(message, line, text)), message_(std::move(message)), line_(line),
          text_(std::move(text)), offset_(offset)
    {}

    const std::string& message() const noexcept { return message_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& text() const noexcept { return text_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    static std::string format(const std::string& message, std::size_t line, const std::string& text)
    {
        std::string out;
        if (line > 0) {
            out = "line " + std::to_string(line) + ": ";
        }
        out += message;
        if (!text.empty()) {
            out += ": " + text;
        }
        return out;
    }

    std::string message_;
    std::size_t line_;
    std::string text_;
    std::size_t offset_;
};

// Rule whose head mentions a variable that no body atom binds.
class safety_error : public parse_error {
public:
    safety_error(std::string variable, std::size_t line)
        : parse_error("unsafe rule: head variable " + variable + " does not occur in the body", line),
          variable_(std::move(variable))
    {}

    const std::string& variable() const noexcept { return variable_; }

private:
    std::string variable_;
};

class query_error : public parse_error {
public:
    query_error(std::string message, std::size_t offset)
        : parse_error(message + " at offset " + std::to_string(offset), 0, {}, offset)
    {}
};

class empty_query_error : public query_error {
public:
    empty_query_error() : query_error("empty query", 0) {}
};

class field_error : public query_error {
public:
    field_error(const std::string& field, std::size_t offset)
        : query_error("unknown field '" + field + "'", offset)
    {}
};

class not_found_error : public error {
public:
    using error::error;
};

class argument_error : public error {
public:
    using error::error;
};

class divergence_error : public error {
public:
    using error::error;
};

// Missing or corrupt on-disk index file.
class format_error : public error {
public:
    format_error(std::string file, const std::string& what)
        : error(file + ": " + what), file_(std::move(file))
    {}

    const std::string& file() const noexcept { return file_; }

private:
    std::string file_;
};

class version_error : public format_error {
public:
    using format_error::format_error;
};

// Filesystem failure (unreadable input, unwritable directory).
class io_error : public error {
public:
    using error::error;
};

} // namespace ontoir
