#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "algebra.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "graph.hpp"
#include "index.hpp"
#include "index_io.hpp"
#include "journey.hpp"
#include "ntriples.hpp"
#include "query.hpp"
#include "reasoner.hpp"
#include "rules.hpp"

// Command implementations behind the `ontoir` binary. Each returns a process
// exit code and never throws: 0 success, 2 bad user input, 3 I/O or
// environment failure.
namespace ontoir::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_input = 2;
inline constexpr int exit_io = 3;

enum class OutputFormat { Tsv, Json };

namespace fs = std::filesystem;

inline std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot read " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw io_error("failed reading " + path.string());
    }
    return buffer.str();
}

inline void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw io_error("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw io_error("failed writing " + path.string());
    }
}

// Parse errors are re-thrown with the file name in front.
inline Graph load_graph(const std::vector<fs::path>& inputs)
{
    std::vector<Triple> triples;
    for (const auto& path : inputs) {
        auto text = read_text(path);
        try {
            auto parsed = parse_ntriples(text);
            triples.insert(triples.end(), parsed.begin(), parsed.end());
        } catch (const parse_error& e) {
            throw parse_error(path.string() + ": " + e.what(), 0);
        }
    }
    return build_graph(triples);
}

inline RuleSet load_rules(const std::optional<fs::path>& path)
{
    if (!path) {
        return {};
    }
    auto text = read_text(*path);
    try {
        return parse_rules(text);
    } catch (const parse_error& e) {
        throw parse_error(path->string() + ": " + e.what(), 0);
    }
}

/// Runs `body` and maps library exceptions onto exit codes, printing the
/// message to `err`.
template <typename Fn>
int guarded(std::ostream& err, Fn&& body)
{
    try {
        return body();
    } catch (const io_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const format_error& e) {
        err << "error: index " << e.what() << '\n';
        return exit_io;
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_io;
    }
}

/// Builds the index of the requested kind. Rules run before either kind;
/// RULES additionally materializes the journey patterns of the rule file.
inline Index build_index(const Graph& input, const RuleSet& rules, IndexKind kind)
{
    auto graph = rules.rules.empty() ? input : apply_rules(input, rules.rules);
    if (kind == IndexKind::Basic) {
        return index_basic(graph);
    }
    return index_rules(materialize_journey_patterns(graph, rules.patterns));
}

inline int cmd_infer(const std::vector<fs::path>& inputs, const std::optional<fs::path>& rules_path,
                     const std::optional<fs::path>& output, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto graph = load_graph(inputs);
        auto rules = load_rules(rules_path);
        InferenceStats stats;
        auto result = apply_rules(graph, rules.rules, &stats);
        auto text = write_ntriples(result);
        if (output) {
            write_text(*output, text);
        } else {
            out << text;
        }
        err << "input: " << stats.input_edges << '\n' << "added: " << stats.added_edges << '\n';
        return exit_ok;
    });
}

inline int cmd_index(const std::vector<fs::path>& inputs, const std::optional<fs::path>& rules_path,
                     const fs::path& index_dir, IndexKind kind, std::ostream& err)
{
    return guarded(err, [&] {
        auto rules = load_rules(rules_path);
        if (kind == IndexKind::Rules && rules.patterns.empty()) {
            err << "warning: no @pattern blocks; the RULES index will be empty\n";
        }
        auto index = build_index(load_graph(inputs), rules, kind);
        write_index(index, index_dir);
        err << "docs: " << index.size() << '\n';
        return exit_ok;
    });
}

namespace detail {

inline std::string escape_tsv(const std::string& text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
    return out;
}

inline void print_relation(const Relation& rel, OutputFormat format, std::ostream& out)
{
    for (const auto& row : rel.rows) {
        if (format == OutputFormat::Tsv) {
            for (std::size_t i = 0; i < rel.columns.size(); ++i) {
                out << (i ? "\t" : "") << escape_tsv(row.get(rel.columns[i]));
            }
            out << '\n';
            continue;
        }
        nlohmann::ordered_json j;
        for (auto f : rel.columns) {
            j[std::string(short_name(f))] = row.get(f);
        }
        j["score"] = row.score;
        j["doc"] = row.doc_id;
        out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    }
}

// Prints the query with a caret under the failing byte offset.
inline void print_caret(std::string_view query, const query_error& e, std::ostream& err)
{
    err << "error: " << e.what() << '\n' << "  " << query << '\n'
        << "  " << std::string(std::min(e.offset(), query.size()), ' ') << "^\n";
}

// Returns false when the query does not parse.
inline bool run_one(const Index& index, std::string_view query, OutputFormat format, std::ostream& out,
                    std::ostream& err)
{
    QueryAst ast;
    try {
        ast = parse_query(query);
    } catch (const query_error& e) {
        print_caret(query, e, err);
        return false;
    }
    auto rel = evaluate(index, ast);
    print_relation(rel, format, out);
    err << "rows: " << rel.rows.size() << '\n';
    return true;
}

} // namespace detail

inline int cmd_query(const fs::path& index_dir, const std::string& query, OutputFormat format, std::ostream& out,
                     std::ostream& err)
{
    return guarded(err, [&] {
        auto index = read_index(index_dir);
        return detail::run_one(index, query, format, out, err) ? exit_ok : exit_input;
    });
}

/// One query per input line. `:quit` ends the loop, `:index DIR` switches
/// the index. Errors are reported and the loop continues.
inline int cmd_repl(const fs::path& index_dir, std::istream& in, std::ostream& out, std::ostream& err,
                    OutputFormat format = OutputFormat::Tsv)
{
    std::optional<Index> index;
    int status = guarded(err, [&] {
        index = read_index(index_dir);
        return exit_ok;
    });
    if (status != exit_ok) {
        return status;
    }
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        if (line == ":quit") {
            break;
        }
        if (line.rfind(":index", 0) == 0) {
            auto dir = line.substr(6);
            dir.erase(0, dir.find_first_not_of(" \t"));
            guarded(err, [&] {
                if (dir.empty()) {
                    throw argument_error(":index needs a directory");
                }
                index = read_index(dir);
                err << "index: " << dir << " (" << kind_name(index->kind()) << ", " << index->size() << " docs)\n";
                return exit_ok;
            });
            continue;
        }
        if (line.front() == ':') {
            err << "error: unknown command " << line << '\n';
            continue;
        }
        guarded(err, [&] {
            detail::run_one(*index, line, format, out, err);
            return exit_ok;
        });
        out << '\n';
        out.flush();
    }
    return exit_ok;
}

/// Prints the report; exits 2 when a query is missing from the qrels.
inline int cmd_eval(const fs::path& index_dir, const fs::path& queries_path, const fs::path& qrels_path,
                    std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto queries_text = read_text(queries_path);
        auto qrels_text = read_text(qrels_path);
        auto index = read_index(index_dir);
        std::vector<QuerySpec> queries;
        Qrels qrels;
        try {
            queries = parse_queries(queries_text);
        } catch (const parse_error& e) {
            throw parse_error(queries_path.string() + ": " + e.what(), 0);
        }
        try {
            qrels = parse_qrels(qrels_text);
        } catch (const parse_error& e) {
            throw parse_error(qrels_path.string() + ": " + e.what(), 0);
        }
        for (const auto& q : queries) {
            try {
                parse_query(q.text);
            } catch (const query_error& e) {
                throw parse_error("query " + q.id + ": " + e.what(), 0);
            }
        }
        auto report = run_eval(index, queries, qrels);
        out << format_report(report);
        for (const auto& e : report.entries) {
            if (!e.metrics) {
                err << "error: query " << e.query_id << " has no relevance judgments\n";
            }
        }
        return report.complete() ? exit_ok : exit_input;
    });
}

} // namespace ontoir::cli
