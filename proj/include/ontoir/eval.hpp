#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"
#include "index.hpp"
#include "query.hpp"

namespace ontoir {

/// A ratio whose denominator may have been zero; `value` is then 0.
struct Ratio {
    double value = 0.0;
    bool degenerate = false;
};

inline Ratio precision(std::size_t tp, std::size_t fp) noexcept
{
    if (tp + fp == 0) {
        return {0.0, true};
    }
    return {static_cast<double>(tp) / static_cast<double>(tp + fp), false};
}

inline Ratio recall(std::size_t tp, std::size_t fn) noexcept
{
    if (tp + fn == 0) {
        return {0.0, true};
    }
    return {static_cast<double>(tp) / static_cast<double>(tp + fn), false};
}

inline double f_measure(double p, double r) noexcept
{
    return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

/// Stable document key: FNV-1a 64 over `FieldName<TAB>text<LF>` for each
/// field value in order, as 16 lowercase hex digits.
inline std::string fingerprint(const IndexedDoc& doc)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& fv : doc.fields) {
        mix(field_name(fv.field));
        mix("\t");
        mix(fv.text);
        mix("\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Judgments per query. A query listed only with 0 labels has an empty
/// relevant set.
struct Qrels {
    std::map<std::string, std::set<std::string>, std::less<>> relevant;

    bool contains(std::string_view query_id) const { return relevant.find(query_id) != relevant.end(); }
};

struct RunResult {
    std::string query_id;
    std::vector<std::string> retrieved;  // unique keys, rank order
};

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    bool degenerate_precision = false;
    bool degenerate_recall = false;
};

inline Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn)
{
    Metrics m;
    m.tp = tp;
    m.fp = fp;
    m.fn = fn;
    auto p = ontoir::precision(tp, fp);
    auto r = ontoir::recall(tp, fn);
    m.precision = p.value;
    m.recall = r.value;
    m.degenerate_precision = p.degenerate;
    m.degenerate_recall = r.degenerate;
    m.f_measure = ontoir::f_measure(m.precision, m.recall);
    return m;
}

inline Metrics evaluate_run(const RunResult& run, const Qrels& qrels)
{
    auto it = qrels.relevant.find(run.query_id);
    if (it == qrels.relevant.end()) {
        throw not_found_error("query '" + run.query_id + "' has no relevance judgments");
    }
    const auto& relevant = it->second;
    std::set<std::string> retrieved(run.retrieved.begin(), run.retrieved.end());
    std::size_t tp = 0;
    for (const auto& key : retrieved) {
        tp += relevant.count(key);
    }
    return metrics_from_counts(tp, retrieved.size() - tp, relevant.size() - tp);
}

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
        if (tab == std::string_view::npos) {
            return out;
        }
        start = tab + 1;
    }
}

template <typename Fn>
void for_each_data_line(std::string_view text, Fn&& fn)
{
    std::size_t start = 0;
    std::size_t number = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        ++number;
        if (!line.empty() && line.front() != '#') {
            fn(line, number);
        }
        start = end + 1;
    }
}

} // namespace detail

struct QuerySpec {
    std::string id;
    std::string text;
};

/// `query_id<TAB>query` per line; blank lines and '#' comments are skipped.
inline std::vector<QuerySpec> parse_queries(std::string_view text)
{
    std::vector<QuerySpec> out;
    std::set<std::string, std::less<>> seen;
    detail::for_each_data_line(text, [&](std::string_view line, std::size_t number) {
        auto tab = line.find('\t');
        if (tab == std::string_view::npos || tab == 0 || tab + 1 == line.size()) {
            throw parse_error("expected query_id<TAB>query", number, std::string(line));
        }
        auto id = std::string(line.substr(0, tab));
        if (!seen.insert(id).second) {
            throw parse_error("duplicate query id", number, id);
        }
        out.push_back({std::move(id), std::string(line.substr(tab + 1))});
    });
    return out;
}

/// `query_id<TAB>fingerprint<TAB>1|0` per line.
inline Qrels parse_qrels(std::string_view text)
{
    Qrels out;
    detail::for_each_data_line(text, [&](std::string_view line, std::size_t number) {
        auto cols = detail::split_tabs(line);
        if (cols.size() != 3 || cols[0].empty() || cols[1].empty()) {
            throw parse_error("expected query_id<TAB>doc_fingerprint<TAB>label", number, std::string(line));
        }
        if (cols[2] != "1" && cols[2] != "0") {
            throw parse_error("relevance label must be 1 or 0", number, std::string(cols[2]));
        }
        auto& set = out.relevant[std::string(cols[0])];
        if (cols[2] == "1") {
            set.insert(std::string(cols[1]));
        }
    });
    return out;
}

/// Evaluates one query against the index; retrieved keys are the
/// fingerprints of the result documents in rank order.
inline RunResult run_query(const Index& index, const QuerySpec& query)
{
    RunResult run{query.id, {}};
    std::set<std::string> seen;
    for (auto id : retrieve(index, parse_query(query.text))) {
        auto key = fingerprint(index.doc(id));
        if (seen.insert(key).second) {
            run.retrieved.push_back(std::move(key));
        }
    }
    return run;
}

struct ReportEntry {
    std::string query_id;
    std::optional<Metrics> metrics;  // empty: no judgments for the query
};

struct EvalReport {
    std::vector<ReportEntry> entries;  // ordered by query id

    bool complete() const
    {
        return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.metrics.has_value(); });
    }

    // Unweighted mean of P, R and F; counts are summed. Entries without
    // judgments are left out.
    std::optional<Metrics> average() const
    {
        Metrics avg;
        std::size_t n = 0;
        for (const auto& e : entries) {
            if (!e.metrics) {
                continue;
            }
            avg.precision += e.metrics->precision;
            avg.recall += e.metrics->recall;
            avg.f_measure += e.metrics->f_measure;
            avg.tp += e.metrics->tp;
            avg.fp += e.metrics->fp;
            avg.fn += e.metrics->fn;
            ++n;
        }
        if (n == 0) {
            return std::nullopt;
        }
        avg.precision /= static_cast<double>(n);
        avg.recall /= static_cast<double>(n);
        avg.f_measure /= static_cast<double>(n);
        return avg;
    }
};

inline EvalReport run_eval(const Index& index, std::span<const QuerySpec> queries, const Qrels& qrels)
{
    EvalReport report;
    for (const auto& q : queries) {
        ReportEntry entry{q.id, std::nullopt};
        if (qrels.contains(q.id)) {
            entry.metrics = evaluate_run(run_query(index, q), qrels);
        }
        report.entries.push_back(std::move(entry));
    }
    std::sort(report.entries.begin(), report.entries.end(),
              [](const auto& a, const auto& b) { return a.query_id < b.query_id; });
    return report;
}

inline std::string format_ratio(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", value);
    return buf;
}

/// TSV with header `query_id P R F tp fp fn`, one row per query and a
/// final AVG row when at least one query was judged.
inline std::string format_report(const EvalReport& report)
{
    std::string out = "query_id\tP\tR\tF\ttp\tfp\tfn\n";
    auto row = [&out](std::string_view id, const Metrics& m) {
        out += id;
        out += '\t' + format_ratio(m.precision) + '\t' + format_ratio(m.recall) + '\t' + format_ratio(m.f_measure);
        out += '\t' + std::to_string(m.tp) + '\t' + std::to_string(m.fp) + '\t' + std::to_string(m.fn) + '\n';
    };
    for (const auto& e : report.entries) {
        if (e.metrics) {
            row(e.query_id, *e.metrics);
        } else {
            out += e.query_id + "\tnot-found\n";
        }
    }
    if (auto avg = report.average()) {
        row("AVG", *avg);
    }
    return out;
}

} // namespace ontoir
