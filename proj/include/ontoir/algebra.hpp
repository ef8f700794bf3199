#pragma once

#include <algorithm>
#include <iterator>
#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "error.hpp"
#include "index.hpp"
#include "query.hpp"
#include "tokenizer.hpp"

namespace ontoir {

/// Relation instance r with fields d, e, at, v. `doc_id` names the
/// document the row came from; `score` is filled in by rank().
struct Row {
    std::string d;
    std::string e;
    std::string at;
    std::string v;
    DocId doc_id = 0;
    double score = 0.0;

    const std::string& get(Field f) const noexcept
    {
        switch (f) {
        case Field::Dataset: return d;
        case Field::Entity: return e;
        case Field::Attribute: return at;
        case Field::Value: break;
        }
        return v;
    }

    std::string& get(Field f) noexcept { return const_cast<std::string&>(std::as_const(*this).get(f)); }
};

struct Relation {
    std::vector<Field> columns{all_fields.begin(), all_fields.end()};
    std::vector<Row> rows;

    // Visible tuple of a row under the current columns.
    std::vector<std::string> tuple(const Row& row) const
    {
        std::vector<std::string> out;
        out.reserve(columns.size());
        for (auto f : columns) {
            out.push_back(row.get(f));
        }
        return out;
    }

    std::set<std::vector<std::string>> row_set() const
    {
        std::set<std::vector<std::string>> out;
        for (const auto& r : rows) {
            out.insert(tuple(r));
        }
        return out;
    }
};

/// Rows of a document: one per (Attribute, Value) pair, carrying the most
/// recent Dataset and Entity values. A statement document yields one row.
inline std::vector<Row> rows_of(const IndexedDoc& doc)
{
    std::vector<Row> out;
    Row current;
    current.doc_id = doc.id;
    for (const auto& fv : doc.fields) {
        switch (fv.field) {
        case Field::Dataset: current.d = fv.text; break;
        case Field::Entity: current.e = fv.text; break;
        case Field::Attribute: current.at = fv.text; break;
        case Field::Value:
            current.v = fv.text;
            out.push_back(current);
            current.at.clear();
            break;
        }
    }
    return out;
}

namespace detail {

inline std::vector<Field> condition_fields(QueryField f)
{
    if (f == QueryField::Any) {
        return {all_fields.begin(), all_fields.end()};
    }
    return {static_cast<Field>(f)};
}

inline bool contains_phrase(std::span<const std::string> tokens, std::span<const std::string> phrase)
{
    if (phrase.size() > tokens.size()) {
        return false;
    }
    return std::search(tokens.begin(), tokens.end(), phrase.begin(), phrase.end()) != tokens.end();
}

inline std::vector<DocId> unite(const std::vector<DocId>& a, std::span<const DocId> b)
{
    std::vector<DocId> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<DocId> intersect(const std::vector<DocId>& a, std::span<const DocId> b)
{
    std::vector<DocId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace detail

/// Documents satisfying one condition, ascending. Phrases are checked by
/// re-tokenizing stored values of candidate documents.
inline std::vector<DocId> matching_docs(const Index& index, const Condition& condition)
{
    std::vector<DocId> out;
    if (condition.terms.empty()) {
        return out;
    }
    for (auto field : detail::condition_fields(condition.field)) {
        auto first = index.postings(field, condition.terms.front());
        std::vector<DocId> candidates(first.begin(), first.end());
        for (std::size_t i = 1; i < condition.terms.size() && !candidates.empty(); ++i) {
            candidates = detail::intersect(candidates, index.postings(field, condition.terms[i]));
        }
        if (condition.terms.size() > 1) {
            std::erase_if(candidates, [&](DocId id) {
                for (const auto& fv : index.doc(id).fields) {
                    if (fv.field == field && detail::contains_phrase(tokenize(fv.text), condition.terms)) {
                        return false;
                    }
                }
                return true;
            });
        }
        out = detail::unite(out, candidates);
    }
    return out;
}

/// sigma_c(R): every row of every document satisfying the condition.
inline Relation select(const Index& index, const Condition& condition)
{
    Relation rel;
    for (auto id : matching_docs(index, condition)) {
        auto rows = rows_of(index.doc(id));
        rel.rows.insert(rel.rows.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
    }
    return rel;
}

/// pi_fields(R): keeps the named columns in order and drops rows whose
/// visible tuple was already seen. Hidden fields of kept rows are cleared.
inline Relation project(const Relation& relation, std::span<const Field> fields)
{
    if (fields.empty()) {
        throw argument_error("projection needs at least one field");
    }
    Relation out;
    out.columns.assign(fields.begin(), fields.end());
    std::set<std::vector<std::string>> seen;
    for (const auto& row : relation.rows) {
        if (!seen.insert(out.tuple(row)).second) {
            continue;
        }
        Row kept = row;
        for (auto f : all_fields) {
            if (std::find(fields.begin(), fields.end(), f) == fields.end()) {
                kept.get(f).clear();
            }
        }
        out.rows.push_back(std::move(kept));
    }
    return out;
}

namespace detail {

class evaluator {
public:
    explicit evaluator(const Index& index) : index_(index) {}

    const std::vector<DocId>& leaf(const Condition& c)
    {
        auto it = cache_.find(c);
        if (it == cache_.end()) {
            it = cache_.emplace(c, matching_docs(index_, c)).first;
        }
        return it->second;
    }

    std::vector<DocId> docs(const QueryNode& node)
    {
        switch (node.op) {
        case QueryNode::Op::Cond: return leaf(node.condition);
        case QueryNode::Op::And: {
            auto out = docs(node.children.front());
            for (std::size_t i = 1; i < node.children.size() && !out.empty(); ++i) {
                out = intersect(out, docs(node.children[i]));
            }
            return out;
        }
        case QueryNode::Op::Or: {
            std::vector<DocId> out;
            for (const auto& child : node.children) {
                out = unite(out, docs(child));
            }
            return out;
        }
        case QueryNode::Op::Not: {
            auto inner = docs(node.children.front());
            std::vector<DocId> out;
            out.reserve(index_.size() - inner.size());
            auto it = inner.begin();
            for (DocId id = 0; id < index_.size(); ++id) {
                if (it != inner.end() && *it == id) {
                    ++it;
                } else {
                    out.push_back(id);
                }
            }
            return out;
        }
        }
        return {};
    }

    static void leaves(const QueryNode& node, std::set<Condition>& out)
    {
        if (node.op == QueryNode::Op::Cond) {
            out.insert(node.condition);
        }
        for (const auto& child : node.children) {
            leaves(child, out);
        }
    }

    // Score = number of distinct leaf conditions the row's document satisfies;
    // ties break on entity label, then doc id.
    Relation rank(Relation relation, const QueryAst& ast)
    {
        std::set<Condition> conditions;
        leaves(ast.root, conditions);
        for (auto& row : relation.rows) {
            std::size_t hits = 0;
            for (const auto& c : conditions) {
                const auto& list = leaf(c);
                hits += std::binary_search(list.begin(), list.end(), row.doc_id) ? 1 : 0;
            }
            row.score = static_cast<double>(hits);
        }
        std::stable_sort(relation.rows.begin(), relation.rows.end(), [](const Row& a, const Row& b) {
            if (a.score != b.score) {
                return a.score > b.score;
            }
            return std::tie(a.e, a.doc_id) < std::tie(b.e, b.doc_id);
        });
        return relation;
    }

private:
    const Index& index_;
    std::map<Condition, std::vector<DocId>> cache_;
};

} // namespace detail

/// Documents satisfying the query tree: And intersects, Or unites, Not
/// complements against every document of the index.
inline std::vector<DocId> evaluate_docs(const Index& index, const QueryNode& root)
{
    return detail::evaluator(index).docs(root);
}

inline Relation rank(const Index& index, Relation relation, const QueryAst& ast)
{
    return detail::evaluator(index).rank(std::move(relation), ast);
}

/// Evaluates a parsed query: select documents, expand their rows, rank, then
/// project. Duplicate projected rows keep their best-ranked occurrence.
inline Relation evaluate(const Index& index, const QueryAst& ast)
{
    detail::evaluator ev(index);
    Relation rel;
    for (auto id : ev.docs(ast.root)) {
        auto rows = rows_of(index.doc(id));
        rel.rows.insert(rel.rows.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
    }
    auto projected = project(ev.rank(std::move(rel), ast), ast.projection);
    return ev.rank(std::move(projected), ast);
}

/// Matching documents in rank order, before projection. Unlike
/// result_docs(evaluate(...)), no document is lost to row deduplication.
inline std::vector<DocId> retrieve(const Index& index, const QueryAst& ast)
{
    detail::evaluator ev(index);
    Relation rel;
    for (auto id : ev.docs(ast.root)) {
        rel.rows.push_back({});
        rel.rows.back().doc_id = id;
        for (const auto& fv : index.doc(id).fields) {
            if (fv.field == Field::Entity) {
                rel.rows.back().e = fv.text;  // tie-break key, as for rows
                break;
            }
        }
    }
    std::vector<DocId> out;
    for (const auto& row : ev.rank(std::move(rel), ast).rows) {
        out.push_back(row.doc_id);
    }
    return out;
}

inline Relation evaluate(const Index& index, std::string_view query)
{
    return evaluate(index, parse_query(query));
}

// Distinct documents of a relation in row order.
inline std::vector<DocId> result_docs(const Relation& relation)
{
    std::vector<DocId> out;
    std::set<DocId> seen;
    for (const auto& row : relation.rows) {
        if (seen.insert(row.doc_id).second) {
            out.push_back(row.doc_id);
        }
    }
    return out;
}

} // namespace ontoir
