#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "journey.hpp"
#include "tokenizer.hpp"

namespace ontoir {

enum class Field : std::uint8_t { Dataset, Entity, Attribute, Value };

inline constexpr std::array<Field, 4> all_fields{Field::Dataset, Field::Entity, Field::Attribute, Field::Value};

inline std::string_view field_name(Field f) noexcept
{
    switch (f) {
    case Field::Dataset: return "Dataset";
    case Field::Entity: return "Entity";
    case Field::Attribute: return "Attribute";
    case Field::Value: return "Value";
    }
    return "?";
}

inline std::optional<Field> parse_field_name(std::string_view name) noexcept
{
    for (auto f : all_fields) {
        if (field_name(f) == name) {
            return f;
        }
    }
    return std::nullopt;
}

enum class IndexKind : std::uint8_t { Basic, Rules };

inline std::string_view kind_name(IndexKind k) noexcept { return k == IndexKind::Basic ? "BASIC" : "RULES"; }

inline std::optional<IndexKind> parse_kind_name(std::string_view name) noexcept
{
    if (name == "BASIC") {
        return IndexKind::Basic;
    }
    if (name == "RULES") {
        return IndexKind::Rules;
    }
    return std::nullopt;
}

using DocId = std::uint32_t;

struct FieldValue {
    Field field = Field::Value;
    std::string text;

    friend auto operator<=>(const FieldValue&, const FieldValue&) = default;
};

struct IndexedDoc {
    DocId id = 0;
    std::vector<FieldValue> fields;  // multivalued for composite documents

    friend bool operator==(const IndexedDoc&, const IndexedDoc&) = default;
};

/// One statement as a four-field document.
struct StatementDoc {
    DocId id = 0;
    std::string dataset;
    std::string entity;
    std::string attribute;
    std::string value;

    IndexedDoc to_indexed() const
    {
        return {id,
                {{Field::Dataset, dataset}, {Field::Entity, entity}, {Field::Attribute, attribute},
                 {Field::Value, value}}};
    }
};

/// Inverted index: doc store plus (field, term) -> ascending doc ids.
class Index {
public:
    using Dictionary = std::map<std::string, std::vector<DocId>, std::less<>>;

    Index() = default;
    explicit Index(IndexKind kind) : kind_(kind) {}

    // Appends a document; ids are dense and follow insertion order.
    DocId add(std::vector<FieldValue> fields)
    {
        auto id = static_cast<DocId>(docs_.size());
        for (const auto& fv : fields) {
            auto& dict = postings_[static_cast<std::size_t>(fv.field)];
            for (auto& term : tokenize(fv.text)) {
                auto& list = dict[std::move(term)];
                if (list.empty() || list.back() != id) {
                    list.push_back(id);
                }
            }
        }
        docs_.push_back({id, std::move(fields)});
        return id;
    }

    IndexKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return docs_.size(); }
    const std::vector<IndexedDoc>& docs() const noexcept { return docs_; }
    const IndexedDoc& doc(DocId id) const { return docs_.at(id); }
    const Dictionary& dictionary(Field f) const { return postings_[static_cast<std::size_t>(f)]; }

    std::span<const DocId> postings(Field f, std::string_view term) const
    {
        const auto& dict = dictionary(f);
        if (auto it = dict.find(term); it != dict.end()) {
            return it->second;
        }
        return {};
    }

    // Rebuilds an index from persisted parts after checking the invariants
    // the reader cannot trust.
    static Index from_parts(IndexKind kind, std::vector<IndexedDoc> docs, std::array<Dictionary, 4> postings)
    {
        for (std::size_t i = 0; i < docs.size(); ++i) {
            if (docs[i].id != i) {
                throw argument_error("document ids are not dense: expected " + std::to_string(i) + ", found " +
                                     std::to_string(docs[i].id));
            }
        }
        for (const auto& dict : postings) {
            for (const auto& [term, list] : dict) {
                if (list.empty()) {
                    throw argument_error("empty posting list for term '" + term + "'");
                }
                for (std::size_t i = 0; i < list.size(); ++i) {
                    if (list[i] >= docs.size() || (i > 0 && list[i] <= list[i - 1])) {
                        throw argument_error("posting list for term '" + term + "' is not strictly increasing "
                                             "within the document range");
                    }
                }
            }
        }
        Index index(kind);
        index.docs_ = std::move(docs);
        index.postings_ = std::move(postings);
        return index;
    }

    friend bool operator==(const Index&, const Index&) = default;

private:
    IndexKind kind_ = IndexKind::Basic;
    std::vector<IndexedDoc> docs_;
    std::array<Dictionary, 4> postings_;
};

inline std::span<const DocId> postings(const Index& index, Field field, std::string_view term)
{
    return index.postings(field, term);
}

/// Statement documents for every edge, ordered by (dataset, attribute, value).
inline std::vector<StatementDoc> statement_docs(const Graph& graph)
{
    auto key = [&](const Edge* e) {
        const auto& t = graph.node(e->target);
        return std::tie(*graph.node(e->source).iri, graph.label(e->label), t.label, t.kind, t.key());
    };
    std::vector<const Edge*> order;
    order.reserve(graph.edge_count());
    for (const auto& e : graph.edges()) {
        order.push_back(&e);
    }
    std::sort(order.begin(), order.end(), [&](const Edge* a, const Edge* b) { return key(a) < key(b); });
    std::vector<StatementDoc> out;
    out.reserve(order.size());
    for (const auto* e : order) {
        const auto& s = graph.node(e->source);
        out.push_back({static_cast<DocId>(out.size()), *s.iri, s.label, graph.label(e->label),
                       graph.node(e->target).label});
    }
    return out;
}

inline Index index_basic(const Graph& graph)
{
    Index index(IndexKind::Basic);
    for (const auto& doc : statement_docs(graph)) {
        index.add(doc.to_indexed().fields);
    }
    return index;
}

// (Dataset, pattern), then per block (Dataset, Entity) and (Attribute, Value) pairs.
inline std::vector<FieldValue> flatten(const CompositeDoc& doc)
{
    std::vector<FieldValue> fields{{Field::Dataset, doc.pattern_dataset}};
    for (const auto& block : doc.blocks) {
        fields.push_back({Field::Dataset, block.dataset});
        fields.push_back({Field::Entity, block.entity});
        for (const auto& [attribute, value] : block.pairs) {
            fields.push_back({Field::Attribute, attribute});
            fields.push_back({Field::Value, value});
        }
    }
    return fields;
}

inline Index index_rules(std::span<const CompositeDoc> docs)
{
    Index index(IndexKind::Rules);
    for (const auto& doc : docs) {
        index.add(flatten(doc));
    }
    return index;
}

} // namespace ontoir
