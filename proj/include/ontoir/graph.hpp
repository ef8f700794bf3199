#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "error.hpp"

namespace ontoir {

// Substring after the last '#', else after the last '/', else the input.
inline std::string_view local_name(std::string_view iri) noexcept
{
    auto pos = iri.rfind('#');
    if (pos == std::string_view::npos) {
        pos = iri.rfind('/');
    }
    if (pos == std::string_view::npos) {
        return iri;
    }
    return iri.substr(pos + 1);
}

// Everything up to and including the separator local_name() cut at.
inline std::string_view namespace_of(std::string_view iri) noexcept
{
    return iri.substr(0, iri.size() - local_name(iri).size());
}

using NodeId = std::uint32_t;
using LabelId = std::uint32_t;

enum class NodeKind : std::uint8_t { Entity, Literal };

struct Node {
    NodeKind kind = NodeKind::Literal;
    std::string label;
    std::optional<std::string> iri;  // set iff kind == Entity

    bool is_entity() const noexcept { return kind == NodeKind::Entity; }
    // IRI for entities, lexical form for literals. Unique per kind.
    const std::string& key() const noexcept { return iri ? *iri : label; }

    friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
    NodeId source = 0;
    LabelId label = 0;
    NodeId target = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeHash {
    std::size_t operator()(const Edge& e) const noexcept
    {
        std::uint64_t h = e.source;
        h = h * 0x9E3779B97F4A7C15ULL ^ e.label;
        h = h * 0x9E3779B97F4A7C15ULL ^ e.target;
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

/// Labeled directed graph G = <V, A, lambda> over RDF statements.
///
/// Entity nodes are keyed by IRI, literal nodes by their lexical form, so the
/// same text used as both an IRI and a literal yields two distinct nodes.
/// Edge labels are predicate local names; the first predicate IRI seen for a
/// local name is kept for export. Edges have set semantics.
class Graph {
public:
    NodeId add_entity(std::string_view iri)
    {
        if (auto it = entities_.find(std::string(iri)); it != entities_.end()) {
            return it->second;
        }
        Node node{NodeKind::Entity, std::string(local_name(iri)), std::string(iri)};
        return insert_node(std::move(node), entities_);
    }

    NodeId add_literal(std::string_view text)
    {
        if (auto it = literals_.find(std::string(text)); it != literals_.end()) {
            return it->second;
        }
        Node node{NodeKind::Literal, std::string(text), std::nullopt};
        return insert_node(std::move(node), literals_);
    }

    // Interns the local name of `predicate_iri` as an edge label.
    LabelId add_label(std::string_view predicate_iri)
    {
        auto name = std::string(local_name(predicate_iri));
        if (auto it = label_ids_.find(name); it != label_ids_.end()) {
            return it->second;
        }
        auto id = static_cast<LabelId>(labels_.size());
        labels_.push_back(name);
        label_iris_.emplace_back(predicate_iri);
        label_ids_.emplace(std::move(name), id);
        edges_by_label_.emplace_back();
        return id;
    }

    // Returns false when the edge was already present.
    bool add_edge(NodeId source, LabelId label, NodeId target)
    {
        if (source >= nodes_.size() || target >= nodes_.size() || label >= labels_.size()) {
            throw argument_error("edge refers to an unknown node or label");
        }
        if (!nodes_[source].is_entity()) {
            throw argument_error("edge source must be an entity node: " + nodes_[source].label);
        }
        Edge edge{source, label, target};
        if (!edge_set_.insert(edge).second) {
            return false;
        }
        auto index = edges_.size();
        edges_.push_back(edge);
        out_[source].push_back(index);
        in_[target].push_back(index);
        edges_by_label_[label].push_back(index);
        return true;
    }

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const Node& node(NodeId id) const { return nodes_.at(id); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::size_t label_count() const noexcept { return labels_.size(); }

    // Edge indices into edges(), in insertion order.
    std::span<const std::size_t> out_edges(NodeId id) const { return out_.at(id); }
    std::span<const std::size_t> in_edges(NodeId id) const { return in_.at(id); }
    std::span<const std::size_t> edges_with_label(LabelId id) const { return edges_by_label_.at(id); }

    const std::string& label(LabelId id) const { return labels_.at(id); }
    const std::string& predicate_iri(LabelId id) const { return label_iris_.at(id); }

    bool contains(const Edge& edge) const { return edge_set_.contains(edge); }

    std::optional<LabelId> find_label(std::string_view name) const
    {
        if (auto it = label_ids_.find(std::string(name)); it != label_ids_.end()) {
            return it->second;
        }
        return std::nullopt;
    }

    std::optional<NodeId> find_entity(std::string_view iri) const
    {
        if (auto it = entities_.find(std::string(iri)); it != entities_.end()) {
            return it->second;
        }
        return std::nullopt;
    }

    std::optional<NodeId> find_literal(std::string_view text) const
    {
        if (auto it = literals_.find(std::string(text)); it != literals_.end()) {
            return it->second;
        }
        return std::nullopt;
    }

    // All nodes labeled `name`: entities first (by IRI), then the literal.
    std::vector<NodeId> find_by_label(std::string_view name) const
    {
        auto it = by_label_.find(std::string(name));
        if (it == by_label_.end()) {
            return {};
        }
        auto ids = it->second;
        std::sort(ids.begin(), ids.end(), [this](NodeId a, NodeId b) {
            const auto& x = nodes_[a];
            const auto& y = nodes_[b];
            return std::tie(x.kind, x.key()) < std::tie(y.kind, y.key());
        });
        return ids;
    }

    // L^V
    std::set<std::string> node_labels() const
    {
        std::set<std::string> out;
        for (const auto& n : nodes_) {
            out.insert(n.label);
        }
        return out;
    }

    // L^A, restricted to labels that occur on at least one edge.
    std::set<std::string> edge_labels() const
    {
        std::set<std::string> out;
        for (LabelId id = 0; id < labels_.size(); ++id) {
            if (!edges_by_label_[id].empty()) {
                out.insert(labels_[id]);
            }
        }
        return out;
    }

    // Most frequent namespace among entity IRIs (ties: bytewise smallest).
    std::string base_namespace() const
    {
        std::map<std::string_view, std::size_t> counts;
        for (const auto& n : nodes_) {
            if (n.is_entity()) {
                ++counts[namespace_of(*n.iri)];
            }
        }
        std::string_view best = "urn:ontoir#";
        std::size_t best_count = 0;
        for (const auto& [ns, count] : counts) {
            if (count > best_count && !ns.empty()) {
                best = ns;
                best_count = count;
            }
        }
        return std::string(best);
    }

    // (source IRI, predicate IRI, target kind, target key), sorted.
    using EdgeKey = std::tuple<std::string, std::string, NodeKind, std::string>;

    std::vector<EdgeKey> edge_keys() const
    {
        std::vector<EdgeKey> keys;
        keys.reserve(edges_.size());
        for (const auto& e : edges_) {
            const auto& t = nodes_[e.target];
            keys.emplace_back(nodes_[e.source].key(), label_iris_[e.label], t.kind, t.key());
        }
        std::sort(keys.begin(), keys.end());
        return keys;
    }

    // Equality is on content, independent of insertion order.
    friend bool operator==(const Graph& a, const Graph& b)
    {
        if (a.nodes_.size() != b.nodes_.size() || a.edges_.size() != b.edges_.size()) {
            return false;
        }
        auto node_keys = [](const Graph& g) {
            std::vector<std::pair<NodeKind, std::string>> keys;
            for (const auto& n : g.nodes_) {
                keys.emplace_back(n.kind, n.key());
            }
            std::sort(keys.begin(), keys.end());
            return keys;
        };
        return node_keys(a) == node_keys(b) && a.edge_keys() == b.edge_keys();
    }

private:
    NodeId insert_node(Node node, std::unordered_map<std::string, NodeId>& keyed)
    {
        auto id = static_cast<NodeId>(nodes_.size());
        keyed.emplace(node.key(), id);
        by_label_[node.label].push_back(id);
        nodes_.push_back(std::move(node));
        out_.emplace_back();
        in_.emplace_back();
        return id;
    }

    std::vector<Node> nodes_;
    std::unordered_map<std::string, NodeId> entities_;
    std::unordered_map<std::string, NodeId> literals_;
    std::unordered_map<std::string, std::vector<NodeId>> by_label_;

    std::vector<std::string> labels_;
    std::vector<std::string> label_iris_;
    std::unordered_map<std::string, LabelId> label_ids_;

    std::vector<Edge> edges_;
    std::unordered_set<Edge, EdgeHash> edge_set_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<std::vector<std::size_t>> in_;
    std::vector<std::vector<std::size_t>> edges_by_label_;
};

// One RDF statement. Objects are IRIs unless `object_is_literal`.
struct Triple {
    std::string subject;
    std::string predicate;
    std::string object;
    bool object_is_literal = false;

    friend auto operator<=>(const Triple&, const Triple&) = default;
};

inline Graph build_graph(std::span<const Triple> triples)
{
    Graph graph;
    for (const auto& t : triples) {
        auto s = graph.add_entity(t.subject);
        auto p = graph.add_label(t.predicate);
        auto o = t.object_is_literal ? graph.add_literal(t.object) : graph.add_entity(t.object);
        graph.add_edge(s, p, o);
    }
    return graph;
}

/// Entity description <e, A_e, V_e>: the outgoing edges of one entity and
/// the set of their targets.
struct EntityDescription {
    NodeId entity = 0;
    std::vector<Edge> attribute_edges;
    std::vector<NodeId> value_nodes;  // sorted, unique
};

inline EntityDescription entity_description(const Graph& graph, NodeId entity)
{
    if (entity >= graph.nodes().size() || !graph.node(entity).is_entity()) {
        throw not_found_error("no entity node with id " + std::to_string(entity));
    }
    EntityDescription desc{entity, {}, {}};
    for (auto index : graph.out_edges(entity)) {
        const auto& e = graph.edges()[index];
        desc.attribute_edges.push_back(e);
        desc.value_nodes.push_back(e.target);
    }
    std::sort(desc.value_nodes.begin(), desc.value_nodes.end());
    desc.value_nodes.erase(std::unique(desc.value_nodes.begin(), desc.value_nodes.end()), desc.value_nodes.end());
    return desc;
}

// Several entities may share a local name; the one with the smallest IRI wins.
inline EntityDescription entity_description(const Graph& graph, std::string_view entity_label)
{
    for (auto id : graph.find_by_label(entity_label)) {
        if (graph.node(id).is_entity()) {
            return entity_description(graph, id);
        }
    }
    throw not_found_error("no entity labeled '" + std::string(entity_label) + "'");
}

/// Per-entity slice D of the graph, labeled by the entity's IRI.
struct Dataset {
    std::string label;
    NodeId entity = 0;
    std::vector<NodeId> nodes;         // V_D: the entity and its value nodes
    std::vector<NodeId> entity_nodes;  // V_D^E
    std::vector<Edge> edges;           // A_D
    std::set<std::string> entity_labels;  // L_D^E
    std::set<std::string> node_labels;    // L_D^V
};

inline std::vector<Dataset> datasets(const Graph& graph)
{
    std::vector<Dataset> out;
    for (NodeId id = 0; id < graph.nodes().size(); ++id) {
        const auto& node = graph.node(id);
        if (!node.is_entity() || graph.out_edges(id).empty()) {
            continue;
        }
        auto desc = entity_description(graph, id);
        Dataset ds;
        ds.label = *node.iri;
        ds.entity = id;
        ds.edges = std::move(desc.attribute_edges);
        ds.nodes = std::move(desc.value_nodes);
        ds.nodes.insert(std::lower_bound(ds.nodes.begin(), ds.nodes.end(), id), id);
        ds.nodes.erase(std::unique(ds.nodes.begin(), ds.nodes.end()), ds.nodes.end());
        for (auto n : ds.nodes) {
            const auto& v = graph.node(n);
            ds.node_labels.insert(v.label);
            if (v.is_entity()) {
                ds.entity_nodes.push_back(n);
                ds.entity_labels.insert(v.label);
            }
        }
        out.push_back(std::move(ds));
    }
    std::sort(out.begin(), out.end(), [](const Dataset& a, const Dataset& b) { return a.label < b.label; });
    return out;
}

} // namespace ontoir
