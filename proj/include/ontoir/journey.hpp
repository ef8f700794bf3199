#pragma once

#include <algorithm>
#include <deque>
#include <string>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "rules.hpp"

namespace ontoir {

struct AttributeValue {
    std::string attribute;
    std::string value;

    friend auto operator<=>(const AttributeValue&, const AttributeValue&) = default;
};

struct Block {
    std::string dataset;
    std::string entity;
    std::vector<AttributeValue> pairs;

    friend bool operator==(const Block&, const Block&) = default;
};

/// One materialized journey pattern: the path stops in order, then every
/// entity attached to a stop through one of the attach predicates.
struct CompositeDoc {
    std::string pattern_dataset;
    std::vector<Block> blocks;
    std::size_t path_length = 0;  // number of leading blocks that are path stops

    friend bool operator==(const CompositeDoc&, const CompositeDoc&) = default;
};

namespace detail {

inline bool node_less(const Graph& g, NodeId a, NodeId b)
{
    const auto& x = g.node(a);
    const auto& y = g.node(b);
    return std::tie(x.label, x.key()) < std::tie(y.label, y.key());
}

// Literal-valued pairs sorted, then attach pairs in config order.
inline Block path_block(const Graph& g, NodeId id, const std::vector<LabelId>& attach, std::vector<NodeId>& attached)
{
    const auto& node = g.node(id);
    Block block{*node.iri, node.label, {}};
    std::vector<AttributeValue> literal_pairs;
    for (auto e : g.out_edges(id)) {
        const auto& edge = g.edges()[e];
        if (!g.node(edge.target).is_entity()) {
            literal_pairs.push_back({g.label(edge.label), g.node(edge.target).label});
        }
    }
    std::sort(literal_pairs.begin(), literal_pairs.end());
    block.pairs = std::move(literal_pairs);
    for (auto label : attach) {
        std::vector<NodeId> targets;
        for (auto e : g.out_edges(id)) {
            const auto& edge = g.edges()[e];
            if (edge.label == label && g.node(edge.target).is_entity()) {
                targets.push_back(edge.target);
            }
        }
        std::sort(targets.begin(), targets.end(), [&](NodeId a, NodeId b) { return node_less(g, a, b); });
        for (auto t : targets) {
            block.pairs.push_back({g.label(label), g.node(t).label});
            attached.push_back(t);
        }
    }
    return block;
}

inline Block attachment_block(const Graph& g, NodeId id)
{
    const auto& node = g.node(id);
    Block block{*node.iri, node.label, {}};
    for (auto e : g.out_edges(id)) {
        const auto& edge = g.edges()[e];
        if (!g.node(edge.target).is_entity()) {
            block.pairs.push_back({g.label(edge.label), g.node(edge.target).label});
        }
    }
    std::sort(block.pairs.begin(), block.pairs.end());
    return block;
}

} // namespace detail

/// Emits one document per ordered pair of distinct entities joined by a path
/// of 1..max_hops `path_predicate` edges. Paths are the first shortest path
/// found by BFS visiting neighbours in (label, IRI) order; output is sorted by
/// (origin, destination).
inline std::vector<CompositeDoc> materialize_journey_patterns(const Graph& graph, const PatternConfig& config)
{
    std::vector<CompositeDoc> out;
    auto path_label = graph.find_label(config.path_predicate);
    if (!path_label) {
        return out;
    }
    std::vector<LabelId> attach;
    for (const auto& name : config.attach_predicates) {
        if (auto id = graph.find_label(name); id && std::find(attach.begin(), attach.end(), *id) == attach.end()) {
            attach.push_back(*id);
        }
    }
    const auto pattern_dataset = graph.base_namespace() + config.pattern_label;

    std::vector<NodeId> origins;
    for (auto e : graph.edges_with_label(*path_label)) {
        origins.push_back(graph.edges()[e].source);
    }
    std::sort(origins.begin(), origins.end(), [&](NodeId a, NodeId b) { return detail::node_less(graph, a, b); });
    origins.erase(std::unique(origins.begin(), origins.end()), origins.end());

    auto neighbours = [&](NodeId id) {
        std::vector<NodeId> next;
        for (auto e : graph.out_edges(id)) {
            const auto& edge = graph.edges()[e];
            if (edge.label == *path_label && graph.node(edge.target).is_entity()) {
                next.push_back(edge.target);
            }
        }
        std::sort(next.begin(), next.end(), [&](NodeId a, NodeId b) { return detail::node_less(graph, a, b); });
        return next;
    };

    for (auto origin : origins) {
        std::unordered_map<NodeId, std::pair<NodeId, std::size_t>> parent;  // node -> (previous, hops)
        parent.emplace(origin, std::pair{origin, std::size_t{0}});
        std::deque<NodeId> queue{origin};
        std::vector<NodeId> reached;
        while (!queue.empty()) {
            auto current = queue.front();
            queue.pop_front();
            auto hops = parent.at(current).second;
            if (hops == config.max_hops) {
                continue;
            }
            for (auto next : neighbours(current)) {
                if (parent.emplace(next, std::pair{current, hops + 1}).second) {
                    reached.push_back(next);
                    queue.push_back(next);
                }
            }
        }
        std::sort(reached.begin(), reached.end(), [&](NodeId a, NodeId b) { return detail::node_less(graph, a, b); });

        for (auto destination : reached) {
            std::vector<NodeId> path{destination};
            while (path.back() != origin) {
                path.push_back(parent.at(path.back()).first);
            }
            std::reverse(path.begin(), path.end());

            CompositeDoc doc{pattern_dataset, {}, path.size()};
            std::vector<NodeId> attached;
            for (auto stop : path) {
                doc.blocks.push_back(detail::path_block(graph, stop, attach, attached));
            }
            std::unordered_set<NodeId> seen(path.begin(), path.end());
            for (auto id : attached) {
                if (seen.insert(id).second) {
                    doc.blocks.push_back(detail::attachment_block(graph, id));
                }
            }
            out.push_back(std::move(doc));
        }
    }
    return out;
}

inline std::vector<CompositeDoc> materialize_journey_patterns(const Graph& graph,
                                                              std::span<const PatternConfig> configs)
{
    std::vector<CompositeDoc> out;
    for (const auto& config : configs) {
        auto docs = materialize_journey_patterns(graph, config);
        out.insert(out.end(), std::make_move_iterator(docs.begin()), std::make_move_iterator(docs.end()));
    }
    return out;
}

} // namespace ontoir
