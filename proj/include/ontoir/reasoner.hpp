#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "rules.hpp"

namespace ontoir {

struct InferenceStats {
    std::size_t input_edges = 0;
    std::size_t added_edges = 0;
    std::size_t iterations = 0;
};

inline constexpr std::size_t max_fixpoint_iterations = 10'000;

namespace detail {

// Variables are numbered per rule; a slot holds a node id or a label id.
struct compiled_term {
    PatternTerm::Kind kind = PatternTerm::Kind::Name;
    std::string text;
    int slot = -1;
};

struct compiled_atom {
    compiled_term subject;
    compiled_term predicate;
    compiled_term object;
};

struct compiled_rule {
    compiled_atom head;
    std::vector<compiled_atom> body;
    std::size_t slots = 0;
};

inline compiled_rule compile(const Rule& rule)
{
    compiled_rule out;
    std::unordered_map<std::string, int> slots;
    auto term = [&](const PatternTerm& t) {
        compiled_term c{t.kind, t.text, -1};
        if (t.is_variable()) {
            auto [it, inserted] = slots.emplace(t.text, static_cast<int>(slots.size()));
            c.slot = it->second;
        }
        return c;
    };
    auto atom = [&](const TriplePattern& p) {
        return compiled_atom{term(p.subject), term(p.predicate), term(p.object)};
    };
    for (const auto& b : rule.body) {
        out.body.push_back(atom(b));
    }
    out.head = atom(rule.head);
    out.slots = slots.size();
    return out;
}

class fixpoint {
public:
    fixpoint(Graph& graph, std::span<const Rule> rules) : graph_(graph), namespace_(graph.base_namespace())
    {
        for (const auto& r : rules) {
            rules_.push_back(compile(r));
        }
    }

    InferenceStats run()
    {
        InferenceStats stats;
        stats.input_edges = graph_.edge_count();
        std::size_t delta_begin = 0;
        while (true) {
            std::size_t delta_end = graph_.edge_count();
            if (delta_begin == delta_end || rules_.empty()) {
                break;
            }
            if (++stats.iterations > max_fixpoint_iterations) {
                throw divergence_error("fixpoint not reached after " + std::to_string(max_fixpoint_iterations) +
                                       " iterations");
            }
            pending_.clear();
            for (const auto& rule : rules_) {
                // Semi-naive: at least one body atom must match a delta edge.
                for (std::size_t pivot = 0; pivot < rule.body.size(); ++pivot) {
                    std::vector<std::uint32_t> binding(rule.slots, unbound);
                    round_ = {delta_begin, delta_end, pivot};
                    join(rule, pivot, binding, 0, true);
                }
            }
            for (const auto& p : pending_) {
                insert(p);
            }
            delta_begin = delta_end;
        }
        stats.added_edges = graph_.edge_count() - stats.input_edges;
        return stats;
    }

private:
    static constexpr std::uint32_t unbound = 0xFFFFFFFFu;

    struct round_state {
        std::size_t delta_begin = 0;
        std::size_t delta_end = 0;
        std::size_t pivot = 0;
    };

    struct pending_edge {
        const compiled_atom* head;
        std::uint32_t source;
        std::uint32_t label;
        std::uint32_t target;
    };

    bool node_matches(const compiled_term& t, NodeId id) const
    {
        const auto& n = graph_.node(id);
        switch (t.kind) {
        case PatternTerm::Kind::Name: return n.label == t.text;
        case PatternTerm::Kind::Iri: return n.is_entity() && *n.iri == t.text;
        case PatternTerm::Kind::Literal: return !n.is_entity() && n.label == t.text;
        case PatternTerm::Kind::Variable: break;
        }
        return true;
    }

    bool label_matches(const compiled_term& t, LabelId id) const
    {
        if (t.kind == PatternTerm::Kind::Variable) {
            return true;
        }
        auto name = t.kind == PatternTerm::Kind::Iri ? local_name(t.text) : std::string_view(t.text);
        return graph_.label(id) == name;
    }

    // Binds or checks one term against a value; records newly bound slots.
    static bool unify(const compiled_term& t, std::uint32_t value, std::vector<std::uint32_t>& binding,
                      std::vector<int>& touched)
    {
        if (t.slot < 0) {
            return true;
        }
        auto& slot = binding[static_cast<std::size_t>(t.slot)];
        if (slot == unbound) {
            slot = value;
            touched.push_back(t.slot);
            return true;
        }
        return slot == value;
    }

    // Candidate edge indices for an atom under the current binding.
    std::span<const std::size_t> candidates(const compiled_atom& a, const std::vector<std::uint32_t>& binding,
                                            std::vector<std::size_t>& scratch) const
    {
        auto bound_node = [&](const compiled_term& t) -> std::optional<NodeId> {
            if (t.slot >= 0 && binding[static_cast<std::size_t>(t.slot)] != unbound) {
                return binding[static_cast<std::size_t>(t.slot)];
            }
            if (t.kind == PatternTerm::Kind::Iri) {
                return graph_.find_entity(t.text);
            }
            return std::nullopt;
        };
        if (auto s = bound_node(a.subject)) {
            return graph_.out_edges(*s);
        }
        if (a.subject.kind == PatternTerm::Kind::Iri) {
            return {};
        }
        if (auto o = bound_node(a.object)) {
            return graph_.in_edges(*o);
        }
        if (a.object.kind == PatternTerm::Kind::Iri) {
            return {};
        }
        std::optional<LabelId> label;
        if (a.predicate.slot >= 0 && binding[static_cast<std::size_t>(a.predicate.slot)] != unbound) {
            label = binding[static_cast<std::size_t>(a.predicate.slot)];
        } else if (a.predicate.slot < 0) {
            auto name = a.predicate.kind == PatternTerm::Kind::Iri ? local_name(a.predicate.text)
                                                                   : std::string_view(a.predicate.text);
            label = graph_.find_label(name);
            if (!label) {
                return {};
            }
        }
        if (label) {
            return graph_.edges_with_label(*label);
        }
        scratch.resize(graph_.edge_count());
        for (std::size_t i = 0; i < scratch.size(); ++i) {
            scratch[i] = i;
        }
        return scratch;
    }

    void join(const compiled_rule& rule, std::size_t pivot, std::vector<std::uint32_t>& binding, std::size_t step,
              bool first)
    {
        if (step == rule.body.size()) {
            derive(rule.head, binding);
            return;
        }
        // The pivot atom is matched first, against the delta only.
        std::size_t index = first ? pivot : (step <= pivot ? step - 1 : step);
        const auto& atom = rule.body[index];
        bool is_delta = index == pivot;
        std::vector<std::size_t> scratch;
        auto edges = candidates(atom, binding, scratch);
        for (auto e : edges) {
            if (e >= round_.delta_end || (is_delta && e < round_.delta_begin)) {
                continue;
            }
            const auto& edge = graph_.edges()[e];
            if (!node_matches(atom.subject, edge.source) || !label_matches(atom.predicate, edge.label) ||
                !node_matches(atom.object, edge.target)) {
                continue;
            }
            std::vector<int> touched;
            if (unify(atom.subject, edge.source, binding, touched) &&
                unify(atom.predicate, edge.label, binding, touched) &&
                unify(atom.object, edge.target, binding, touched)) {
                join(rule, pivot, binding, step + 1, false);
            }
            for (auto slot : touched) {
                binding[static_cast<std::size_t>(slot)] = unbound;
            }
        }
    }

    NodeId resolve_node(const compiled_term& t, bool subject)
    {
        switch (t.kind) {
        case PatternTerm::Kind::Iri: return graph_.add_entity(t.text);
        case PatternTerm::Kind::Literal: return graph_.add_literal(t.text);
        default: break;
        }
        // Bare names prefer an existing entity, then (objects only) a literal.
        for (auto id : graph_.find_by_label(t.text)) {
            if (graph_.node(id).is_entity() || !subject) {
                return id;
            }
        }
        return graph_.add_entity(namespace_ + t.text);
    }

    LabelId resolve_label(const compiled_term& t)
    {
        if (t.kind == PatternTerm::Kind::Iri) {
            return graph_.add_label(t.text);
        }
        if (auto id = graph_.find_label(t.text)) {
            return *id;
        }
        return graph_.add_label(namespace_ + t.text);
    }

    // Nodes for head constants are created after the round, so the spans
    // handed out by the graph stay valid while joining.
    void derive(const compiled_atom& head, const std::vector<std::uint32_t>& binding)
    {
        auto value = [&](const compiled_term& t) -> std::uint32_t {
            return t.slot >= 0 ? binding[static_cast<std::size_t>(t.slot)] : unbound;
        };
        pending_edge p{&head, value(head.subject), value(head.predicate), value(head.object)};
        if (p.source != unbound && !graph_.node(p.source).is_entity()) {
            return;  // a literal cannot be a subject
        }
        if (p.source != unbound && p.label != unbound && p.target != unbound &&
            graph_.contains({p.source, p.label, p.target})) {
            return;
        }
        pending_.push_back(p);
    }

    void insert(const pending_edge& p)
    {
        NodeId s = p.source != unbound ? p.source : resolve_node(p.head->subject, true);
        if (!graph_.node(s).is_entity()) {
            return;
        }
        LabelId l = p.label != unbound ? p.label : resolve_label(p.head->predicate);
        NodeId t = p.target != unbound ? p.target : resolve_node(p.head->object, false);
        graph_.add_edge(s, l, t);
    }

    Graph& graph_;
    std::string namespace_;
    std::vector<compiled_rule> rules_;
    std::vector<pending_edge> pending_;
    round_state round_;
};

} // namespace detail

/// Least fixpoint of `rules` over `graph`, by semi-naive forward chaining.
/// Rule heads naming constants absent from the graph create the nodes, with
/// IRIs minted in the graph's base namespace.
inline Graph apply_rules(const Graph& graph, std::span<const Rule> rules, InferenceStats* stats = nullptr)
{
    Graph out = graph;
    auto result = detail::fixpoint(out, rules).run();
    if (stats) {
        *stats = result;
    }
    return out;
}

} // namespace ontoir
