#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "closerank/error.hpp"

namespace closerank {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected, unweighted graph in compressed sparse row form.
///
/// Neighbor lists are sorted and free of self-loops and duplicates; the
/// adjacency is symmetric, so every undirected edge is stored twice.
/// Internal ids are dense in [0, node_count()). When the graph was read from
/// a file, `label(u)` gives the identifier used in that file.
class Graph {
public:
    Graph() : offsets_{0} {}

    /// Builds a graph on `node_count` nodes from an arbitrary edge list.
    /// Self-loops are dropped; duplicates and reciprocal pairs are merged.
    /// `labels` is either empty or holds one label per node.
    static Graph from_edges(NodeId node_count, std::span<const Edge> edges,
                            std::vector<std::string> labels = {}) {
        if (!labels.empty() && labels.size() != node_count)
            throw DomainError("label count does not match node count");

        std::vector<std::uint64_t> counts(std::size_t{node_count} + 1, 0);
        for (auto [u, v] : edges) {
            if (u >= node_count || v >= node_count) throw DomainError("edge endpoint out of range");
            if (u == v) continue;
            ++counts[u + 1];
            ++counts[v + 1];
        }
        for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];

        std::vector<NodeId> scratch(counts.back());
        std::vector<std::uint64_t> cursor(counts.begin(), counts.end() - 1);
        for (auto [u, v] : edges) {
            if (u == v) continue;
            scratch[cursor[u]++] = v;
            scratch[cursor[v]++] = u;
        }

        Graph g;
        g.offsets_.assign(std::size_t{node_count} + 1, 0);
        g.neighbors_.reserve(scratch.size());
        for (NodeId u = 0; u < node_count; ++u) {
            auto first = scratch.begin() + static_cast<std::ptrdiff_t>(counts[u]);
            auto last = scratch.begin() + static_cast<std::ptrdiff_t>(counts[u + 1]);
            std::sort(first, last);
            last = std::unique(first, last);
            g.neighbors_.insert(g.neighbors_.end(), first, last);
            g.offsets_[u + 1] = g.neighbors_.size();
        }
        g.neighbors_.shrink_to_fit();
        g.labels_ = std::move(labels);
        return g;
    }

    NodeId node_count() const noexcept { return static_cast<NodeId>(offsets_.size() - 1); }
    std::uint64_t edge_count() const noexcept { return neighbors_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId u) const noexcept {
        return {neighbors_.data() + offsets_[u], neighbors_.data() + offsets_[u + 1]};
    }

    std::uint32_t degree_unchecked(NodeId u) const noexcept {
        return static_cast<std::uint32_t>(offsets_[u + 1] - offsets_[u]);
    }

    std::uint32_t degree(NodeId u) const {
        check_node(u);
        return degree_unchecked(u);
    }

    void check_node(NodeId u) const {
        if (u >= node_count())
            throw DomainError("node " + std::to_string(u) + " out of range [0, " +
                              std::to_string(node_count()) + ")");
    }

    bool has_labels() const noexcept { return !labels_.empty(); }
    std::span<const std::string> labels() const noexcept { return labels_; }

    /// Source-file identifier of `u`, or its decimal internal id when the
    /// graph carries no labels.
    std::string label(NodeId u) const {
        check_node(u);
        return labels_.empty() ? std::to_string(u) : labels_[u];
    }

    std::optional<NodeId> find_label(std::string_view name) const {
        if (labels_.empty()) {
            NodeId id = 0;
            for (char ch : name) {
                if (ch < '0' || ch > '9') return std::nullopt;
                id = id * 10 + static_cast<NodeId>(ch - '0');
                if (id >= node_count()) return std::nullopt;
            }
            if (name.empty()) return std::nullopt;
            return id;
        }
        for (NodeId u = 0; u < node_count(); ++u)
            if (labels_[u] == name) return u;
        return std::nullopt;
    }

    /// Each undirected edge once, as (u, v) with u < v, ordered by u then v.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(edge_count());
        for (NodeId u = 0; u < node_count(); ++u)
            for (NodeId v : neighbors(u))
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    std::span<const std::uint64_t> offsets() const noexcept { return offsets_; }
    std::span<const NodeId> adjacency() const noexcept { return neighbors_; }

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::uint64_t> offsets_;
    std::vector<NodeId> neighbors_;
    std::vector<std::string> labels_;
};

/// Node with the largest degree; ties go to the smallest id.
inline NodeId max_degree_node(const Graph& g) {
    if (g.node_count() == 0) throw DomainError("empty graph");
    NodeId best = 0;
    for (NodeId u = 1; u < g.node_count(); ++u)
        if (g.degree_unchecked(u) > g.degree_unchecked(best)) best = u;
    return best;
}

/// Component id per node, numbered in order of each component's smallest node.
inline std::vector<NodeId> connected_components(const Graph& g, NodeId* component_count = nullptr) {
    constexpr NodeId unset = UINT32_MAX;
    std::vector<NodeId> comp(g.node_count(), unset);
    std::vector<NodeId> stack;
    NodeId next = 0;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        if (comp[s] != unset) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : g.neighbors(u)) {
                if (comp[v] == unset) {
                    comp[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    if (component_count) *component_count = next;
    return comp;
}

/// Subgraph induced by `keep` (ascending, distinct node ids), renumbered
/// 0..keep.size()-1 in that order. Labels follow their nodes.
inline Graph induced_subgraph(const Graph& g, std::span<const NodeId> keep) {
    constexpr NodeId absent = UINT32_MAX;
    std::vector<NodeId> remap(g.node_count(), absent);
    for (std::size_t i = 0; i < keep.size(); ++i) remap[keep[i]] = static_cast<NodeId>(i);

    std::vector<Edge> edges;
    for (NodeId u : keep)
        for (NodeId v : g.neighbors(u))
            if (u < v && remap[v] != absent) edges.emplace_back(remap[u], remap[v]);

    std::vector<std::string> labels;
    if (g.has_labels()) {
        labels.reserve(keep.size());
        for (NodeId u : keep) labels.push_back(g.labels()[u]);
    }
    return Graph::from_edges(static_cast<NodeId>(keep.size()), edges, std::move(labels));
}

/// Largest connected component, renumbered preserving relative id order.
/// Among equally large components the one holding the smallest id wins.
inline Graph largest_connected_component(const Graph& g) {
    if (g.node_count() == 0) throw DomainError("empty graph");
    NodeId count = 0;
    const auto comp = connected_components(g, &count);
    if (count == 1) return g;

    std::vector<std::uint64_t> sizes(count, 0);
    for (NodeId c : comp) ++sizes[c];
    const auto best = static_cast<NodeId>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

    std::vector<NodeId> keep;
    keep.reserve(sizes[best]);
    for (NodeId u = 0; u < g.node_count(); ++u)
        if (comp[u] == best) keep.push_back(u);
    return induced_subgraph(g, keep);
}

inline bool is_connected(const Graph& g) {
    if (g.node_count() == 0) return false;
    NodeId count = 0;
    connected_components(g, &count);
    return count == 1;
}

}  // namespace closerank
