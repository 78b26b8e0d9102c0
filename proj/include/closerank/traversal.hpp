#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "closerank/error.hpp"
#include "closerank/graph.hpp"
#include "closerank/parallel.hpp"

namespace closerank {

/// Reusable scratch space for repeated traversals of one graph. Visited marks
/// are epoch-stamped so consecutive traversals need no clearing pass.
class BfsWorkspace {
public:
    explicit BfsWorkspace(const Graph& g) : queue_(g.node_count()), stamp_(g.node_count(), 0) {}

    /// Result of the last run(). `order()` lists reached nodes level by level.
    struct Scan {
        std::uint64_t distance_sum = 0;
        std::uint32_t eccentricity = 0;
        NodeId reached = 0;
        NodeId last_level_begin = 0;
    };

    /// Breadth-first traversal from `source`. When `distance` is non-empty it
    /// receives per-node levels for every reached node.
    Scan run(const Graph& g, NodeId source, std::span<std::uint32_t> distance = {}) {
        if (++epoch_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 1;
        }
        Scan scan;
        NodeId tail = 0;
        queue_[tail++] = source;
        stamp_[source] = epoch_;
        if (!distance.empty()) distance[source] = 0;

        NodeId head = 0;
        NodeId level_end = 1;
        std::uint32_t level = 0;
        while (head < tail) {
            for (; head < level_end; ++head) {
                const NodeId u = queue_[head];
                for (NodeId v : g.neighbors(u)) {
                    if (stamp_[v] == epoch_) continue;
                    stamp_[v] = epoch_;
                    queue_[tail++] = v;
                    if (!distance.empty()) distance[v] = level + 1;
                }
            }
            if (tail > level_end) {
                ++level;
                scan.distance_sum += std::uint64_t{level} * (tail - level_end);
                scan.last_level_begin = level_end;
                level_end = tail;
            }
        }
        scan.eccentricity = level;
        scan.reached = tail;
        return scan;
    }

    std::span<const NodeId> order(const Scan& scan) const { return {queue_.data(), scan.reached}; }

private:
    std::vector<NodeId> queue_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
};

/// Closeness C(u) = (n-1) / sum of distances, from an exact integer sum.
inline double closeness_from_sum(NodeId n, std::uint64_t distance_sum) {
    return static_cast<double>(n - 1) / static_cast<double>(distance_sum);
}

/// Unweighted shortest-path distance from `source` to every node.
inline std::vector<std::uint32_t> bfs_levels(const Graph& g, NodeId source) {
    g.check_node(source);
    BfsWorkspace ws(g);
    std::vector<std::uint32_t> distance(g.node_count());
    const auto scan = ws.run(g, source, distance);
    if (scan.reached != g.node_count()) throw NotConnectedError();
    return distance;
}

namespace detail {
inline void require_closeness_domain(const Graph& g, NodeId u) {
    g.check_node(u);
    if (g.node_count() < 2) throw DomainError("closeness needs at least 2 nodes");
}
}  // namespace detail

inline double closeness(const Graph& g, NodeId u, BfsWorkspace& ws) {
    detail::require_closeness_domain(g, u);
    const auto scan = ws.run(g, u);
    if (scan.reached != g.node_count()) throw NotConnectedError();
    return closeness_from_sum(g.node_count(), scan.distance_sum);
}

inline double closeness(const Graph& g, NodeId u) {
    BfsWorkspace ws(g);
    return closeness(g, u, ws);
}

/// One instrumented traversal: closeness of the source plus what the
/// rank estimators read off the same sweep.
struct ClosenessProbe {
    NodeId source = 0;
    double closeness = 0.0;
    std::uint64_t distance_sum = 0;
    /// Highest-degree node reached (smallest id on ties).
    NodeId max_degree_node = 0;
    /// Nodes at distance `eccentricity` from the source, ascending.
    std::vector<NodeId> farthest_nodes;
    std::uint32_t eccentricity = 0;
};

inline ClosenessProbe closeness_probe(const Graph& g, NodeId u, BfsWorkspace& ws) {
    detail::require_closeness_domain(g, u);
    const auto scan = ws.run(g, u);
    if (scan.reached != g.node_count()) throw NotConnectedError();

    ClosenessProbe probe;
    probe.source = u;
    probe.distance_sum = scan.distance_sum;
    probe.closeness = closeness_from_sum(g.node_count(), scan.distance_sum);
    probe.eccentricity = scan.eccentricity;

    const auto order = ws.order(scan);
    NodeId best = order[0];
    for (NodeId v : order) {
        const auto dv = g.degree_unchecked(v);
        const auto db = g.degree_unchecked(best);
        if (dv > db || (dv == db && v < best)) best = v;
    }
    probe.max_degree_node = best;
    probe.farthest_nodes.assign(order.begin() + scan.last_level_begin, order.end());
    std::sort(probe.farthest_nodes.begin(), probe.farthest_nodes.end());
    return probe;
}

inline ClosenessProbe closeness_probe(const Graph& g, NodeId u) {
    BfsWorkspace ws(g);
    return closeness_probe(g, u, ws);
}

/// Exact distance sum of every node; one traversal per source, spread over
/// `threads` workers (0 = default). The result does not depend on `threads`.
inline std::vector<std::uint64_t> distance_sums_all(const Graph& g, unsigned threads = 0) {
    if (g.node_count() < 2) throw DomainError("closeness needs at least 2 nodes");
    std::vector<std::uint64_t> sums(g.node_count());
    parallel_for(
        g.node_count(), threads, [&] { return BfsWorkspace(g); },
        [&](BfsWorkspace& ws, std::size_t i) {
            const auto scan = ws.run(g, static_cast<NodeId>(i));
            if (scan.reached != g.node_count()) throw NotConnectedError();
            sums[i] = scan.distance_sum;
        });
    return sums;
}

/// Closeness of every node: the O(n·m) classical computation.
inline std::vector<double> closeness_all(const Graph& g, unsigned threads = 0) {
    const auto sums = distance_sums_all(g, threads);
    std::vector<double> out(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i) out[i] = closeness_from_sum(g.node_count(), sums[i]);
    return out;
}

}  // namespace closerank
