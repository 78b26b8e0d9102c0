#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "closerank/error.hpp"
#include "closerank/graph.hpp"
#include "closerank/parallel.hpp"
#include "closerank/rng.hpp"
#include "closerank/traversal.hpp"

namespace closerank {

/// Slope used when none is supplied: mean hill slope measured on ten
/// large social networks.
inline constexpr double default_slope = 13.38;

/// Sigmoid relating closeness to rank. Reverse rank (1 = least central)
/// rises from 1 to n, crossing (n+1)/2 at closeness `c_mid` with hill slope `p`.
struct LogisticParams {
    std::uint64_t n = 2;
    double c_mid = 1.0;
    double p = default_slope;

    void validate() const {
        if (n < 2) throw DomainError("logistic model needs n >= 2");
        if (!(c_mid > 0.0) || !std::isfinite(c_mid)) throw DomainError("c_mid must be positive");
        if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("slope p must be positive");
    }

    friend bool operator==(const LogisticParams&, const LogisticParams&) = default;
};

namespace detail {
/// (n-1) / (1 + (c/c_mid)^p): the part shared by rank and reverse rank.
inline double logistic_span(const LogisticParams& m, double c) {
    if (!(c > 0.0)) throw DomainError("closeness must be positive");
    const double s = std::pow(c / m.c_mid, m.p);
    return static_cast<double>(m.n - 1) / (1.0 + s);
}
}  // namespace detail

/// R_rev(c) = n + (1 - n) / (1 + (c / c_mid)^p); increasing in c.
inline double reverse_rank(const LogisticParams& m, double c) { return static_cast<double>(m.n) - detail::logistic_span(m, c); }

/// R(c) = 1 + (n - 1) / (1 + (c / c_mid)^p) = n + 1 - R_rev(c); decreasing in c.
inline double rank_from_closeness(const LogisticParams& m, double c) { return 1.0 + detail::logistic_span(m, c); }

/// Competition ranking by decreasing value: rank(u) = 1 + #{v : x[v] > x[u]}.
inline std::vector<std::uint32_t> exact_ranks(std::span<const double> values) {
    std::vector<std::uint32_t> order(values.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return values[a] > values[b]; });

    std::vector<std::uint32_t> rank(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const bool tied = i > 0 && values[order[i]] == values[order[i - 1]];
        rank[order[i]] = tied ? rank[order[i - 1]] : static_cast<std::uint32_t>(i + 1);
    }
    return rank;
}

/// Reverse ranks n - R + 1 of a closeness profile (1 = least central).
inline std::vector<double> exact_reverse_ranks(std::span<const double> values) {
    const auto ranks = exact_ranks(values);
    std::vector<double> out(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i)
        out[i] = static_cast<double>(values.size()) - static_cast<double>(ranks[i]) + 1.0;
    return out;
}

enum class Method { exact, heuristic, randomized, bestfit };

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::heuristic: return "heuristic";
        case Method::randomized: return "randomized";
        case Method::bestfit: return "bestfit";
    }
    return "?";
}

inline std::optional<Method> parse_method(std::string_view s) {
    for (Method m : {Method::exact, Method::heuristic, Method::randomized, Method::bestfit})
        if (to_string(m) == s) return m;
    return std::nullopt;
}

/// Curve parameters estimated by the three-traversal heuristic.
struct HeuristicCurve {
    LogisticParams params;
    NodeId hub = 0;  ///< highest-degree node, stands in for the most central node
    double c_max = 0.0;
    NodeId periphery = 0;  ///< random node at maximum distance from the hub
    double c_min = 0.0;
    std::size_t farthest_count = 0;
};

/// Estimates c_mid as the midpoint of the hub's closeness and the closeness
/// of one uniformly drawn node on the hub's last BFS level. Two traversals.
inline HeuristicCurve heuristic_curve(const Graph& g, NodeId hub, double p, std::uint64_t seed,
                                      BfsWorkspace& ws) {
    const auto probe = closeness_probe(g, hub, ws);
    Rng rng(seed);
    const NodeId periphery = probe.farthest_nodes[rng.below(probe.farthest_nodes.size())];

    HeuristicCurve curve;
    curve.hub = hub;
    curve.c_max = probe.closeness;
    curve.periphery = periphery;
    curve.c_min = closeness(g, periphery, ws);
    curve.farthest_count = probe.farthest_nodes.size();
    curve.params = {g.node_count(), (curve.c_max + curve.c_min) / 2.0, p};
    curve.params.validate();
    return curve;
}

/// Curve parameters estimated from a uniform node sample.
struct RandomizedCurve {
    LogisticParams params;
    std::vector<NodeId> sample;  ///< ascending
};

/// Estimates c_mid as the mean closeness of k distinct nodes drawn uniformly
/// (the queried node is not excluded). The sample is fixed by `seed` before
/// any traversal and summed in ascending id order, so `threads` cannot
/// change the result.
inline RandomizedCurve randomized_curve(const Graph& g, double p, std::uint32_t k, std::uint64_t seed,
                                        unsigned threads = 1) {
    if (k == 0) throw DomainError("sample size k must be positive");
    if (k > g.node_count()) throw DomainError("sample size k exceeds node count");
    Rng rng(seed);
    RandomizedCurve curve;
    curve.sample = sample_without_replacement(g.node_count(), k, rng);

    std::vector<double> values(k);
    parallel_for(
        k, threads, [&] { return BfsWorkspace(g); },
        [&](BfsWorkspace& ws, std::size_t i) { values[i] = closeness(g, curve.sample[i], ws); });

    double sum = 0.0;
    for (double v : values) sum += v;
    curve.params = {g.node_count(), sum / static_cast<double>(k), p};
    curve.params.validate();
    return curve;
}

struct RankEstimate {
    NodeId node = 0;
    double closeness = 0.0;
    double estimated_rank = 0.0;
    Method method = Method::exact;
    std::optional<LogisticParams> params;  ///< absent for exact ranking
    std::uint32_t samples_used = 0;        ///< k, randomized only
    std::uint64_t traversals = 0;          ///< BFS runs performed
    std::optional<double> c_max;           ///< heuristic only
    std::optional<double> c_min;           ///< heuristic only
};

/// Three traversals: C(u) and the hub from u, c_max and the farthest level
/// from the hub, c_min from a random farthest node.
inline RankEstimate heuristic_estimate(const Graph& g, NodeId u, double p = default_slope,
                                       std::uint64_t seed = 0) {
    BfsWorkspace ws(g);
    const auto probe = closeness_probe(g, u, ws);
    const auto curve = heuristic_curve(g, probe.max_degree_node, p, seed, ws);

    RankEstimate est;
    est.node = u;
    est.closeness = probe.closeness;
    est.estimated_rank = rank_from_closeness(curve.params, probe.closeness);
    est.method = Method::heuristic;
    est.params = curve.params;
    est.traversals = 3;
    est.c_max = curve.c_max;
    est.c_min = curve.c_min;
    return est;
}

/// k + 1 traversals: C(u), then one per sampled node.
inline RankEstimate randomized_estimate(const Graph& g, NodeId u, double p, std::uint32_t k,
                                        std::uint64_t seed = 0, unsigned threads = 1) {
    if (k == 0) throw DomainError("sample size k must be positive");
    if (k > g.node_count()) throw DomainError("sample size k exceeds node count");
    const double c = closeness(g, u);
    const auto curve = randomized_curve(g, p, k, seed, threads);

    RankEstimate est;
    est.node = u;
    est.closeness = c;
    est.estimated_rank = rank_from_closeness(curve.params, c);
    est.method = Method::randomized;
    est.params = curve.params;
    est.samples_used = k;
    est.traversals = std::uint64_t{k} + 1;
    return est;
}

/// Classical ranking: closeness of every node, then competition rank.
inline RankEstimate exact_estimate(const Graph& g, NodeId u, unsigned threads = 0) {
    g.check_node(u);
    const auto all = closeness_all(g, threads);
    const auto ranks = exact_ranks(all);
    RankEstimate est;
    est.node = u;
    est.closeness = all[u];
    est.estimated_rank = ranks[u];
    est.method = Method::exact;
    est.traversals = g.node_count();
    return est;
}

}  // namespace closerank
