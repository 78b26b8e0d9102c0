#pragma once

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <span>
#include <vector>

#include "closerank/curvefit.hpp"
#include "closerank/error.hpp"
#include "closerank/graph.hpp"
#include "closerank/rng.hpp"
#include "closerank/traversal.hpp"

namespace closerank {

struct BAConfig {
    std::uint32_t n = 0;
    std::uint32_t m_attach = 1;
    std::uint64_t seed = 0;

    void validate() const {
        if (m_attach < 1) throw DomainError("m_attach must be >= 1");
        // The seed star holds m_attach + 1 nodes; at least one must grow on it.
        if (n < m_attach + 2)
            throw DomainError("n must exceed m_attach + 1 for preferential attachment to take place");
    }
};

/// Barabási–Albert preferential attachment.
///
/// Starts from a star on m_attach + 1 nodes (center 0). Each later node links
/// to m_attach distinct existing nodes picked with probability proportional to
/// degree, sampled from the list of all edge endpoints. The result has
/// m_attach * (n - m_attach) edges and is connected.
inline Graph generate_ba(const BAConfig& config) {
    config.validate();
    const std::uint32_t m = config.m_attach;
    Rng rng(config.seed);

    std::vector<Edge> edges;
    edges.reserve(std::uint64_t{m} * (config.n - m));
    std::vector<NodeId> endpoints;
    endpoints.reserve(2 * edges.capacity());
    for (NodeId leaf = 1; leaf <= m; ++leaf) {
        edges.emplace_back(0, leaf);
        endpoints.push_back(0);
        endpoints.push_back(leaf);
    }

    std::vector<NodeId> targets;
    for (NodeId v = m + 1; v < config.n; ++v) {
        targets.clear();
        const std::size_t pool = endpoints.size();
        while (targets.size() < m) {
            const NodeId t = endpoints[rng.below(pool)];
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
        }
        for (NodeId t : targets) {
            edges.emplace_back(t, v);
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }
    return Graph::from_edges(config.n, edges);
}

/// Edge density 2m / (n (n - 1)).
inline double edge_density(std::uint64_t nodes, std::uint64_t edges) {
    if (nodes < 2) throw DomainError("density needs at least 2 nodes");
    return 2.0 * static_cast<double>(edges) / (static_cast<double>(nodes) * static_cast<double>(nodes - 1));
}

struct StudyRow {
    std::uint32_t m_attach = 0;
    std::uint64_t edges = 0;
    double density = 0.0;
    double p = 0.0;
    bool converged = false;
};

/// Fitted slope against density over BA graphs of one size. Rows are sorted
/// by density; graphs whose profile cannot be fitted are skipped with a
/// warning on `log`.
inline std::vector<StudyRow> slope_density_study(std::uint32_t n, std::span<const std::uint32_t> m_attach_values,
                                                 std::uint64_t seed, const FitConfig& fit = {},
                                                 unsigned threads = 0, std::ostream& log = std::cerr) {
    for (auto m : m_attach_values) BAConfig{n, m, seed}.validate();
    std::vector<StudyRow> rows;
    for (std::size_t i = 0; i < m_attach_values.size(); ++i) {
        const std::uint32_t m = m_attach_values[i];
        const Graph g = generate_ba({n, m, split_seed(seed, m)});
        const auto profile = closeness_all(g, threads);
        try {
            const auto result = fit_profile(profile, fit);
            rows.push_back({m, g.edge_count(), edge_density(g.node_count(), g.edge_count()), result.params.p,
                            result.converged});
        } catch (const Error& e) {
            log << "warning: m_attach=" << m << " skipped: " << e.what() << '\n';
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const StudyRow& a, const StudyRow& b) { return a.density < b.density; });
    return rows;
}

}  // namespace closerank
