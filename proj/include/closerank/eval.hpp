#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "closerank/curvefit.hpp"
#include "closerank/error.hpp"
#include "closerank/graph.hpp"
#include "closerank/ranking.hpp"
#include "closerank/rng.hpp"
#include "closerank/traversal.hpp"

namespace closerank {

// ---------------------------------------------------------------------------
// Per-node error metrics

inline double abs_error(double r_est, double r_act) { return std::abs(r_est - r_act); }

/// Share of the network ranked at or below r_act, in percent; rank 1 -> 100.
inline double percentile(double r_act, std::uint64_t n) {
    return (static_cast<double>(n) - r_act + 1.0) / static_cast<double>(n) * 100.0;
}

/// Absolute error scaled by the node's percentile and by 1/n.
inline double weighted_error(double err_abs, double r_act, std::uint64_t n) {
    return err_abs / static_cast<double>(n) * percentile(r_act, n);
}

/// Percentage average absolute error: mean absolute error / n * 100.
inline double paae(std::span<const double> abs_errors, std::uint64_t n) {
    if (abs_errors.empty()) throw DomainError("paae of an empty error list");
    double sum = 0.0;
    for (double e : abs_errors) sum += e;
    return sum / static_cast<double>(abs_errors.size()) / static_cast<double>(n) * 100.0;
}

// ---------------------------------------------------------------------------
// Experiment harness

/// Exact closeness and competition ranks of every node.
struct GroundTruth {
    std::vector<double> closeness;
    std::vector<std::uint32_t> ranks;

    static GroundTruth compute(const Graph& g, unsigned threads = 0) {
        GroundTruth t;
        t.closeness = closeness_all(g, threads);
        t.ranks = exact_ranks(t.closeness);
        return t;
    }
};

struct ExperimentConfig {
    Method method = Method::randomized;
    double p = default_slope;
    std::uint32_t k = 50;
    std::uint32_t repetitions = 40;
    std::uint64_t seed = 0;
    /// Evaluate a uniform subset of this many nodes instead of all of them.
    std::optional<std::uint32_t> subset;
    bool per_node = false;
    FitConfig fit;
    unsigned threads = 0;
};

struct NodeError {
    NodeId node = 0;
    double closeness = 0.0;
    double rank_act = 0.0;
    double rank_est = 0.0;  ///< mean over repetitions
    double err_abs = 0.0;   ///< mean over repetitions of |rank_est - rank_act|
    double err_wtd = 0.0;   ///< mean over repetitions
};

struct ErrorReport {
    std::string graph_name;
    Method method = Method::randomized;
    double p = default_slope;  ///< slope used; the fitted slope for bestfit
    std::uint32_t k = 0;       ///< randomized only
    std::uint32_t repetitions = 1;
    std::uint64_t seed = 0;
    std::uint64_t nodes = 0;
    std::uint64_t nodes_evaluated = 0;
    double paae = 0.0;         ///< mean over repetitions, percent
    double wtd = 0.0;          ///< mean weighted error, mean over repetitions
    double paae_stddev = 0.0;  ///< population std-dev of paae across repetitions
    double c_mid_mean = 0.0;   ///< mean estimated c_mid across repetitions
    std::optional<FitResult> fit;
    std::vector<NodeError> per_node;
};

namespace detail {

inline std::vector<NodeId> evaluated_nodes(NodeId n, const ExperimentConfig& config) {
    if (config.subset && *config.subset < n) {
        if (*config.subset == 0) throw DomainError("evaluation subset must be non-empty");
        Rng rng(split_seed(config.seed, 0x5ab5e7ULL));
        return sample_without_replacement(n, *config.subset, rng);
    }
    std::vector<NodeId> all(n);
    for (NodeId u = 0; u < n; ++u) all[u] = u;
    return all;
}

}  // namespace detail

/// Scores one rank estimator against the exact ranking.
///
/// Repetition r draws its randomness from split_seed(seed, r). The heuristic
/// redraws the farthest node once per repetition and the randomized method
/// redraws its sample once per repetition; either curve is then applied to
/// every evaluated node. Best fit is deterministic and runs once.
inline ErrorReport run_experiment(const Graph& g, const GroundTruth& truth, const ExperimentConfig& config,
                                  std::string graph_name = {}) {
    const NodeId n = g.node_count();
    if (truth.closeness.size() != n || truth.ranks.size() != n)
        throw DomainError("ground truth does not match graph");
    if (config.method == Method::exact) throw DomainError("exact ranking has no estimation error to evaluate");
    if (config.repetitions == 0) throw DomainError("repetitions must be positive");
    if (config.method == Method::randomized && (config.k == 0 || config.k > n))
        throw DomainError("sample size k must be in [1, n]");

    ErrorReport report;
    report.graph_name = std::move(graph_name);
    report.method = config.method;
    report.p = config.p;
    report.seed = config.seed;
    report.nodes = n;
    report.k = config.method == Method::randomized ? config.k : 0;
    report.repetitions = config.method == Method::bestfit ? 1 : config.repetitions;

    const auto nodes = detail::evaluated_nodes(n, config);
    report.nodes_evaluated = nodes.size();

    std::vector<NodeError> acc(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        acc[i].node = nodes[i];
        acc[i].closeness = truth.closeness[nodes[i]];
        acc[i].rank_act = truth.ranks[nodes[i]];
    }

    std::vector<double> paae_per_rep;
    std::vector<double> abs_errors(nodes.size());
    double wtd_sum = 0.0;
    double c_mid_sum = 0.0;
    std::optional<NodeId> hub;
    std::optional<BfsWorkspace> ws;

    for (std::uint32_t rep = 0; rep < report.repetitions; ++rep) {
        const std::uint64_t rep_seed = split_seed(config.seed, rep);
        LogisticParams params;
        switch (config.method) {
            case Method::heuristic: {
                if (!ws) ws.emplace(g);
                // Probe 1 of the heuristic finds the globally highest-degree node.
                if (!hub) hub = max_degree_node(g);
                params = heuristic_curve(g, *hub, config.p, rep_seed, *ws).params;
                break;
            }
            case Method::randomized:
                params = randomized_curve(g, config.p, config.k, rep_seed, config.threads).params;
                break;
            case Method::bestfit:
                report.fit = fit_profile(truth.closeness, config.fit);
                params = report.fit->params;
                report.p = params.p;
                break;
            case Method::exact:
                break;
        }
        c_mid_sum += params.c_mid;

        double rep_wtd = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            auto& e = acc[i];
            const double est = rank_from_closeness(params, e.closeness);
            const double err = abs_error(est, e.rank_act);
            const double wtd = weighted_error(err, e.rank_act, n);
            abs_errors[i] = err;
            rep_wtd += wtd;
            e.rank_est += est;
            e.err_abs += err;
            e.err_wtd += wtd;
        }
        paae_per_rep.push_back(paae(abs_errors, n));
        wtd_sum += rep_wtd / static_cast<double>(nodes.size());
    }

    const double reps = report.repetitions;
    double paae_sum = 0.0;
    for (double v : paae_per_rep) paae_sum += v;
    report.paae = paae_sum / reps;
    report.wtd = wtd_sum / reps;
    report.c_mid_mean = c_mid_sum / reps;
    // Shifted by the first value so identical repetitions give exactly 0.
    double shift_mean = 0.0;
    for (double v : paae_per_rep) shift_mean += v - paae_per_rep.front();
    shift_mean /= reps;
    double var = 0.0;
    for (double v : paae_per_rep) {
        const double d = v - paae_per_rep.front() - shift_mean;
        var += d * d;
    }
    report.paae_stddev = std::sqrt(var / reps);

    if (config.per_node) {
        for (auto& e : acc) {
            e.rank_est /= reps;
            e.err_abs /= reps;
            e.err_wtd /= reps;
        }
        report.per_node = std::move(acc);
    }
    return report;
}

inline ErrorReport run_experiment(const Graph& g, const ExperimentConfig& config, std::string graph_name = {}) {
    return run_experiment(g, GroundTruth::compute(g, config.threads), config, std::move(graph_name));
}

// ---------------------------------------------------------------------------
// Report output

/// Shortest decimal text that reads back to exactly `v`.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}
}  // namespace detail

inline constexpr const char* report_csv_header = "graph,method,p,k,repetitions,seed,paae,wtd,nodes_evaluated";
inline constexpr const char* per_node_csv_header = "node,c,rank_act,rank_est,err_abs,err_wtd";

inline void write_report_csv_row(std::ostream& out, const ErrorReport& r) {
    out << detail::csv_field(r.graph_name) << ',' << to_string(r.method) << ',' << format_double(r.p) << ','
        << r.k << ',' << r.repetitions << ',' << r.seed << ',' << format_double(r.paae) << ','
        << format_double(r.wtd) << ',' << r.nodes_evaluated << '\n';
}

inline void write_report_csv(std::ostream& out, std::span<const ErrorReport> reports) {
    out << report_csv_header << '\n';
    for (const auto& r : reports) write_report_csv_row(out, r);
}

/// Per-node rows; `g` supplies the node labels.
inline void write_per_node_csv(std::ostream& out, const ErrorReport& r, const Graph& g) {
    out << per_node_csv_header << '\n';
    for (const auto& e : r.per_node) {
        out << detail::csv_field(g.label(e.node)) << ',' << format_double(e.closeness) << ','
            << format_double(e.rank_act) << ',' << format_double(e.rank_est) << ',' << format_double(e.err_abs)
            << ',' << format_double(e.err_wtd) << '\n';
    }
}

inline nlohmann::ordered_json to_json(const LogisticParams& p) {
    return {{"n", p.n}, {"c_mid", p.c_mid}, {"p", p.p}};
}

inline nlohmann::ordered_json to_json(const FitResult& f) {
    return {{"c_mid", f.params.c_mid},         {"p", f.params.p},
            {"bottom", f.bottom},              {"top", f.top},
            {"residual_norm", f.residual_norm}, {"iterations", f.iterations_used},
            {"converged", f.converged}};
}

/// JSON mirror of the CSV row, plus per-node rows when present.
inline nlohmann::ordered_json to_json(const ErrorReport& r, const Graph* g = nullptr) {
    nlohmann::ordered_json j = {{"graph", r.graph_name},
                                {"method", to_string(r.method)},
                                {"p", r.p},
                                {"k", r.k},
                                {"repetitions", r.repetitions},
                                {"seed", r.seed},
                                {"paae", r.paae},
                                {"wtd", r.wtd},
                                {"nodes_evaluated", r.nodes_evaluated},
                                {"nodes", r.nodes},
                                {"paae_stddev", r.paae_stddev},
                                {"c_mid_mean", r.c_mid_mean}};
    if (r.fit) j["fit"] = to_json(*r.fit);
    if (!r.per_node.empty()) {
        auto rows = nlohmann::ordered_json::array();
        for (const auto& e : r.per_node) {
            rows.push_back({{"node", g ? g->label(e.node) : std::to_string(e.node)},
                            {"c", e.closeness},
                            {"rank_act", e.rank_act},
                            {"rank_est", e.rank_est},
                            {"err_abs", e.err_abs},
                            {"err_wtd", e.err_wtd}});
        }
        j["per_node"] = std::move(rows);
    }
    return j;
}

}  // namespace closerank
