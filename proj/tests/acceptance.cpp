// Acceptance suite: one PASS / FAIL / SKIP line per criterion.
//
// Usage: acceptance [--known-fail N]...
// Exit status is 0 when every criterion passes or skips, except that a
// criterion named with --known-fail is allowed to fail. Its line still reads
// FAIL. If a known failure starts passing, the exit status is non-zero so the
// list gets updated.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "closerank/closerank.hpp"
#include "test_support.hpp"

using namespace closerank;

namespace {

struct Outcome {
    enum Kind { pass, fail, skip } kind;
    std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

// 1 ------------------------------------------------------------------------

Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(101);
    int mismatches = 0;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const auto n = static_cast<NodeId>(10 + rng.below(191));
        const Graph g = (t % 2 == 0)
                            ? test::random_connected_graph(n, 1.5 / n + 0.05 * rng.unit(), rng.next())
                            : generate_ba({n, static_cast<std::uint32_t>(1 + rng.below(4)), rng.next()});
        const auto d = test::floyd_warshall(g);
        BfsWorkspace ws(g);
        for (NodeId s = 0; s < n; ++s) {
            if (bfs_levels(g, s) != d[s]) ++mismatches;
            std::uint64_t sum = 0;
            for (auto x : d[s]) sum += x;
            const double oracle = static_cast<double>(n - 1) / static_cast<double>(sum);
            worst = std::max(worst, std::abs(closeness(g, s, ws) - oracle));
        }
    }
    const double secs = seconds_since(t0);
    const bool ok = mismatches == 0 && worst <= 1e-12 && secs < 10.0;
    return {ok ? Outcome::pass : Outcome::fail, "distance mismatches " + std::to_string(mismatches) +
                                                    ", max closeness error " + fmt(worst) + ", " +
                                                    fmt(secs, 3) + " s"};
}

// 2 ------------------------------------------------------------------------

Outcome ranking_oracle() {
    Rng rng(202);
    int bad = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto size = 1 + rng.below(300);
        // Few distinct levels so ties are common.
        const auto levels = 1 + rng.below(20);
        std::vector<double> x(size);
        for (auto& v : x) v = static_cast<double>(rng.below(levels)) / 7.0;
        if (exact_ranks(x) != test::counting_ranks(x)) ++bad;
    }
    return {bad == 0 ? Outcome::pass : Outcome::fail, std::to_string(bad) + " of 1000 arrays differ"};
}

// 3 ------------------------------------------------------------------------

Outcome logistic_identities() {
    Rng rng(303);
    double worst_sum = 0.0;
    double worst_mid = 0.0;
    int non_monotone = 0;
    for (int t = 0; t < 100000; ++t) {
        const LogisticParams m{2 + rng.below(1000000), 0.01 + 0.98 * rng.unit(), 0.5 + 29.5 * rng.unit()};
        const double c = m.c_mid * std::exp((rng.unit() - 0.5) * 8.0 / m.p);
        worst_sum = std::max(worst_sum, std::abs(rank_from_closeness(m, c) + reverse_rank(m, c) - (m.n + 1.0)));
        worst_mid = std::max(worst_mid, std::abs(rank_from_closeness(m, m.c_mid) - (m.n + 1.0) / 2.0));
        if (t % 100 == 0) {
            // Sorted grid within a few curve widths of the midpoint.
            double prev_rank = 0.0;
            double prev_rev = 0.0;
            for (int i = 0; i < 64; ++i) {
                const double gc = m.c_mid * std::exp((i / 63.0 - 0.5) * 6.0 / m.p);
                const double r = rank_from_closeness(m, gc);
                const double rr = reverse_rank(m, gc);
                if (i > 0 && !(r < prev_rank && rr > prev_rev)) ++non_monotone;
                prev_rank = r;
                prev_rev = rr;
            }
        }
    }
    const bool ok = worst_sum <= 1e-9 && worst_mid <= 1e-9 && non_monotone == 0;
    return {ok ? Outcome::pass : Outcome::fail, "max |R+R_rev-(n+1)| " + fmt(worst_sum) + ", max midpoint error " +
                                                    fmt(worst_mid) + ", monotonicity breaks " +
                                                    std::to_string(non_monotone)};
}

// 4 ------------------------------------------------------------------------

Outcome fit_recovery() {
    Rng rng(404);
    double worst_param = 0.0;
    int not_converged = 0;
    for (int t = 0; t < 20; ++t) {
        const LogisticParams truth{1000 + rng.below(100000), 0.05 + 0.6 * rng.unit(), 2.0 + 20.0 * rng.unit()};
        std::vector<FitPoint> pts;
        for (int i = 0; i < 200; ++i) {
            const double c = truth.c_mid * std::exp((i / 199.0 - 0.5) * 6.0 / truth.p);
            pts.push_back({c, reverse_rank(truth, c)});
        }
        const auto fit = fit_logistic(pts, truth.n);
        if (!fit.converged) ++not_converged;
        worst_param = std::max({worst_param, rel(fit.params.c_mid, truth.c_mid), rel(fit.params.p, truth.p)});
    }

    double worst_grad = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const LogisticParams m{2 + rng.below(100000), 0.05 + 0.6 * rng.unit(), 1.0 + 19.0 * rng.unit()};
        const double c = m.c_mid * std::exp((rng.unit() - 0.5) * 4.0 / m.p);
        const auto g = logistic_gradient(m, c);
        const double hc = 1e-6 * m.c_mid;
        const double fd_c =
            (reverse_rank({m.n, m.c_mid + hc, m.p}, c) - reverse_rank({m.n, m.c_mid - hc, m.p}, c)) / (2 * hc);
        const double hp = 1e-6 * m.p;
        const double fd_p =
            (reverse_rank({m.n, m.c_mid, m.p + hp}, c) - reverse_rank({m.n, m.c_mid, m.p - hp}, c)) / (2 * hp);
        worst_grad = std::max(worst_grad, rel(g.d_c_mid, fd_c));
        // d/dp vanishes at the midpoint, where a relative comparison is meaningless.
        if (std::abs(std::log(c / m.c_mid)) > 1e-3) worst_grad = std::max(worst_grad, rel(g.d_p, fd_p));
    }
    const bool ok = worst_param <= 1e-3 && not_converged == 0 && worst_grad <= 1e-4;
    return {ok ? Outcome::pass : Outcome::fail, "max parameter error " + fmt(worst_param) + ", unconverged " +
                                                    std::to_string(not_converged) + ", max Jacobian error " +
                                                    fmt(worst_grad)};
}

// 5, 6 ---------------------------------------------------------------------

struct BaRun {
    double bestfit, randomized, heuristic;
};

const std::vector<BaRun>& ba_runs() {
    static const std::vector<BaRun> runs = [] {
        std::vector<BaRun> out;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto g = generate_ba({5000, 5, seed});
            const auto truth = GroundTruth::compute(g);
            ExperimentConfig cfg;
            cfg.p = default_slope;
            cfg.k = 50;
            cfg.repetitions = 40;
            cfg.seed = seed;
            BaRun r{};
            cfg.method = Method::bestfit;
            r.bestfit = run_experiment(g, truth, cfg).paae;
            cfg.method = Method::randomized;
            r.randomized = run_experiment(g, truth, cfg).paae;
            cfg.method = Method::heuristic;
            r.heuristic = run_experiment(g, truth, cfg).paae;
            out.push_back(r);
        }
        return out;
    }();
    return runs;
}

std::string ba_table(const std::vector<BaRun>& runs) {
    std::string s;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        s += (i ? "; " : "") + std::string("seed ") + std::to_string(i + 1) + " bestfit " + fmt(runs[i].bestfit, 3) +
             " rand " + fmt(runs[i].randomized, 3) + " heur " + fmt(runs[i].heuristic, 3);
    }
    return s;
}

Outcome method_ordering() {
    const auto& runs = ba_runs();
    int ordered = 0;
    for (const auto& r : runs) ordered += r.bestfit < r.randomized && r.randomized < r.heuristic;
    return {ordered >= 4 ? Outcome::pass : Outcome::fail,
            std::to_string(ordered) + "/5 graphs ordered (paae %: " + ba_table(runs) + ")"};
}

Outcome accuracy_band() {
    const auto& runs = ba_runs();
    double max_rand = 0.0;
    double max_best = 0.0;
    for (const auto& r : runs) {
        max_rand = std::max(max_rand, r.randomized);
        max_best = std::max(max_best, r.bestfit);
    }
    const bool ok = max_rand <= 6.0 && max_best <= 3.0;
    return {ok ? Outcome::pass : Outcome::fail, "max randomized paae " + fmt(max_rand, 3) +
                                                    "% (limit 6), max bestfit paae " + fmt(max_best, 3) +
                                                    "% (limit 3)"};
}

// 7 ------------------------------------------------------------------------

Outcome brightkite() {
    const char* path = std::getenv("CLOSERANK_BRIGHTKITE");
    if (!path || !*path) return {Outcome::skip, "set CLOSERANK_BRIGHTKITE to the edge-list path to run"};
    const auto g = largest_connected_component(read_edge_list(path));
    const auto truth = GroundTruth::compute(g);
    ExperimentConfig cfg;
    cfg.k = 50;
    cfg.repetitions = 40;
    cfg.method = Method::bestfit;
    const auto best = run_experiment(g, truth, cfg);
    cfg.method = Method::heuristic;
    const double heur = run_experiment(g, truth, cfg).paae;
    cfg.method = Method::randomized;
    const double rand = run_experiment(g, truth, cfg).paae;
    const bool ok = best.paae >= 0.7 && best.paae <= 3.0 && heur >= 4.0 && heur <= 12.0 && rand >= 1.5 &&
                    rand <= 4.5 && best.p >= 10.0 && best.p <= 16.0;
    return {ok ? Outcome::pass : Outcome::fail, "n " + std::to_string(g.node_count()) + ", bestfit " +
                                                    fmt(best.paae, 3) + ", heuristic " + fmt(heur, 3) +
                                                    ", randomized " + fmt(rand, 3) + ", fitted p " + fmt(best.p, 4)};
}

// 8 ------------------------------------------------------------------------

std::string capture(const std::string& cmd, int& status) {
    std::string out;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) {
        status = -1;
        return out;
    }
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
    const int raw = pclose(pipe);
    status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome cli_determinism() {
    namespace fs = std::filesystem;
    if (std::string(CLOSERANK_CLI).empty()) return {Outcome::skip, "built without the command-line tool"};
    const fs::path dir = fs::temp_directory_path() / ("closerank_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string cli = CLOSERANK_CLI;
    const std::string graph = (dir / "g.txt").string();
    int status = 0;
    capture(cli + " gen-ba --n 3000 --m 4 --seed 11 " + graph, status);
    if (status != 0) {
        fs::remove_all(dir);
        return {Outcome::fail, "could not generate input graph"};
    }

    struct Case {
        std::string name, args;
        std::vector<std::string> files;  // written under dir/<threads>/
    };
    const std::vector<Case> cases = {
        {"rank heuristic", "rank --node 5 --seed 3 " + graph, {}},
        {"rank randomized", "rank --method randomized --node 5 --k 60 --seed 3 " + graph, {}},
        {"rank bestfit", "rank --method bestfit --node 5 " + graph, {}},
        {"rank exact", "rank --method exact --node 5 " + graph, {}},
        {"eval", "eval --repetitions 8 --seed 4 --per-node @/pn --json @/r.json " + graph,
         {"pn.bestfit.csv", "pn.heuristic.csv", "pn.randomized.csv", "r.json"}},
        {"fit", "fit " + graph, {}},
        {"gen-ba", "gen-ba --n 2000 --m 3 --seed 9", {}},
        {"study", "study --n 800 --m 1..4 --seed 6", {}},
    };

    std::vector<std::string> differing;
    for (const auto& c : cases) {
        std::string outputs[2];
        for (int i = 0; i < 2; ++i) {
            const std::string threads = i == 0 ? "1" : "8";
            const fs::path sub = dir / threads;
            fs::create_directories(sub);
            std::string args = c.args;
            for (std::size_t at; (at = args.find('@')) != std::string::npos;) args.replace(at, 1, sub.string());
            outputs[i] = capture(cli + " --threads " + threads + " " + args, status);
            if (status != 0) outputs[i] = "exit " + std::to_string(status) + (i == 0 ? "a" : "b");
            for (const auto& f : c.files) outputs[i] += "\n--" + f + "--\n" + slurp(sub / f);
        }
        if (outputs[0] != outputs[1] || outputs[0].empty()) differing.push_back(c.name);
    }
    fs::remove_all(dir);
    std::string detail = std::to_string(cases.size() - differing.size()) + "/" + std::to_string(cases.size()) +
                         " invocations byte-identical at 1 and 8 threads";
    for (const auto& d : differing) detail += "; differs: " + d;
    return {differing.empty() ? Outcome::pass : Outcome::fail, detail};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> known_fail;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--known-fail" && i + 1 < argc) {
            known_fail.insert(std::atoi(argv[++i]));
        } else {
            std::cerr << "usage: acceptance [--known-fail N]...\n";
            return 2;
        }
    }

    struct Criterion {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {1, "oracle equivalence", oracle_equivalence},
        {2, "ranking oracle", ranking_oracle},
        {3, "logistic identities", logistic_identities},
        {4, "fit recovery", fit_recovery},
        {5, "method ordering on BA graphs", method_ordering},
        {6, "accuracy band on BA graphs", accuracy_band},
        {7, "Brightkite reproduction", brightkite},
        {8, "CLI determinism across thread counts", cli_determinism},
    };

    int unexpected = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {Outcome::fail, std::string("exception: ") + e.what()};
        }
        const bool expected_fail = known_fail.count(c.id) > 0;
        const char* tag = o.kind == Outcome::pass ? "PASS" : o.kind == Outcome::fail ? "FAIL" : "SKIP";
        std::cout << tag << ' ' << c.id << ' ' << c.name << ": " << o.detail;
        if (expected_fail) std::cout << (o.kind == Outcome::fail ? " [known failure]" : " [listed as known failure]");
        std::cout << std::endl;
        if (o.kind == Outcome::fail && !expected_fail) ++unexpected;
        if (o.kind == Outcome::pass && expected_fail) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
