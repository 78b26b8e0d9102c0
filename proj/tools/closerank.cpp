// closerank: command-line front end for closeness-rank estimation.
//
// Data goes to stdout (or the requested files), diagnostics to stderr.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "closerank/closerank.hpp"

namespace {

using namespace closerank;
using json = nlohmann::ordered_json;

constexpr int exit_usage = 1;
constexpr int exit_data = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LoadedGraph {
    Graph graph;
    std::string name;
};

LoadedGraph load_connected(const std::string& path) {
    const Graph raw = read_edge_list(path);
    Graph lcc = largest_connected_component(raw);
    std::clog << "loaded " << path << ": " << raw.node_count() << " nodes, " << raw.edge_count()
              << " edges; largest component " << lcc.node_count() << " nodes, " << lcc.edge_count() << " edges\n";
    if (lcc.node_count() < 2) throw DomainError("largest connected component has fewer than 2 nodes");
    std::string name = path;
    if (const auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
    return {std::move(lcc), std::move(name)};
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw Error("cannot write '" + path + "'");
    return file;
}

Method method_or_usage(const std::string& name) {
    const auto m = parse_method(name);
    if (!m) throw UsageError("unknown method '" + name + "' (expected exact, heuristic, randomized or bestfit)");
    return *m;
}

std::vector<std::uint32_t> parse_m_values(const std::string& text) {
    std::vector<std::uint32_t> out;
    std::stringstream ss(text);
    std::string part;
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw UsageError("bad m_attach list '" + text + "'");
        return static_cast<std::uint32_t>(v);
    };
    while (std::getline(ss, part, ',')) {
        if (const auto dots = part.find(".."); dots != std::string::npos) {
            const auto lo = number(part.substr(0, dots));
            const auto hi = number(part.substr(dots + 2));
            if (lo > hi) throw UsageError("empty range '" + part + "'");
            for (auto m = lo; m <= hi; ++m) out.push_back(m);
        } else {
            out.push_back(number(part));
        }
    }
    if (out.empty()) throw UsageError("empty m_attach list");
    return out;
}

FitConfig fit_config(int max_iterations, double tolerance, bool free_asymptotes) {
    FitConfig cfg;
    cfg.max_iterations = max_iterations;
    cfg.tolerance = tolerance;
    cfg.free_asymptotes = free_asymptotes;
    return cfg;
}

// ---------------------------------------------------------------------------

struct RankArgs {
    std::string input;
    std::string node;
    std::string method = "heuristic";
    double p = default_slope;
    std::uint32_t k = 50;
    std::uint64_t seed = 0;
};

void cmd_rank(const RankArgs& a, unsigned threads) {
    const Method method = method_or_usage(a.method);
    const auto [g, name] = load_connected(a.input);
    const auto node = g.find_label(a.node);
    if (!node) throw DomainError("node '" + a.node + "' is not in the largest connected component");

    RankEstimate est;
    std::optional<FitResult> fit;
    switch (method) {
        case Method::heuristic: est = heuristic_estimate(g, *node, a.p, a.seed); break;
        case Method::randomized: est = randomized_estimate(g, *node, a.p, a.k, a.seed, threads); break;
        case Method::exact: est = exact_estimate(g, *node, threads); break;
        case Method::bestfit: {
            const auto profile = closeness_all(g, threads);
            fit = fit_profile(profile);
            est.node = *node;
            est.closeness = profile[*node];
            est.method = Method::bestfit;
            est.params = fit->params;
            est.estimated_rank = rank_from_closeness(fit->params, est.closeness);
            est.traversals = g.node_count();
            break;
        }
    }

    json out = {{"graph", name},
                {"node", g.label(*node)},
                {"method", to_string(est.method)},
                {"nodes", g.node_count()},
                {"closeness", est.closeness},
                {"estimated_rank", est.estimated_rank},
                {"traversals", est.traversals}};
    if (est.params) out["params"] = to_json(*est.params);
    if (method == Method::randomized) {
        out["k"] = est.samples_used;
        out["seed"] = a.seed;
    }
    if (method == Method::heuristic) {
        out["c_max"] = *est.c_max;
        out["c_min"] = *est.c_min;
        out["seed"] = a.seed;
    }
    if (fit) out["fit"] = to_json(*fit);
    std::cout << out.dump() << '\n';
}

struct EvalArgs {
    std::string input;
    std::vector<std::string> methods{"bestfit", "heuristic", "randomized"};
    double p = default_slope;
    std::uint32_t k = 50;
    std::uint32_t repetitions = 40;
    std::uint64_t seed = 0;
    std::optional<std::uint32_t> subset;
    std::string name;
    std::string out;
    std::string json_out;
    std::string per_node;
};

void cmd_eval(const EvalArgs& a, unsigned threads) {
    std::vector<Method> methods;
    for (const auto& m : a.methods) {
        const Method method = method_or_usage(m);
        if (method == Method::exact) throw UsageError("'exact' is the ground truth and cannot be evaluated");
        methods.push_back(method);
    }
    const auto [g, file_name] = load_connected(a.input);
    const std::string name = a.name.empty() ? file_name : a.name;

    std::clog << "computing exact closeness of " << g.node_count() << " nodes\n";
    const auto truth = GroundTruth::compute(g, threads);

    std::vector<ErrorReport> reports;
    for (Method m : methods) {
        ExperimentConfig cfg;
        cfg.method = m;
        cfg.p = a.p;
        cfg.k = a.k;
        cfg.repetitions = a.repetitions;
        cfg.seed = a.seed;
        cfg.subset = a.subset;
        cfg.per_node = !a.per_node.empty();
        cfg.threads = threads;
        std::clog << "evaluating " << to_string(m) << '\n';
        reports.push_back(run_experiment(g, truth, cfg, name));
    }

    std::ofstream file;
    write_report_csv(open_output(a.out, file), reports);

    if (!a.json_out.empty()) {
        json all = json::array();
        for (const auto& r : reports) all.push_back(to_json(r, &g));
        std::ofstream js(a.json_out, std::ios::binary);
        if (!js) throw Error("cannot write '" + a.json_out + "'");
        js << all.dump(2) << '\n';
    }
    if (!a.per_node.empty()) {
        for (const auto& r : reports) {
            const std::string path = a.per_node + "." + std::string(to_string(r.method)) + ".csv";
            std::ofstream pn(path, std::ios::binary);
            if (!pn) throw Error("cannot write '" + path + "'");
            write_per_node_csv(pn, r, g);
            std::clog << "wrote " << path << '\n';
        }
    }
}

struct FitArgs {
    std::vector<std::string> inputs;
    int max_iterations = 1000;
    double tolerance = 1e-4;
    bool free_asymptotes = false;
};

void cmd_fit(const FitArgs& a, unsigned threads) {
    const auto cfg = fit_config(a.max_iterations, a.tolerance, a.free_asymptotes);
    double sum = 0.0;
    for (const auto& input : a.inputs) {
        const auto [g, name] = load_connected(input);
        const auto fit = fit_profile(closeness_all(g, threads), cfg);
        json out = {{"graph", name}, {"nodes", g.node_count()}, {"edges", g.edge_count()}};
        const auto fields = to_json(fit);
        for (const auto& [key, value] : fields.items()) out[key] = value;
        std::cout << out.dump() << '\n';
        sum += fit.params.p;
    }
    if (a.inputs.size() > 1) std::cout << json{{"mean_p", sum / static_cast<double>(a.inputs.size())}}.dump() << '\n';
}

struct GenArgs {
    std::uint32_t n = 0;
    std::uint32_t m = 1;
    std::uint64_t seed = 0;
    std::string out;
};

void cmd_gen_ba(const GenArgs& a) {
    BAConfig cfg{a.n, a.m, a.seed};
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    const auto g = generate_ba(cfg);
    std::ofstream file;
    write_edge_list(open_output(a.out, file), g);
    std::clog << "generated " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
}

struct StudyArgs {
    std::uint32_t n = 4000;
    std::string m = "1..10";
    std::uint64_t seed = 0;
    std::string out;
};

void cmd_study(const StudyArgs& a, unsigned threads) {
    const auto ms = parse_m_values(a.m);
    try {
        for (auto m : ms) BAConfig{a.n, m, a.seed}.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    const auto rows = slope_density_study(a.n, ms, a.seed, {}, threads, std::clog);
    std::ofstream file;
    auto& out = open_output(a.out, file);
    out << "m_attach,density,p,converged\n";
    for (const auto& r : rows)
        out << r.m_attach << ',' << format_double(r.density) << ',' << format_double(r.p) << ','
            << (r.converged ? "true" : "false") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closeness-centrality rank estimation"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads for all-pairs traversals (0 = $CLOSERANK_THREADS or all cores)");

    RankArgs rank;
    auto* rank_cmd = app.add_subcommand("rank", "Estimate the closeness rank of one node");
    rank_cmd->add_option("input", rank.input, "Edge-list file (optionally gzip-compressed)")->required();
    rank_cmd->add_option("--node", rank.node, "Node label as it appears in the file")->required();
    rank_cmd->add_option("--method", rank.method, "heuristic | randomized | bestfit | exact")->capture_default_str();
    rank_cmd->add_option("--p", rank.p, "Hill slope of the rank curve")->capture_default_str();
    rank_cmd->add_option("--k", rank.k, "Sample size for the randomized method")->capture_default_str();
    rank_cmd->add_option("--seed", rank.seed, "Random seed")->capture_default_str();

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Score estimators against exact ranks");
    eval_cmd->add_option("input", eval.input, "Edge-list file")->required();
    eval_cmd->add_option("--methods", eval.methods, "Comma-separated methods")->delimiter(',')->capture_default_str();
    eval_cmd->add_option("--p", eval.p, "Hill slope for heuristic and randomized")->capture_default_str();
    eval_cmd->add_option("--k", eval.k, "Sample size for the randomized method")->capture_default_str();
    eval_cmd->add_option("--repetitions", eval.repetitions, "Repetitions of randomized methods")->capture_default_str();
    eval_cmd->add_option("--seed", eval.seed, "Random seed")->capture_default_str();
    eval_cmd->add_option("--subset", eval.subset, "Evaluate a uniform subset of this many nodes");
    eval_cmd->add_option("--name", eval.name, "Graph name in reports (default: file name)");
    eval_cmd->add_option("--out", eval.out, "Summary CSV path (default: stdout)");
    eval_cmd->add_option("--json", eval.json_out, "Also write a JSON report");
    eval_cmd->add_option("--per-node", eval.per_node, "Write per-node CSVs to PREFIX.<method>.csv");

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit the logistic rank curve to exact closeness profiles");
    fit_cmd->add_option("inputs", fit.inputs, "Edge-list files")->required();
    fit_cmd->add_option("--max-iterations", fit.max_iterations)->capture_default_str()->check(CLI::PositiveNumber);
    fit_cmd->add_option("--tolerance", fit.tolerance)->capture_default_str()->check(CLI::PositiveNumber);
    fit_cmd->add_flag("--free-asymptotes", fit.free_asymptotes, "Also fit the lower and upper asymptotes");

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-ba", "Write a Barabási-Albert graph as an edge list");
    gen_cmd->add_option("--n", gen.n, "Node count")->required();
    gen_cmd->add_option("--m", gen.m, "Edges per new node")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    gen_cmd->add_option("output", gen.out, "Output path (default: stdout)");

    StudyArgs study;
    auto* study_cmd = app.add_subcommand("study", "Fitted slope versus density over BA graphs");
    study_cmd->add_option("--n", study.n, "Node count")->capture_default_str();
    study_cmd->add_option("--m", study.m, "m_attach values, e.g. 1..10 or 1,2,4")->capture_default_str();
    study_cmd->add_option("--seed", study.seed, "Random seed")->capture_default_str();
    study_cmd->add_option("--out", study.out, "CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (*rank_cmd) cmd_rank(rank, threads);
        else if (*eval_cmd) cmd_eval(eval, threads);
        else if (*fit_cmd) cmd_fit(fit, threads);
        else if (*gen_cmd) cmd_gen_ba(gen);
        else if (*study_cmd) cmd_study(study, threads);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    }
    return 0;
}
