// Command-line surface for the residue-degree toolkit: exact distributions,
// thresholds, subgraph/partition search, and seeded Monte Carlo experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "modres/experiment.hpp"
#include "modres/partition_search.hpp"
#include "modres/residue_dist.hpp"
#include "modres/subgraph_search.hpp"
#include "modres/thresholds.hpp"

namespace {

using modres::DistributionSpec;
using modres::ExperimentConfig;
using modres::ModParams;
using modres::OutputFormat;
using modres::ProbMethod;

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::vector<int> parse_ints(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

ProbMethod parse_method(const std::string& name) {
    if (name == "closed" || name == "closed-form") return ProbMethod::closed_form;
    if (name == "fourier") return ProbMethod::fourier;
    if (name == "enum" || name == "enumeration") return ProbMethod::enumeration;
    throw modres::InputError("unknown method '" + name + "'");
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw modres::InputError("cannot open output file: " + out_path);
    f << text;
}

void emit_result(const modres::ExperimentResult& res, const std::string& out_path,
                 const std::optional<OutputFormat>& fmt) {
    emit(res.render(modres::format_for(fmt, out_path)), out_path);
}

nlohmann::json prob_to_json(const modres::ExactProb& p) {
    nlohmann::json j;
    j["method"] = p.method == ProbMethod::enumeration ? "enumeration"
                  : p.method == ProbMethod::fourier   ? "fourier"
                                                      : "closed-form";
    j["value"] = p.approx_d();
    j["exact"] = p.exact();
    if (p.exact()) {
        std::ostringstream num;
        num << boost::multiprecision::numerator(p.value) << "/"
            << boost::multiprecision::denominator(p.value);
        j["rational"] = num.str();
    }
    return j;
}

modres::Graph resolve_graph(const std::string& graph_file, int n, std::uint64_t seed) {
    if (!graph_file.empty()) return modres::read_graph_file(graph_file);
    if (n <= 0) throw modres::InputError("provide --graph or a positive --n");
    return modres::sample_gnp(n, seed);
}

struct CommonFlags {
    int n = 0, q = 2, r = 0, k = 0, t = 0, cap = 0, workers = 0, restarts = 0;
    int m_min = 1, m_max = 10;
    long long trials = 1;
    std::uint64_t seed = 1, budget = 0;
    std::string alpha_csv, out_path, graph_file, method = "closed", mode = "lemma23";
    std::optional<OutputFormat> format;

    std::optional<DistributionSpec> alpha() const {
        if (alpha_csv.empty()) return std::nullopt;
        return DistributionSpec{q, parse_doubles(alpha_csv)};
    }
    ExperimentConfig experiment_config() const {
        ExperimentConfig cfg;
        cfg.n = n;
        cfg.q = q;
        cfg.r = r;
        cfg.k = k;
        cfg.t = t;
        cfg.cap = cap;
        cfg.m_min = m_min;
        cfg.m_max = m_max;
        cfg.alpha = alpha();
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.workers = workers;
        cfg.budget = budget;
        cfg.restarts = restarts;
        if (!graph_file.empty()) cfg.graph_file = graph_file;
        return cfg;
    }
};

void add_format_flag(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option_function<std::string>(
           "--format",
           [&f](const std::string& s) {
               if (s == "csv") f.format = OutputFormat::csv;
               else if (s == "json") f.format = OutputFormat::json;
               else throw CLI::ValidationError("--format must be csv or json");
           },
           "output format (default: by file extension, csv otherwise)")
        ->expected(1);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modres: degree residues of random graphs modulo q"};
    app.require_subcommand(1);
    CommonFlags f;

    auto add_common = [&](CLI::App* cmd, bool with_output = true) {
        cmd->add_option("--q", f.q, "modulus q >= 2");
        cmd->add_option("--r", f.r, "target residue 0 <= r < q");
        cmd->add_option("--n", f.n, "vertex count");
        cmd->add_option("--k", f.k, "subset size / target order");
        cmd->add_option("--t", f.t, "number of parts");
        cmd->add_option("--cap", f.cap, "part-count cap for exact partition search");
        cmd->add_option("--alpha", f.alpha_csv, "residue distribution a0,a1,...");
        cmd->add_option("--seed", f.seed, "master seed");
        cmd->add_option("--trials", f.trials, "number of Monte Carlo trials");
        cmd->add_option("--workers", f.workers, "worker threads (default MODRES_WORKERS or OpenMP)");
        cmd->add_option("--budget", f.budget, "heuristic steps per restart");
        cmd->add_option("--restarts", f.restarts, "heuristic restarts");
        cmd->add_option("--graph", f.graph_file, "graph file (text adjacency format)");
        if (with_output) {
            cmd->add_option("--out", f.out_path, "output file (default stdout)");
            add_format_flag(cmd, f);
        }
    };

    // threshold: n,q[,alpha] -> ThresholdReport JSON
    CLI::App* threshold = app.add_subcommand("threshold", "threshold size k(n,q) or k(n,q,alpha)");
    add_common(threshold);
    threshold->callback([&] {
        auto alpha = f.alpha();
        modres::ThresholdReport rep =
            alpha ? modres::threshold_k_alpha(f.n, *alpha) : modres::threshold_k(f.n, f.q);
        emit(rep.to_json().dump(2) + "\n", f.out_path);
    });

    // entropy-root: alpha,q -> x0
    CLI::App* entropy_root = app.add_subcommand("entropy-root", "largest root x0 of h in (0,1]");
    add_common(entropy_root);
    entropy_root->callback([&] {
        auto alpha = f.alpha();
        if (!alpha) throw modres::InputError("entropy-root requires --alpha");
        nlohmann::json j;
        j["q"] = f.q;
        j["alpha"] = alpha->alpha;
        j["entropy"] = modres::entropy(*alpha);
        j["x0"] = modres::root_x0(*alpha);
        emit(j.dump(2) + "\n", f.out_path);
    });

    // dist sum|sym|joint: exact probabilities
    CLI::App* dist = app.add_subcommand("dist", "exact residue-distribution probabilities");
    dist->require_subcommand(1);
    std::string u_csv, v_csv;
    int dist_a = 0;
    CLI::App* dist_sum = dist->add_subcommand("sum", "P[Bern(1/2) sum = a (mod q)]");
    add_common(dist_sum);
    dist_sum->add_option("--a", dist_a, "target residue");
    dist_sum->add_option("--method", f.method, "closed|fourier|enum");
    dist_sum->callback([&] {
        auto p = modres::prob_sum_mod(f.n, dist_a, f.q, parse_method(f.method));
        emit(prob_to_json(p).dump(2) + "\n", f.out_path);
    });
    CLI::App* dist_sym = dist->add_subcommand("sym", "P[graph degree vector = v (mod q)]");
    add_common(dist_sym);
    dist_sym->add_option("--v", v_csv, "degree residue vector v0,v1,...")->required();
    dist_sym->add_option("--method", f.method, "enum|fourier");
    dist_sym->callback([&] {
        modres::ResidueVector v{f.q, parse_ints(v_csv)};
        if (f.method == "closed") f.method = "enum";
        auto p = modres::prob_symmetric(v, parse_method(f.method));
        emit(prob_to_json(p).dump(2) + "\n", f.out_path);
    });
    CLI::App* dist_joint = dist->add_subcommand("joint", "joint row/column sum law");
    add_common(dist_joint);
    dist_joint->add_option("--u", u_csv, "row-sum residues u0,...")->required();
    dist_joint->add_option("--v", v_csv, "column-sum residues v0,...")->required();
    dist_joint->add_option("--method", f.method, "enum|fourier");
    dist_joint->callback([&] {
        modres::ResidueVector u{f.q, parse_ints(u_csv)};
        modres::ResidueVector v{f.q, parse_ints(v_csv)};
        if (f.method == "closed") f.method = "enum";
        auto p = modres::prob_joint(u, v, parse_method(f.method));
        emit(prob_to_json(p).dump(2) + "\n", f.out_path);
    });

    // decay: error-decay profiles
    CLI::App* decay = app.add_subcommand("decay", "error decay vs the leading term");
    add_common(decay);
    decay->add_option("--mode", f.mode, "lemma23|sym|asym");
    decay->add_option("--m-min", f.m_min, "smallest size");
    decay->add_option("--m-max", f.m_max, "largest size");
    decay->callback([&] {
        modres::DecayExpMode mode = f.mode == "sym"        ? modres::DecayExpMode::symmetric
                                    : f.mode == "asym"     ? modres::DecayExpMode::asym
                                    : f.mode == "lemma23"  ? modres::DecayExpMode::lemma23
                                                           : throw modres::InputError(
                                                                 "unknown decay mode '" + f.mode + "'");
        emit_result(modres::decay_experiment(f.experiment_config(), mode), f.out_path, f.format);
    });

    // f-exact / f-search / count
    CLI::App* f_exact = app.add_subcommand("f-exact", "exact f(G,r,q) or f(G,alpha,q)");
    add_common(f_exact);
    f_exact->callback([&] {
        modres::Graph g = resolve_graph(f.graph_file, f.n, f.seed);
        auto alpha = f.alpha();
        modres::SearchResult res =
            alpha ? modres::exact_f_alpha(g, *alpha) : modres::exact_f(g, ModParams{f.q, f.r});
        emit(res.to_json().dump(2) + "\n", f.out_path);
    });
    CLI::App* f_search = app.add_subcommand("f-search", "local-search witness for f(G,r,q)");
    add_common(f_search);
    f_search->callback([&] {
        modres::Graph g = resolve_graph(f.graph_file, f.n, f.seed);
        int k_target = f.k > 0 ? f.k : static_cast<int>(modres::threshold_k(g.order(), f.q).k);
        ExperimentConfig cfg = f.experiment_config();
        modres::SearchResult res = modres::local_search_f(
            g, ModParams{f.q, f.r}, k_target, modres::search_params_from(cfg, f.seed));
        nlohmann::json j = res.to_json();
        j["k_target"] = k_target;
        emit(j.dump(2) + "\n", f.out_path);
    });
    CLI::App* count = app.add_subcommand("count", "exact number of good k-subsets");
    add_common(count);
    count->callback([&] {
        modres::Graph g = resolve_graph(f.graph_file, f.n, f.seed);
        auto alpha = f.alpha();
        std::uint64_t c = alpha ? modres::count_good_alpha(g, f.k, *alpha)
                                : modres::count_good(g, f.k, ModParams{f.q, f.r});
        nlohmann::json j;
        j["n"] = g.order();
        j["k"] = f.k;
        j["count"] = c;
        emit(j.dump(2) + "\n", f.out_path);
    });

    // experiments
    CLI::App* expect = app.add_subcommand("expect", "mean of exact X_k vs exact reference");
    add_common(expect);
    expect->callback([&] {
        emit_result(modres::expectation_experiment(f.experiment_config()), f.out_path, f.format);
    });
    CLI::App* scan = app.add_subcommand("scan", "distribution of f(G,r,q) - k(n,q)");
    add_common(scan);
    scan->callback([&] {
        emit_result(modres::threshold_scan(f.experiment_config()), f.out_path, f.format);
    });
    CLI::App* part_exact = app.add_subcommand("partition-exact", "exact p(G,r,q) trials");
    add_common(part_exact);
    part_exact->callback([&] {
        ExperimentConfig cfg = f.experiment_config();
        cfg.heuristic = false;
        emit_result(modres::partition_experiment(cfg), f.out_path, f.format);
    });
    CLI::App* part_search = app.add_subcommand("partition-search", "balanced partition search trials");
    add_common(part_search);
    part_search->callback([&] {
        ExperimentConfig cfg = f.experiment_config();
        cfg.heuristic = true;
        emit_result(modres::partition_experiment(cfg), f.out_path, f.format);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const modres::CapacityError& e) {
        std::fprintf(stderr, "capacity error: %s\n", e.what());
        return 3;
    } catch (const modres::InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
