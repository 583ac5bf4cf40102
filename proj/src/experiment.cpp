#include "modres/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>

#include "modres/partition_search.hpp"
#include "modres/rng.hpp"
#include "modres/thresholds.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace modres {

namespace {

using OJson = nlohmann::ordered_json;

// Trials are dispatched as an ordered work queue; rows land at their trial
// index so output is identical for every worker count.
template <class Fn>
std::vector<OJson> run_trials(long long trials, std::uint64_t master_seed, int workers, Fn fn) {
    if (trials < 1) throw InputError("trials must be >= 1");
    std::vector<OJson> rows(static_cast<std::size_t>(trials));
    int threads = resolve_workers(workers);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (long long i = 0; i < trials; ++i)
        rows[static_cast<std::size_t>(i)] = fn(i, derive_seed(master_seed, static_cast<std::uint64_t>(i)));
    (void)threads;
    return rows;
}

struct Moments {
    double mean = 0.0, stddev = 0.0, stderr_mean = 0.0;
};

Moments moments_of(const std::vector<OJson>& rows, const char* key) {
    double sum = 0.0;
    for (const OJson& r : rows) sum += r.at(key).get<double>();
    double n = static_cast<double>(rows.size());
    Moments m;
    m.mean = sum / n;
    if (rows.size() > 1) {
        double ss = 0.0;
        for (const OJson& r : rows) {
            double d = r.at(key).get<double>() - m.mean;
            ss += d * d;
        }
        m.stddev = std::sqrt(ss / (n - 1.0));
        m.stderr_mean = m.stddev / std::sqrt(n);
    }
    return m;
}

OJson config_echo(const ExperimentConfig& cfg, const char* kind) {
    OJson j;
    j["experiment"] = kind;
    j["n"] = cfg.n;
    j["q"] = cfg.q;
    j["r"] = cfg.r;
    if (cfg.alpha) j["alpha"] = cfg.alpha->alpha;
    j["k"] = cfg.k;
    j["t"] = cfg.t;
    j["cap"] = cfg.cap;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["budget"] = cfg.budget;
    j["restarts"] = cfg.restarts;
    return j;
}

Graph trial_graph(const ExperimentConfig& cfg, std::uint64_t trial_seed) {
    if (cfg.graph_file) return read_graph_file(*cfg.graph_file);
    return sample_gnp(cfg.n, trial_seed);
}

}  // namespace

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MODRES_WORKERS")) {
        int w = std::atoi(env);
        if (w > 0) return w;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

OutputFormat format_for(const std::optional<OutputFormat>& flag, const std::string& path) {
    if (flag) return *flag;
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return OutputFormat::json;
    return OutputFormat::csv;
}

LocalSearchParams search_params_from(const ExperimentConfig& cfg, std::uint64_t trial_seed) {
    LocalSearchParams p;
    p.seed = trial_seed;
    if (cfg.budget > 0) p.max_steps = cfg.budget;
    if (cfg.restarts > 0) p.restarts = cfg.restarts;
    return p;
}

ExperimentResult expectation_experiment(const ExperimentConfig& cfg) {
    ModParams mp{cfg.q, cfg.r};
    mp.validate();
    if (cfg.n > kMaxExactVertices)
        throw CapacityError("expectation_experiment requires n <= 26 (exact counting per trial)");
    if (cfg.k < 1 || cfg.k > cfg.n) throw InputError("expectation_experiment requires 1 <= k <= n");

    ExperimentResult out;
    out.config = config_echo(cfg, "expect");
    out.rows = run_trials(cfg.trials, cfg.seed, cfg.workers, [&](long long i, std::uint64_t seed) {
        Graph g = sample_gnp(cfg.n, seed);
        OJson row;
        row["trial"] = i;
        row["seed"] = seed;
        row["count"] = count_good(g, cfg.k, mp);
        return row;
    });

    // Exact finite-n reference C(n,k) * P[degree vector = r*1_k], preferring
    // the rational enumeration path when it is in range.
    ResidueVector target = ResidueVector::constant(cfg.k, cfg.r, cfg.q);
    double reference;
    if (static_cast<long long>(cfg.k) * (cfg.k - 1) / 2 <= kMaxEnumEdges) {
        ExactProb p = prob_symmetric(target, ProbMethod::enumeration);
        reference = to_double(BigRat(binomial_big(cfg.n, cfg.k)) * p.value);
    } else {
        ExactProb p = prob_symmetric(target, ProbMethod::fourier);
        reference = to_double(BigRat(binomial_big(cfg.n, cfg.k))) * p.approx_d();
    }
    // Asymptotic leading term for context (2/q^k for even q when feasible).
    double lead_factor = 1.0;
    if (cfg.q % 2 == 0) lead_factor = (cfg.r * cfg.k) % 2 == 0 ? 2.0 : 0.0;
    double lead = to_double(BigRat(binomial_big(cfg.n, cfg.k), pow_big(cfg.q, cfg.k))) * lead_factor;

    Moments m = moments_of(out.rows, "count");
    out.summary["trials"] = cfg.trials;
    out.summary["mean"] = m.mean;
    out.summary["stddev"] = m.stddev;
    out.summary["stderr"] = m.stderr_mean;
    out.summary["exact_ref"] = reference;
    out.summary["asymptotic_ref"] = lead;
    return out;
}

ExperimentResult threshold_scan(const ExperimentConfig& cfg) {
    ModParams mp{cfg.q, cfg.r};
    mp.validate();
    if (cfg.n > 24) throw CapacityError("threshold_scan requires n <= 24");
    long long k_ref = threshold_k(cfg.n, cfg.q).k;

    ExperimentResult out;
    out.config = config_echo(cfg, "scan");
    out.rows = run_trials(cfg.trials, cfg.seed, cfg.workers, [&](long long i, std::uint64_t seed) {
        Graph g = sample_gnp(cfg.n, seed);
        SearchResult res = exact_f(g, mp);
        OJson row;
        row["trial"] = i;
        row["seed"] = seed;
        row["f"] = res.best_size;
        row["k_ref"] = k_ref;
        row["offset"] = res.best_size - k_ref;
        return row;
    });

    std::map<long long, long long> hist;
    for (const OJson& r : out.rows) ++hist[r.at("offset").get<long long>()];
    OJson hist_json;
    for (const auto& [offset, count] : hist) hist_json[std::to_string(offset)] = count;
    Moments m = moments_of(out.rows, "f");
    out.summary["trials"] = cfg.trials;
    out.summary["k_ref"] = k_ref;
    out.summary["mean_f"] = m.mean;
    out.summary["offset_histogram"] = hist_json;
    return out;
}

ExperimentResult partition_experiment(const ExperimentConfig& cfg) {
    ModParams mp{cfg.q, cfg.r};
    mp.validate();
    ExperimentResult out;

    if (!cfg.heuristic) {
        int cap = cfg.cap > 0 ? cfg.cap : cfg.q + 1;
        out.config = config_echo(cfg, "partition-exact");
        out.config["cap"] = cap;
        out.rows = run_trials(cfg.trials, cfg.seed, cfg.workers, [&](long long i, std::uint64_t seed) {
            Graph g = trial_graph(cfg, seed);
            std::optional<int> p = exact_min_parts(g, mp, cap);
            OJson row;
            row["trial"] = i;
            row["seed"] = seed;
            row["p"] = p ? OJson(*p) : OJson(nullptr);
            row["success"] = p.has_value();
            return row;
        });
        long long successes = 0;
        for (const OJson& r : out.rows) successes += r.at("success").get<bool>();
        out.summary["trials"] = cfg.trials;
        out.summary["success_rate"] = static_cast<double>(successes) / static_cast<double>(cfg.trials);
        return out;
    }

    int t = cfg.t > 0 ? cfg.t : cfg.q + 1;
    out.config = config_echo(cfg, "partition-search");
    out.config["t"] = t;
    out.rows = run_trials(cfg.trials, cfg.seed, cfg.workers, [&](long long i, std::uint64_t seed) {
        Graph g = trial_graph(cfg, seed);
        PartitionSearchOutcome res = search_partition(g, mp, t, search_params_from(cfg, seed));
        OJson row;
        row["trial"] = i;
        row["seed"] = seed;
        row["success"] = res.success();
        row["steps"] = res.steps;
        row["objective"] = res.best_objective;
        row["verified"] = res.verified;
        return row;
    });
    long long successes = 0;
    bool all_verified = true;
    double steps = 0.0;
    for (const OJson& r : out.rows) {
        bool s = r.at("success").get<bool>();
        successes += s;
        if (s && !r.at("verified").get<bool>()) all_verified = false;
        steps += r.at("steps").get<double>();
    }
    out.summary["trials"] = cfg.trials;
    out.summary["success_rate"] = static_cast<double>(successes) / static_cast<double>(cfg.trials);
    out.summary["all_successes_verified"] = all_verified;
    out.summary["mean_steps"] = steps / static_cast<double>(cfg.trials);
    return out;
}

ExperimentResult decay_experiment(const ExperimentConfig& cfg, DecayExpMode mode) {
    ExperimentResult out;
    if (mode == DecayExpMode::lemma23) {
        out.config = config_echo(cfg, "decay-lemma23");
        bool all_within = true;
        for (int n = cfg.m_min; n <= cfg.m_max; ++n) {
            long double worst = 0.0L;
            for (int a = 0; a < cfg.q; ++a) {
                ExactProb p = prob_sum_mod(n, a, cfg.q, ProbMethod::closed_form);
                worst = std::max(worst,
                                 std::fabs(to_long_double(p.value - BigRat(1, cfg.q))));
            }
            double bound = (static_cast<double>(cfg.q) - 1.0) / cfg.q *
                           std::exp(-2.0 * n / (static_cast<double>(cfg.q) * cfg.q));
            bool within = static_cast<double>(worst) <= bound + 1e-12;
            all_within = all_within && within;
            OJson row;
            row["n"] = n;
            row["q"] = cfg.q;
            row["max_abs_error"] = static_cast<double>(worst);
            row["bound"] = bound;
            row["within_bound"] = within;
            out.rows.push_back(std::move(row));
        }
        out.summary["all_within_bound"] = all_within;
        return out;
    }

    DecayMode dm = mode == DecayExpMode::symmetric ? DecayMode::symmetric : DecayMode::asym;
    out.config = config_echo(cfg, dm == DecayMode::symmetric ? "decay-symmetric" : "decay-asym");
    DecayProfile profile = decay_profile(cfg.q, cfg.m_min, cfg.m_max, dm);
    for (const DecayRow& r : profile.rows) {
        OJson row;
        row["m"] = r.m;
        row["q"] = r.q;
        row["mode"] = decay_mode_name(r.mode);
        row["normalized_error"] = r.normalized_error;
        out.rows.push_back(std::move(row));
    }
    // Log-linear fit slope over the strictly positive errors.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int pts = 0;
    for (const DecayRow& r : profile.rows)
        if (r.normalized_error > 0.0) {
            double x = r.m, y = std::log(r.normalized_error);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++pts;
        }
    if (pts >= 2 && pts * sxx - sx * sx != 0.0)
        out.summary["log_linear_slope"] = (pts * sxy - sx * sy) / (pts * sxx - sx * sx);
    else
        out.summary["log_linear_slope"] = nullptr;
    return out;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::string csv_cell(const OJson& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

}  // namespace

std::string ExperimentResult::to_csv() const {
    std::string out;
    if (!rows.empty()) {
        bool first = true;
        for (auto it = rows.front().begin(); it != rows.front().end(); ++it) {
            if (!first) out += ',';
            out += it.key();
            first = false;
        }
        out += '\n';
        for (const OJson& row : rows) {
            first = true;
            for (auto it = row.begin(); it != row.end(); ++it) {
                if (!first) out += ',';
                out += csv_cell(it.value());
                first = false;
            }
            out += '\n';
        }
    }
    for (auto it = summary.begin(); it != summary.end(); ++it)
        out += "# " + it.key() + "," + csv_cell(it.value()) + "\n";
    return out;
}

nlohmann::ordered_json ExperimentResult::to_json() const {
    OJson j;
    j["config"] = config;
    j["rows"] = rows;
    j["summary"] = summary;
    return j;
}

std::string ExperimentResult::render(OutputFormat f) const {
    if (f == OutputFormat::csv) return to_csv();
    return to_json().dump(2) + "\n";
}

void ExperimentResult::write_file(const std::string& path, OutputFormat f) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open output file: " + path);
    out << render(f);
}

}  // namespace modres
