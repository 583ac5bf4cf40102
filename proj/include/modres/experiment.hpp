#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "modres/graph.hpp"
#include "modres/residue_dist.hpp"
#include "modres/subgraph_search.hpp"

namespace modres {

enum class OutputFormat { csv, json };

// Seeded-parallel Monte Carlo driver configuration. Worker count and output
// destination never influence emitted bytes: per-trial seeds derive from
// (seed, trial index) and rows are emitted in trial order.
struct ExperimentConfig {
    int n = 0;
    int q = 2;
    int r = 0;
    int k = 0;
    int t = 0;
    int cap = 0;
    int m_min = 1;
    int m_max = 1;
    std::optional<DistributionSpec> alpha;
    long long trials = 1;
    std::uint64_t seed = 1;
    int workers = 0;           // 0: MODRES_WORKERS env, then OpenMP default
    std::uint64_t budget = 0;  // heuristic steps per restart; 0 = default
    int restarts = 0;          // 0 = default
    bool heuristic = false;    // partition experiment mode
    std::optional<std::string> graph_file;
};

struct ExperimentResult {
    nlohmann::ordered_json config;  // echo of the science parameters only
    std::vector<nlohmann::ordered_json> rows;
    nlohmann::ordered_json summary;

    std::string to_csv() const;  // rows, then "# key,value" summary lines
    nlohmann::ordered_json to_json() const;
    std::string render(OutputFormat f) const;
    void write_file(const std::string& path, OutputFormat f) const;
};

int resolve_workers(int requested);
OutputFormat format_for(const std::optional<OutputFormat>& flag, const std::string& path);

// Mean of exact X_k (count of good k-subsets) over sampled graphs, against
// the exact reference C(n,k) * prob_symmetric(r*1_k, q).
ExperimentResult expectation_experiment(const ExperimentConfig& cfg);

// Distribution of f(G,r,q) - k(n,q) over sampled graphs (recorded, not
// asserted: the theorem's window constants are unspecified).
ExperimentResult threshold_scan(const ExperimentConfig& cfg);

// Exact mode: p(G,r,q) up to cap per trial. Heuristic mode: balanced
// (r,q)-partition search into t parts, all successes re-verified.
ExperimentResult partition_experiment(const ExperimentConfig& cfg);

enum class DecayExpMode { lemma23, symmetric, asym };

// lemma23: per n, max_a |P[sum = a] - 1/q| against the proven bound
// ((q-1)/q) e^{-2n/q^2}. symmetric/asym: normalized decay rows.
ExperimentResult decay_experiment(const ExperimentConfig& cfg, DecayExpMode mode);

// Local-search parameter block from an ExperimentConfig (budget/restarts/seed).
LocalSearchParams search_params_from(const ExperimentConfig& cfg, std::uint64_t trial_seed);

}  // namespace modres
