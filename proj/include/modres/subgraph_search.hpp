#pragma once
#include <cstdint>
#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "modres/graph.hpp"

namespace modres {

inline constexpr int kMaxExactVertices = 26;  // 2^n subset enumeration guard

struct SearchResult {
    int best_size = 0;
    std::optional<VertexSet> witness;  // present iff best_size > 0
    bool exact = false;
    std::uint64_t nodes_explored = 0;

    nlohmann::json to_json() const;
};

struct LocalSearchParams {
    std::uint64_t max_steps = 25'000;  // per restart
    int restarts = 64;
    std::uint64_t seed = 1;
    double w_add = 0.10;
    double w_remove = 0.05;
    double w_swap = 0.85;
    // Worsening moves are accepted with probability noise^delta; sideways
    // moves always pass. Pure hill climbing strands the walk on plateaus
    // where almost no move is non-worsening.
    double noise = 0.5;
    std::uint64_t plateau_tol = 25'000;  // non-improving steps before restart
};

// f(G,r,q): maximum order of an induced subgraph with all degrees = r (mod q),
// 0 if none. Gray-code walk over all 2^n - 1 nonempty subsets with one-vertex
// deltas; OpenMP workers own slices fixed by the top subset bits. Witness is
// the lexicographically least vertex list among maximum-size good sets.
SearchResult exact_f(const Graph& g, ModParams mp);

// f(G,alpha,q): same engine with the rounded-histogram predicate.
SearchResult exact_f_alpha(const Graph& g, const DistributionSpec& alpha);

// X_k: number of good k-subsets.
std::uint64_t count_good(const Graph& g, int k, ModParams mp);
std::uint64_t count_good_alpha(const Graph& g, int k, const DistributionSpec& alpha);

// Serial reference engines recomputing degrees per subset; oracle and
// benchmark baseline for the Gray-code kernels.
SearchResult exact_f_naive(const Graph& g, ModParams mp);
std::uint64_t count_good_naive(const Graph& g, int k, ModParams mp);

// Seeded multi-restart local search for a good set of order k_target on
// graphs beyond exhaustive range (n <= 64). Objective: number of members
// with wrong residue, ties toward |S| near k_target. Any witness returned
// has been re-verified with is_good.
SearchResult local_search_f(const Graph& g, ModParams mp, int k_target,
                            const LocalSearchParams& params);

}  // namespace modres
