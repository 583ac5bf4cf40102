#pragma once
#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "modres/bigint.hpp"
#include "modres/graph.hpp"
#include "modres/subgraph_search.hpp"  // LocalSearchParams

namespace modres {

inline constexpr int kMaxMinPartsVertices = 12;   // set-partition enumeration guard
inline constexpr int kMaxBalancedVertices = 16;   // balanced-count guard
inline constexpr int kMaxBalancedParts = 5;

// Ordered tuple of disjoint vertex sets covering [n]. "Balanced" means every
// part size lies in {floor(n/t), ceil(n/t)}.
struct Partition {
    int n = 0;
    std::vector<VertexSet> parts;

    nlohmann::json to_json() const;  // list of sorted vertex lists
};

struct OverlapReport {
    std::vector<std::vector<int>> counts;  // |U_i ∩ V_j|
    bool typical = false;                  // all entries <= n/(3t)

    nlohmann::json to_json() const;
};

// Canonical balanced shape: (n mod t) parts of size ceil(n/t) at the lowest
// indices, the rest floor(n/t).
std::vector<int> balanced_sizes(int n, int t);

// M(n,t): multinomial count of ordered balanced t-part partitions.
BigInt balanced_count(int n, int t);

// p(G,r,q) when it is <= cap: least number of parts in a partition where
// every part induces all degrees = r (mod q). Set partitions enumerated by
// restricted-growth strings in increasing part count. n <= 12.
std::optional<int> exact_min_parts(const Graph& g, ModParams mp, int cap);

// Number of ordered balanced t-tuples (canonical size vector) with every
// part good. Empty parts (possible only when floor(n/t) = 0) are vacuously
// good. n <= 16, t <= 5.
std::uint64_t count_balanced_good(const Graph& g, ModParams mp, int t);

struct PartitionSearchOutcome {
    std::optional<Partition> partition;
    std::uint64_t steps = 0;
    int best_objective = 0;  // least number of wrong-residue vertices seen
    bool verified = false;

    bool success() const { return partition.has_value(); }
};

// Seeded local search over balanced ordered partitions into t parts.
// Objective: number of vertices whose degree inside their own part is not
// r (mod q). Moves: cross-part swaps (size preserving) and, when part sizes
// differ, single relocations. Successes are independently re-verified.
PartitionSearchOutcome search_partition(const Graph& g, ModParams mp, int t,
                                        const LocalSearchParams& params);

// Pairwise part intersections and the |U_i ∩ V_j| <= n/(3t) typicality flag
// (evaluated in exact integer arithmetic as 3 t |U_i ∩ V_j| <= n).
OverlapReport overlap_typicality(const Partition& u, const Partition& v);

// Disjointness, coverage, (optionally) balance, and per-part goodness via
// naive recomputation. Used to certify every heuristic success.
bool verify_partition(const Graph& g, const Partition& p, ModParams mp, bool require_balanced);

}  // namespace modres
