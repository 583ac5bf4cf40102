#pragma once
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "modres/bigint.hpp"
#include "modres/graph.hpp"

namespace modres {

// Every probability here has two independent computation paths (exhaustive
// enumeration and character sums over Z_q), used as mutual oracles. Sums over
// an n-bit sample space have closed binomial forms as a third path.
enum class ProbMethod { enumeration, fourier, closed_form };

struct ExactProb {
    BigRat value;            // exact rational; meaningful when exact()
    long double approx = 0;  // always set
    ProbMethod method = ProbMethod::closed_form;

    bool exact() const { return method != ProbMethod::fourier; }
    double approx_d() const { return static_cast<double>(approx); }
};

// Enumeration caps, chosen so any single call finishes well under a second.
inline constexpr int kMaxEnumBits = 24;        // s*t for matrix enumerations
inline constexpr int kMaxEnumEdges = 28;       // C(m,2) for graph enumerations
inline constexpr long long kMaxFourierTerms = 20'000'000;  // q^m / q^{s+t}

// P[xi_1 + ... + xi_n = a (mod q)] for iid Bern(1/2) xi.
// closed_form: sum of C(n,j) over j = a (mod q), over 2^n, exact rational.
// fourier: (1/q) sum_l e_q(-l a) ((1+e_q(l))/2)^n.
// enumeration: all 2^n outcomes (n <= kMaxEnumBits).
ExactProb prob_sum_mod(long long n, int a, int q,
                       ProbMethod method = ProbMethod::closed_form);

// P[every row sum of an s x t iid Bern(1/2) matrix = v_i (mod q)].
// closed_form/fourier: product over rows of prob_sum_mod(t, v_i, q).
// enumeration: all 2^{s t} matrices.
ExactProb prob_asym_rowsums(int s, int t, const ResidueVector& v,
                            ProbMethod method = ProbMethod::closed_form);

// P[degree vector of a uniform graph on m vertices = v (mod q)], i.e. row
// sums of a uniform symmetric 0/1 matrix with zero diagonal.
// enumeration: all 2^{C(m,2)} graphs. fourier: the q^m-term character sum
// (1/q^m) sum_l e_q(-l.v) prod_{j<k} (1+e_q(l_j+l_k))/2.
ExactProb prob_symmetric(const ResidueVector& v,
                         ProbMethod method = ProbMethod::enumeration);

// Joint law of (column sums, row sums) of an s x t iid Bern(1/2) matrix:
// P[1_s^T M = v^T and M 1_t = u]. Returns exact 0 when sum(u) != sum(v) mod q.
ExactProb prob_joint(const ResidueVector& u, const ResidueVector& v,
                     ProbMethod method = ProbMethod::enumeration);

// max_{1<=l<=q-1} |cos(pi l / q)| - e^{-2/q^2}; contract: <= 0 for all q >= 2.
double cosine_gap(int q);

// Exact graph counts per degree-residue vector: entry at index sum_i v_i q^i
// counts graphs on m vertices whose degree vector is v (mod q). Denominator
// is 2^{C(m,2)}. OpenMP Gray-code kernel; see sym_degree_counts_naive.
std::vector<std::uint64_t> sym_degree_counts(int m, int q);
// Serial per-graph recount without incremental deltas; reference for tests.
std::vector<std::uint64_t> sym_degree_counts_naive(int m, int q);

// Same table through the character-sum path (approximate reals).
std::vector<double> sym_prob_table_fourier(int m, int q);

enum class DecayMode { symmetric, asym };

struct DecayRow {
    int m;
    int q;
    DecayMode mode;
    double normalized_error;  // q^m * max over feasible v of |P(v) - lead(v)|
};

struct DecayProfile {
    std::vector<DecayRow> rows;
    std::string to_csv() const;  // header m,q,mode,normalized_error
};

// symmetric: lead(v) = 1/q^m for odd q, 2/q^m for even q and even sum(v)
// (infeasible v excluded). asym: s=1 row sums of length m, lead = 1/q.
DecayProfile decay_profile(int q, int m_min, int m_max, DecayMode mode);

const char* decay_mode_name(DecayMode mode);

}  // namespace modres
