#pragma once
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "modres/bigint.hpp"
#include "modres/graph.hpp"

namespace modres {

struct ThresholdReport {
    long long n = 0;
    int q = 2;
    std::optional<DistributionSpec> alpha;
    long long k = 0;
    double log2_g_k = 0.0;   // at k
    double log2_g_k1 = 0.0;  // at k+1
    std::optional<double> x0;

    nlohmann::json to_json() const;
};

// log2( C(n,k) q^{-k} ) via log-gamma.
double log2_g(long long n, long long k, int q);

// log2( C(n,k) multinomial(k; parts) q^{-k} ).
double log2_g_alpha(long long n, long long k, int q, const std::vector<long long>& parts);

// Greatest k with C(n,k) q^{-k} >= 1. Linear scan of the sign sequence;
// values within 1e-9 of zero are settled by exact integer arithmetic.
ThresholdReport threshold_k(long long n, int q);

// Exact big-integer scan; the oracle path for moderate n.
long long threshold_k_exact(long long n, int q);

// Greatest k such that C(n,k) multinomial(k; k_0..k_{q-1}) q^{-k} >= 1 for
// EVERY floor/ceil rounding pattern (k_i) summing to k.
ThresholdReport threshold_k_alpha(long long n, const DistributionSpec& alpha);

// All floor/ceil rounding patterns of alpha*k that sum to k (at most 2^q).
std::vector<std::vector<long long>> rounding_choices(const DistributionSpec& alpha, long long k);

// Shannon entropy in bits; 0 log 0 := 0.
double entropy(const DistributionSpec& alpha);
double binary_entropy(double x);

// h(x) = H(alpha) x + H(x) - x log2 q and its derivative on (0,1).
double h_of(double x, const DistributionSpec& alpha);
double h_prime(double x, const DistributionSpec& alpha);

// Largest root of h in (0,1]: 1 in the uniform case, else located by
// bisection on [x*, 1] where x* is h's unique interior maximum.
double root_x0(const DistributionSpec& alpha);

// | log2(C(n,k) multinomial q^{-k}) / n  -  h(k/n) |, worst rounding pattern.
double appendix_gap(long long n, long long k, const DistributionSpec& alpha);

}  // namespace modres
