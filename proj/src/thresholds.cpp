#include "modres/thresholds.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace modres {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;
constexpr double kTieEps = 1e-9;
// Exact tie resolution is limited to sizes where big-integer binomials stay cheap.
constexpr long long kMaxExactTie = 10'000;

double log2_binomial(long long n, long long k) {
    return (std::lgamma(static_cast<double>(n) + 1.0) -
            std::lgamma(static_cast<double>(k) + 1.0) -
            std::lgamma(static_cast<double>(n - k) + 1.0)) /
           kLn2;
}

double log2_multinomial(long long k, const std::vector<long long>& parts) {
    double acc = std::lgamma(static_cast<double>(k) + 1.0);
    for (long long p : parts) acc -= std::lgamma(static_cast<double>(p) + 1.0);
    return acc / kLn2;
}

// Sign of C(n,k) multinomial - q^k by exact integer arithmetic.
int exact_sign(long long n, long long k, int q, const std::vector<long long>* parts) {
    BigInt lhs = binomial_big(n, k);
    if (parts) lhs *= multinomial_big(*parts);
    BigInt rhs = pow_big(q, k);
    if (lhs > rhs) return 1;
    if (lhs < rhs) return -1;
    return 0;
}

// True iff the (possibly multinomial-weighted) g(k) is >= 1, resolving
// near-zero log values exactly when feasible.
bool g_at_least_one(long long n, long long k, int q, double log_val,
                    const std::vector<long long>* parts) {
    if (std::fabs(log_val) > kTieEps) return log_val > 0.0;
    if (n <= kMaxExactTie) return exact_sign(n, k, q, parts) >= 0;
    return log_val >= 0.0;
}

}  // namespace

double log2_g(long long n, long long k, int q) {
    if (q < 2) throw InputError("modulus q must be >= 2");
    if (n < 0 || k < 0 || k > n) throw InputError("log2_g requires 0 <= k <= n");
    return log2_binomial(n, k) - static_cast<double>(k) * std::log2(static_cast<double>(q));
}

double log2_g_alpha(long long n, long long k, int q, const std::vector<long long>& parts) {
    return log2_g(n, k, q) + log2_multinomial(k, parts);
}

ThresholdReport threshold_k(long long n, int q) {
    if (n < 1) throw InputError("threshold_k requires n >= 1");
    if (q < 2) throw InputError("modulus q must be >= 2");
    ThresholdReport rep;
    rep.n = n;
    rep.q = q;
    long long best = 0;
    // g(k)/g(k+1) = q(k+1)/(n-k) exceeds 1 once k > (n-q)/(q+1); past that
    // point g only decreases, so a clearly negative value ends the scan.
    long long decreasing_from = (n - q) / (q + 1) + 1;
    for (long long k = 0; k <= n; ++k) {
        double val = log2_g(n, k, q);
        if (g_at_least_one(n, k, q, val, nullptr)) best = k;
        else if (k > decreasing_from && val < -1.0) break;
    }
    rep.k = best;
    rep.log2_g_k = log2_g(n, best, q);
    if (best < n) rep.log2_g_k1 = log2_g(n, best + 1, q);
    rep.x0 = root_x0(DistributionSpec::indicator(q, 0));
    return rep;
}

long long threshold_k_exact(long long n, int q) {
    if (n < 1) throw InputError("threshold_k_exact requires n >= 1");
    if (q < 2) throw InputError("modulus q must be >= 2");
    BigInt binom = 1;  // C(n,0)
    BigInt qpow = 1;
    long long best = 0;
    for (long long k = 1; k <= n; ++k) {
        binom *= n - k + 1;
        binom /= k;
        qpow *= q;
        if (binom >= qpow) best = k;
    }
    return best;
}

std::vector<std::vector<long long>> rounding_choices(const DistributionSpec& alpha, long long k) {
    alpha.validate();
    int q = alpha.q;
    std::vector<long long> lo(q), hi(q);
    for (int i = 0; i < q; ++i) {
        double x = alpha.alpha[i] * static_cast<double>(k);
        double nearest = std::round(x);
        if (std::fabs(x - nearest) <= 1e-9) {
            lo[i] = hi[i] = static_cast<long long>(nearest);
        } else {
            lo[i] = static_cast<long long>(std::floor(x));
            hi[i] = lo[i] + 1;
        }
    }
    std::vector<std::vector<long long>> out;
    std::vector<long long> cur(q);
    auto rec = [&](auto&& self, int i, long long sum) -> void {
        if (sum > k) return;
        if (i == q) {
            if (sum == k) out.push_back(cur);
            return;
        }
        cur[i] = lo[i];
        self(self, i + 1, sum + lo[i]);
        if (hi[i] != lo[i]) {
            cur[i] = hi[i];
            self(self, i + 1, sum + hi[i]);
        }
    };
    rec(rec, 0, 0);
    if (out.empty())
        throw std::logic_error("no rounding pattern sums to k; floor/ceil bounds violated");
    return out;
}

ThresholdReport threshold_k_alpha(long long n, const DistributionSpec& alpha) {
    if (n < 1) throw InputError("threshold_k_alpha requires n >= 1");
    alpha.validate();
    int q = alpha.q;
    auto min_log = [&](long long k) {
        double worst = 0.0;
        bool first = true;
        for (const auto& parts : rounding_choices(alpha, k)) {
            double val = log2_g_alpha(n, k, q, parts);
            if (first || val < worst) worst = val;
            first = false;
        }
        return worst;
    };
    auto ok = [&](long long k) {
        for (const auto& parts : rounding_choices(alpha, k)) {
            double val = log2_g_alpha(n, k, q, parts);
            if (!g_at_least_one(n, k, q, val, &parts)) return false;
        }
        return true;
    };
    long long best = 0;
#pragma omp parallel for schedule(static) reduction(max : best)
    for (long long k = 0; k <= n; ++k)
        if (ok(k)) best = std::max(best, k);
    ThresholdReport rep;
    rep.n = n;
    rep.q = q;
    rep.alpha = alpha;
    rep.k = best;
    rep.log2_g_k = min_log(best);
    if (best < n) rep.log2_g_k1 = min_log(best + 1);
    rep.x0 = root_x0(alpha);
    return rep;
}

double entropy(const DistributionSpec& alpha) {
    alpha.validate();
    double h = 0.0;
    for (double a : alpha.alpha)
        if (a > 0.0) h -= a * std::log2(a);
    return h;
}

double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0) throw InputError("binary_entropy requires 0 <= x <= 1");
    double h = 0.0;
    if (x > 0.0) h -= x * std::log2(x);
    if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
    return h;
}

double h_of(double x, const DistributionSpec& alpha) {
    return entropy(alpha) * x + binary_entropy(x) - x * std::log2(static_cast<double>(alpha.q));
}

double h_prime(double x, const DistributionSpec& alpha) {
    if (x <= 0.0 || x >= 1.0) throw InputError("h_prime is defined on the open interval (0,1)");
    return entropy(alpha) + std::log2((1.0 - x) / x) - std::log2(static_cast<double>(alpha.q));
}

double root_x0(const DistributionSpec& alpha) {
    alpha.validate();
    double h1 = h_of(1.0, alpha);
    if (std::fabs(h1) <= 1e-9) return 1.0;  // uniform case, h(1) = 0
    // h' decreases strictly (h'' < 0); bracket its sign change to find the
    // interior maximum x*, where h(x*) > 0.
    double lo = 1e-14, hi = 1.0 - 1e-14;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        double mid = 0.5 * (lo + hi);
        (h_prime(mid, alpha) > 0.0 ? lo : hi) = mid;
    }
    double xstar = 0.5 * (lo + hi);
    // h(x*) > 0 > h(1): bisect h on [x*, 1].
    lo = xstar;
    hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-11; ++it) {
        double mid = 0.5 * (lo + hi);
        (h_of(mid, alpha) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double appendix_gap(long long n, long long k, const DistributionSpec& alpha) {
    if (n < 1 || k < 0 || k > n) throw InputError("appendix_gap requires 0 <= k <= n >= 1");
    alpha.validate();
    double target = h_of(static_cast<double>(k) / static_cast<double>(n), alpha);
    double worst = 0.0;
    for (const auto& parts : rounding_choices(alpha, k)) {
        double lhs = log2_g_alpha(n, k, alpha.q, parts) / static_cast<double>(n);
        worst = std::max(worst, std::fabs(lhs - target));
    }
    return worst;
}

nlohmann::json ThresholdReport::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["q"] = q;
    if (alpha) j["alpha"] = alpha->alpha;
    else j["alpha"] = nullptr;
    j["k"] = k;
    j["log2_g_k"] = log2_g_k;
    j["log2_g_k1"] = log2_g_k1;
    if (x0) j["x0"] = *x0;
    else j["x0"] = nullptr;
    return j;
}

}  // namespace modres
