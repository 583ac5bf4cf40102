#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "modres/rng.hpp"
#include "modres/thresholds.hpp"

using namespace modres;

namespace {

// Independent root oracle: dense-grid sign scan of f on [lo, hi].
template <class F>
double grid_root(F&& f, double lo, double hi, int grid) {
    double prev = f(lo);
    for (int i = 1; i <= grid; ++i) {
        double x = lo + (hi - lo) * i / grid;
        double cur = f(x);
        if (prev > 0.0 && cur <= 0.0) return x;
        prev = cur;
    }
    return hi;
}

}  // namespace

TEST_CASE("log2_g examples") {
    CHECK(log2_g(1000, 0, 7) == 0.0);
    CHECK(log2_g(10, 6, 2) == doctest::Approx(std::log2(210.0 / 64.0)).epsilon(1e-12));
    CHECK(log2_g(10, 7, 2) < 0.0);
    CHECK(log2_g(10, 7, 2) == doctest::Approx(std::log2(120.0 / 128.0)).epsilon(1e-12));
    CHECK_THROWS_AS(log2_g(5, 6, 2), InputError);
}

TEST_CASE("threshold_k small exact values") {
    CHECK(threshold_k(10, 2).k == 6);
    CHECK(threshold_k(10, 3).k == 5);
    ThresholdReport rep = threshold_k(10, 3);
    CHECK(rep.log2_g_k >= 0.0);
    CHECK(rep.log2_g_k1 < 0.0);
}

TEST_CASE("threshold_k agrees with the big-integer oracle") {
    for (int q = 2; q <= 6; ++q)
        for (int n = 1; n <= 60; ++n) CHECK(threshold_k(n, q).k == threshold_k_exact(n, q));
}

TEST_CASE("threshold_k >= floor(n/q)") {
    for (int q = 2; q <= 10; ++q)
        for (int n = 1; n <= 300; n += 7) CHECK(threshold_k(n, q).k >= n / q);
}

TEST_CASE("monotone ratio identity g(k)/g(k+1) = q(k+1)/(n-k)") {
    for (int q : {2, 3, 5}) {
        long long n = 400;
        for (long long k = 0; k < n; k += 13) {
            double lhs = log2_g(n, k, q) - log2_g(n, k + 1, q);
            double rhs = std::log2(static_cast<double>(q) * (k + 1) / static_cast<double>(n - k));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        }
    }
}

TEST_CASE("threshold constant for q=2 approaches 0.7729") {
    ThresholdReport rep = threshold_k(100000, 2);
    CHECK(static_cast<double>(rep.k) / 100000.0 == doctest::Approx(0.7729).epsilon(1e-3));
}

TEST_CASE("threshold_k_alpha collapses to threshold_k for indicator alpha") {
    for (int q : {2, 3, 6}) {
        for (int r = 0; r < q; r += 2) {
            DistributionSpec ind = DistributionSpec::indicator(q, r);
            for (int n = 1; n <= 500; n += 13)
                CHECK(threshold_k_alpha(n, ind).k == threshold_k(n, q).k);
        }
    }
}

TEST_CASE("threshold_k_alpha brute force, n=10 q=2 uniform") {
    DistributionSpec half{2, {0.5, 0.5}};
    // Direct check over k = 0..10 and both roundings with exact integers.
    long long expected = 0;
    for (long long k = 0; k <= 10; ++k) {
        bool all_ok = true;
        for (const auto& parts : rounding_choices(half, k)) {
            BigInt lhs = binomial_big(10, k) * multinomial_big(parts);
            if (lhs < pow_big(2, k)) all_ok = false;
        }
        if (all_ok) expected = k;
    }
    CHECK(threshold_k_alpha(10, half).k == expected);
}

TEST_CASE("rounding_choices respects floors, ceilings and the sum") {
    DistributionSpec alpha{3, {0.5, 0.3, 0.2}};
    for (long long k : {1, 7, 10, 33}) {
        auto choices = rounding_choices(alpha, k);
        CHECK(!choices.empty());
        for (const auto& parts : choices) {
            long long sum = 0;
            for (int i = 0; i < 3; ++i) {
                double x = alpha.alpha[i] * static_cast<double>(k);
                CHECK(parts[i] >= static_cast<long long>(std::floor(x)) - 0);
                CHECK(parts[i] <= static_cast<long long>(std::ceil(x)));
                sum += parts[i];
            }
            CHECK(sum == k);
        }
    }
    // Exact-integer alpha*k collapses floor = ceil.
    DistributionSpec thirds{3, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
    auto choices = rounding_choices(thirds, 9);
    REQUIRE(choices.size() == 1);
    CHECK(choices[0] == std::vector<long long>{3, 3, 3});
}

TEST_CASE("entropy examples") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(entropy(DistributionSpec::uniform(3)) == doctest::Approx(std::log2(3.0)).epsilon(1e-15));
    CHECK(entropy(DistributionSpec::indicator(4, 2)) == 0.0);
}

TEST_CASE("h boundary values are exact") {
    DistributionSpec alpha{3, {0.6, 0.3, 0.1}};
    CHECK(h_of(0.0, alpha) == 0.0);
    CHECK(h_of(1.0, alpha) == entropy(alpha) - std::log2(3.0));
    CHECK(h_of(1.0, DistributionSpec::uniform(5)) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(h_prime(0.0, alpha), InputError);
    CHECK_THROWS_AS(h_prime(1.0, alpha), InputError);
}

TEST_CASE("h_prime matches centered finite differences") {
    SplitMix64 rng(2024);
    for (int q : {2, 3, 4, 5, 6}) {
        std::vector<double> a(q);
        double sum = 0.0;
        for (double& x : a) sum += x = rng.next_unit() + 0.01;
        for (double& x : a) x /= sum;
        DistributionSpec alpha{q, a};
        for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            double fd = (h_of(x + 1e-5, alpha) - h_of(x - 1e-5, alpha)) / 2e-5;
            CHECK(std::fabs(h_prime(x, alpha) - fd) < 1e-6);
        }
    }
}

TEST_CASE("h is concave: h_prime strictly decreasing on a grid") {
    DistributionSpec alpha{3, {0.5, 0.25, 0.25}};
    double prev = h_prime(0.001, alpha);
    for (int i = 1; i <= 200; ++i) {
        double x = 0.001 + 0.998 * i / 200.0;
        double cur = h_prime(x, alpha);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("h is nonnegative on (0, 1/(q+1)]") {
    SplitMix64 rng(555);
    for (int q = 2; q <= 6; ++q) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> a(q);
            double sum = 0.0;
            for (double& x : a) sum += x = rng.next_unit();
            for (double& x : a) x /= sum;
            DistributionSpec alpha{q, a};
            CHECK(h_of(1.0 / (q + 1.0), alpha) >= 0.0);
        }
    }
}

TEST_CASE("root_x0: uniform case returns 1") {
    for (int q = 2; q <= 6; ++q)
        CHECK(root_x0(DistributionSpec::uniform(q)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("root_x0 for the indicator at q=2 is Scott's constant") {
    DistributionSpec ind = DistributionSpec::indicator(2, 0);
    double x0 = root_x0(ind);
    CHECK(x0 == doctest::Approx(0.7729).epsilon(7e-4));
    // Independent oracle: dense sign scan of H(x) - x.
    double oracle = grid_root([](double x) { return binary_entropy(x) - x; }, 0.5, 1.0, 2000000);
    CHECK(std::fabs(x0 - oracle) < 1e-5);
    CHECK(std::fabs(h_of(x0, ind)) <= 1e-9);
}

TEST_CASE("root_x0 for the indicator at q=3") {
    DistributionSpec ind = DistributionSpec::indicator(3, 1);
    double x0 = root_x0(ind);
    double oracle = grid_root([](double x) { return binary_entropy(x) - x * std::log2(3.0); },
                              0.25, 1.0, 2000000);
    CHECK(x0 > 0.25);
    CHECK(x0 < 1.0);
    CHECK(std::fabs(x0 - oracle) < 1e-5);
    // h must be negative past the root.
    for (double x : {x0 + 1e-3, x0 + 0.05, 0.999})
        CHECK(h_of(x, ind) < 0.0);
}

TEST_CASE("threshold_k_alpha(n)/n approaches root_x0") {
    DistributionSpec alpha{3, {0.7, 0.2, 0.1}};
    double x0 = root_x0(alpha);
    double prev = 1.0;
    for (long long n : {1000, 10000, 100000}) {
        double ratio = static_cast<double>(threshold_k_alpha(n, alpha).k) / static_cast<double>(n);
        double gap = std::fabs(ratio - x0);
        CHECK(gap < prev);
        prev = gap;
    }
}

TEST_CASE("appendix_gap examples") {
    DistributionSpec uni = DistributionSpec::uniform(3);
    CHECK(appendix_gap(100, 0, uni) == 0.0);
    double gap3 = appendix_gap(1000, 300, uni);
    double gap4 = appendix_gap(10000, 3000, uni);
    CHECK(gap4 < gap3);
    CHECK(gap4 <= 0.05);
}

TEST_CASE("ThresholdReport serializes with the expected keys") {
    nlohmann::json j = threshold_k(10, 2).to_json();
    for (const char* key : {"n", "q", "alpha", "k", "log2_g_k", "log2_g_k1", "x0"})
        CHECK(j.contains(key));
    CHECK(j["k"] == 6);
    CHECK(j["alpha"].is_null());
}
