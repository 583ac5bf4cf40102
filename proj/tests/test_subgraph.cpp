#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>

#include <omp.h>

#include "modres/rng.hpp"
#include "modres/subgraph_search.hpp"

using namespace modres;

namespace {

Graph triangle() {
    Graph g(3);
    g.set_edge(0, 1, true);
    g.set_edge(0, 2, true);
    g.set_edge(1, 2, true);
    return g;
}

Graph path3() {
    Graph g(3);
    g.set_edge(0, 1, true);
    g.set_edge(1, 2, true);
    return g;
}

}  // namespace

TEST_CASE("exact_f examples") {
    SearchResult full = exact_f(triangle(), {2, 0});
    CHECK(full.best_size == 3);
    REQUIRE(full.witness.has_value());
    CHECK(full.witness->members() == std::vector<int>{0, 1, 2});
    CHECK(full.exact);
    CHECK(full.nodes_explored == 7);

    CHECK(exact_f(triangle(), {2, 1}).best_size == 2);

    SearchResult none = exact_f(Graph(5), {2, 1});
    CHECK(none.best_size == 0);
    CHECK_FALSE(none.witness.has_value());
}

TEST_CASE("exact_f lexicographically least witness") {
    // Path 0-1-2-3: the odd-degree sets of maximum order are the three edges;
    // {0,1} is lexicographically least.
    Graph p4(4);
    p4.set_edge(0, 1, true);
    p4.set_edge(1, 2, true);
    p4.set_edge(2, 3, true);
    SearchResult res = exact_f(p4, {2, 1});
    CHECK(res.best_size == 2);
    REQUIRE(res.witness.has_value());
    CHECK(res.witness->members() == std::vector<int>{0, 1});
}

TEST_CASE("exact_f equals the naive engine on random graphs") {
    for (int trial = 0; trial < 40; ++trial) {
        std::uint64_t seed = derive_seed(1234, trial);
        int n = 1 + static_cast<int>(seed % 12);
        Graph g = sample_gnp(n, seed);
        for (int q = 2; q <= 4; ++q) {
            for (int r = 0; r < q; ++r) {
                SearchResult fast = exact_f(g, {q, r});
                SearchResult slow = exact_f_naive(g, {q, r});
                CHECK(fast.best_size == slow.best_size);
                CHECK(fast.witness.has_value() == slow.witness.has_value());
                if (fast.witness)
                    CHECK(fast.witness->members() == slow.witness->members());
            }
        }
    }
}

TEST_CASE("exact_f is independent of the OpenMP thread count") {
    Graph g = sample_gnp(18, 777);
    int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    SearchResult serial = exact_f(g, {3, 1});
    omp_set_num_threads(saved);
    SearchResult parallel = exact_f(g, {3, 1});
    CHECK(serial.best_size == parallel.best_size);
    CHECK(serial.nodes_explored == parallel.nodes_explored);
    if (serial.witness) CHECK(serial.witness->members() == parallel.witness->members());
}

TEST_CASE("witness validity: recheck through the public kernel") {
    for (int trial = 0; trial < 20; ++trial) {
        std::uint64_t seed = derive_seed(55, trial);
        Graph g = sample_gnp(12, seed);
        for (int q : {2, 3}) {
            SearchResult res = exact_f(g, {q, 1 % q});
            if (res.witness) {
                CHECK(is_good(g, *res.witness, {q, 1 % q}));
                CHECK(res.witness->count() == res.best_size);
            }
        }
    }
}

TEST_CASE("count_good examples") {
    CHECK(count_good(triangle(), 3, {2, 0}) == 1);
    CHECK(count_good(triangle(), 2, {2, 1}) == 3);
    CHECK_THROWS_AS(count_good(triangle(), 0, {2, 0}), InputError);
    CHECK_THROWS_AS(count_good(triangle(), 2, {1, 0}), InputError);
}

TEST_CASE("count_good sums match a naive census of all good subsets") {
    for (int trial = 0; trial < 15; ++trial) {
        std::uint64_t seed = derive_seed(808, trial);
        int n = 2 + static_cast<int>(seed % 11);
        Graph g = sample_gnp(n, seed);
        ModParams mp{3, static_cast<int>(seed % 3)};
        std::uint64_t total_fast = 0;
        for (int k = 1; k <= n; ++k) total_fast += count_good(g, k, mp);
        std::uint64_t total_naive = 0;
        for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
            bool ok = true;
            for (std::uint64_t rest = mask; rest && ok; rest &= rest - 1) {
                int v = std::countr_zero(rest);
                ok = std::popcount(g.row0(v) & mask) % mp.q == mp.r;
            }
            if (ok) ++total_naive;
        }
        CHECK(total_fast == total_naive);
        CHECK(count_good(g, std::max(1, n / 2), mp) ==
              count_good_naive(g, std::max(1, n / 2), mp));
    }
}

TEST_CASE("even q with odd r*k forces count zero (handshake parity)") {
    for (int trial = 0; trial < 10; ++trial) {
        std::uint64_t seed = derive_seed(99, trial);
        int n = 4 + static_cast<int>(seed % 9);
        Graph g = sample_gnp(n, seed);
        for (int q : {2, 4}) {
            for (int r = 1; r < q; r += 2) {
                for (int k = 1; k <= n; k += 2) {
                    if ((r * k) % 2 == 1) CHECK(count_good(g, k, {q, r}) == 0);
                }
            }
        }
    }
}

TEST_CASE("exact_f_alpha examples") {
    CHECK(exact_f_alpha(triangle(), DistributionSpec{2, {1.0, 0.0}}).best_size == 3);
    SearchResult p3res = exact_f_alpha(path3(), DistributionSpec{2, {1.0 / 3.0, 2.0 / 3.0}});
    CHECK(p3res.best_size == 3);
    REQUIRE(p3res.witness.has_value());
    CHECK(p3res.witness->members() == std::vector<int>{0, 1, 2});

    Graph k2(2);
    k2.set_edge(0, 1, true);
    CHECK(exact_f_alpha(k2, DistributionSpec{3, {0.0, 1.0, 0.0}}).best_size == 2);
}

TEST_CASE("exact_f_alpha with indicator alpha equals exact_f") {
    for (int trial = 0; trial < 15; ++trial) {
        std::uint64_t seed = derive_seed(303, trial);
        int n = 1 + static_cast<int>(seed % 10);
        Graph g = sample_gnp(n, seed);
        for (int q : {2, 3}) {
            for (int r = 0; r < q; ++r) {
                SearchResult via_alpha = exact_f_alpha(g, DistributionSpec::indicator(q, r));
                SearchResult direct = exact_f(g, {q, r});
                CHECK(via_alpha.best_size == direct.best_size);
            }
        }
    }
}

TEST_CASE("count_good_alpha consistent with a direct filter") {
    Graph g = sample_gnp(9, 2718);
    DistributionSpec alpha{2, {1.0 / 3.0, 2.0 / 3.0}};
    for (int k = 1; k <= 9; ++k) {
        std::uint64_t direct = 0;
        for (std::uint64_t mask = 1; mask < (1ull << 9); ++mask) {
            if (std::popcount(mask) != k) continue;
            if (is_good_alpha(g, VertexSet::from_mask(9, mask), alpha)) ++direct;
        }
        CHECK(count_good_alpha(g, k, alpha) == direct);
    }
}

TEST_CASE("capacity guard routes oversized graphs to local search") {
    Graph g(27);
    CHECK_THROWS_AS(exact_f(g, {2, 0}), CapacityError);
    CHECK_THROWS_AS(count_good(g, 3, {2, 0}), CapacityError);
}

TEST_CASE("local_search_f finds the full triangle quickly") {
    LocalSearchParams params;
    params.seed = 5;
    SearchResult res = local_search_f(triangle(), {2, 0}, 3, params);
    CHECK(res.best_size == 3);
    REQUIRE(res.witness.has_value());
    CHECK_FALSE(res.exact);
}

TEST_CASE("local_search_f reports zero when no good set exists") {
    LocalSearchParams params;
    params.restarts = 4;
    params.max_steps = 500;
    SearchResult res = local_search_f(Graph(5), {2, 1}, 3, params);
    CHECK(res.best_size == 0);
    CHECK_FALSE(res.witness.has_value());
}

TEST_CASE("local_search_f recovers exact optima at n=16") {
    int hits = 0;
    for (int trial = 0; trial < 10; ++trial) {
        std::uint64_t seed = derive_seed(161616, trial);
        Graph g = sample_gnp(16, seed);
        int opt = exact_f(g, {2, 0}).best_size;
        if (opt == 0) continue;
        LocalSearchParams params;
        params.seed = seed;
        SearchResult res = local_search_f(g, {2, 0}, opt, params);
        if (res.best_size >= opt) ++hits;
        if (res.witness) CHECK(is_good(g, *res.witness, {2, 0}));
    }
    CHECK(hits >= 8);
}
