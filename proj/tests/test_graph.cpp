#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "modres/graph.hpp"
#include "modres/rng.hpp"

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

// Brute-force oracle: count neighbors of v inside S by scanning all pairs.
int naive_degree(const Graph& g, const VertexSet& s, int v) {
    int d = 0;
    for (int w = 0; w < g.order(); ++w)
        if (w != v && s.contains(w) && g.edge(v, w)) ++d;
    return d;
}

template <class E, class F>
std::string thrown_message(F&& fn) {
    try {
        fn();
    } catch (const E& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("sample_gnp trivial sizes") {
    Graph g0 = sample_gnp(0, 7);
    CHECK(g0.order() == 0);
    Graph g1 = sample_gnp(1, 7);
    CHECK(g1.order() == 1);
    CHECK(g1.edge_count() == 0);
}

TEST_CASE("sample_gnp determinism") {
    Graph a = sample_gnp(33, 12345);
    Graph b = sample_gnp(33, 12345);
    CHECK(a == b);
    Graph c = sample_gnp(33, 12346);
    CHECK(a != c);
}

TEST_CASE("sample_gnp symmetry and zero diagonal") {
    for (std::uint64_t seed : {1ull, 99ull, 424242ull}) {
        Graph g = sample_gnp(20, seed);
        for (int i = 0; i < 20; ++i) {
            CHECK_FALSE(g.edge(i, i));
            for (int j = 0; j < 20; ++j) CHECK(g.edge(i, j) == g.edge(j, i));
        }
    }
}

TEST_CASE("sample_gnp mean edge count near C(20,2)/2") {
    // Mean edge count of G(20,1/2) is 95 with per-graph variance 190/4; over
    // 10^4 seeds the standard error of the mean is sqrt(47.5/10^4) ~ 0.069.
    const int trials = 10000;
    double sum = 0.0;
    for (int i = 0; i < trials; ++i)
        sum += static_cast<double>(sample_gnp(20, derive_seed(500, i)).edge_count());
    double mean = sum / trials;
    double se = std::sqrt(190.0 * 0.25 / trials);
    CHECK(std::fabs(mean - 95.0) <= 3.0 * se);
}

TEST_CASE("degrees_mod examples") {
    Graph k3 = triangle();
    CHECK(degrees_mod(k3, VertexSet::full(3), 2).entries == std::vector<int>{0, 0, 0});
    CHECK(degrees_mod(k3, VertexSet::from_mask(3, 0b011), 2).entries == std::vector<int>{1, 1});
    CHECK(degrees_mod(path3(), VertexSet::full(3), 3).entries == std::vector<int>{1, 2, 1});
}

TEST_CASE("degrees_mod matches the naive double loop") {
    for (int trial = 0; trial < 50; ++trial) {
        std::uint64_t seed = derive_seed(77, trial);
        int n = 1 + static_cast<int>(seed % 16);
        Graph g = sample_gnp(n, seed);
        std::uint64_t mask = mix64(seed) & ((1ull << n) - 1);
        VertexSet s = VertexSet::from_mask(n, mask);
        for (int q : {2, 3, 5}) {
            ResidueVector got = degrees_mod(g, s, q);
            auto members = s.members();
            REQUIRE(got.entries.size() == members.size());
            for (std::size_t i = 0; i < members.size(); ++i)
                CHECK(got.entries[i] == naive_degree(g, s, members[i]) % q);
        }
    }
}

TEST_CASE("handshake parity: sum of degrees mod 2 is even") {
    for (int trial = 0; trial < 30; ++trial) {
        std::uint64_t seed = derive_seed(31, trial);
        int n = 2 + static_cast<int>(seed % 14);
        Graph g = sample_gnp(n, seed);
        std::uint64_t mask = mix64(seed) & ((1ull << n) - 1);
        VertexSet s = VertexSet::from_mask(n, mask);
        int total = 0;
        for (int e : degrees_mod(g, s, 2).entries) total += e;
        CHECK(total % 2 == 0);
    }
}

TEST_CASE("is_good examples") {
    Graph k3 = triangle();
    CHECK(is_good(k3, VertexSet::full(3), {2, 0}));
    CHECK_FALSE(is_good(k3, VertexSet::full(3), {2, 1}));
    CHECK(is_good(k3, VertexSet::from_mask(3, 0b011), {2, 1}));
    CHECK_THROWS_AS(is_good(k3, VertexSet(3), {2, 0}), InputError);
    CHECK_THROWS_AS(is_good(k3, VertexSet::full(3), {1, 0}), InputError);
}

TEST_CASE("is_good_alpha examples") {
    Graph k3 = triangle();
    Graph p3 = path3();
    CHECK(is_good_alpha(k3, VertexSet::full(3), DistributionSpec{2, {1.0, 0.0}}));
    CHECK(is_good_alpha(p3, VertexSet::full(3), DistributionSpec{2, {1.0 / 3.0, 2.0 / 3.0}}));
    CHECK_FALSE(is_good_alpha(k3, VertexSet::full(3), DistributionSpec{2, {0.5, 0.5}}));
    CHECK_THROWS_AS(is_good_alpha(k3, VertexSet::full(3), DistributionSpec{2, {0.6, 0.6}}),
                    InputError);
}

TEST_CASE("graph codec golden and round trip") {
    CHECK(encode_graph(triangle()) == "3\n011\n101\n110\n");
    CHECK(decode_graph("3\n011\n101\n110\n") == triangle());
    for (int trial = 0; trial < 100; ++trial) {
        std::uint64_t seed = derive_seed(9000, trial);
        int n = static_cast<int>(seed % 33);
        Graph g = sample_gnp(n, seed);
        CHECK(decode_graph(encode_graph(g)) == g);
    }
}

TEST_CASE("graph codec error cases") {
    auto msg = [](const char* text) {
        return thrown_message<ParseError>([&] { decode_graph(text); });
    };
    CHECK(msg("2\n01\n00\n").find("asymmetric at (1,0)") != std::string::npos);
    CHECK(msg("2\n01\n10").find("trailing newline") != std::string::npos);
    CHECK(msg("x\n").find("malformed vertex count") != std::string::npos);
    CHECK(msg("2\n10\n01\n").find("self-loop") != std::string::npos);
    CHECK_THROWS_AS(decode_graph("2\n011\n10\n"), ParseError);
}

TEST_CASE("vertex set membership and members()") {
    VertexSet s = VertexSet::from_mask(10, 0b1000000101);
    CHECK(s.count() == 3);
    CHECK(s.members() == std::vector<int>{0, 2, 9});
    s.add(5);
    s.remove(0);
    CHECK(s.members() == std::vector<int>{2, 5, 9});
}
