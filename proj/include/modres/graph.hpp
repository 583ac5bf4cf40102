#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modres/errors.hpp"

namespace modres {

// Residue parameters: degrees are compared to r modulo q.
struct ModParams {
    int q = 2;
    int r = 0;
    void validate() const {
        if (q < 2) throw InputError("modulus q must be >= 2");
        if (r < 0 || r >= q) throw InputError("residue r must satisfy 0 <= r < q");
    }
};

// A sequence of values in {0,...,q-1}.
struct ResidueVector {
    int q = 2;
    std::vector<int> entries;

    void validate() const {
        if (q < 2) throw InputError("modulus q must be >= 2");
        for (int e : entries)
            if (e < 0 || e >= q) throw InputError("residue vector entry out of range");
    }
    int sum_mod() const {
        long long s = 0;
        for (int e : entries) s += e;
        return static_cast<int>(s % q);
    }
    static ResidueVector constant(int len, int value, int q) {
        return ResidueVector{q, std::vector<int>(static_cast<std::size_t>(len), value)};
    }
    bool operator==(const ResidueVector&) const = default;
};

// Residue-class frequency vector alpha = (alpha_0,...,alpha_{q-1}); sums to 1.
struct DistributionSpec {
    int q = 2;
    std::vector<double> alpha;

    void validate() const;
    // -1 if not an indicator; otherwise the index carrying all mass.
    int indicator_index() const;
    static DistributionSpec uniform(int q);
    static DistributionSpec indicator(int q, int r);
};

// Subset of [n] as a bit mask. Kernels taking a VertexSet require n <= 64;
// Graph itself supports larger n for sampling and the codec.
class VertexSet {
  public:
    VertexSet() = default;
    explicit VertexSet(int n) : n_(n), words_((n + 63) / 64, 0) {}

    static VertexSet from_mask(int n, std::uint64_t mask);
    static VertexSet full(int n);

    int universe() const { return n_; }
    bool contains(int v) const { return words_[v >> 6] >> (v & 63) & 1; }
    void add(int v) { words_[v >> 6] |= 1ull << (v & 63); }
    void remove(int v) { words_[v >> 6] &= ~(1ull << (v & 63)); }
    int count() const;
    bool empty() const { return count() == 0; }
    std::uint64_t mask0() const { return words_.empty() ? 0 : words_[0]; }
    std::span<const std::uint64_t> words() const { return words_; }
    std::vector<int> members() const;  // ascending
    bool operator==(const VertexSet&) const = default;

  private:
    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

// Undirected simple graph, bit-packed adjacency rows. Row i holds the
// neighborhood of vertex i; symmetric, zero diagonal.
class Graph {
  public:
    Graph() = default;
    explicit Graph(int n)
        : n_(n), words_(n == 0 ? 1 : (n + 63) / 64),
          bits_(static_cast<std::size_t>(n) * words_, 0) {}

    int order() const { return n_; }
    int words_per_row() const { return words_; }

    bool edge(int i, int j) const {
        return bits_[static_cast<std::size_t>(i) * words_ + (j >> 6)] >> (j & 63) & 1;
    }
    void set_edge(int i, int j, bool present);

    std::span<const std::uint64_t> row(int i) const {
        return {bits_.data() + static_cast<std::size_t>(i) * words_,
                static_cast<std::size_t>(words_)};
    }
    // First word of row i; the whole row when n <= 64 (hot paths).
    std::uint64_t row0(int i) const { return bits_[static_cast<std::size_t>(i) * words_]; }

    int degree(int i) const;
    std::size_t edge_count() const;

    bool operator==(const Graph&) const = default;

  private:
    int n_ = 0;
    int words_ = 0;
    std::vector<std::uint64_t> bits_;
};

// G(n, 1/2): each unordered pair present independently with probability 1/2.
// Pair (i,j), i<j, consumes stream value of its row-major index, so identical
// (n, seed) gives a bit-identical graph on any machine or thread count.
Graph sample_gnp(int n, std::uint64_t seed);

// Degrees of the members of S inside G[S], modulo q, in ascending vertex order.
ResidueVector degrees_mod(const Graph& g, const VertexSet& s, int q);

// True iff S is nonempty and every degree in G[S] is congruent to r (mod q).
// Empty S is an input-domain error (the f(G,r,q)=0 convention).
bool is_good(const Graph& g, const VertexSet& s, ModParams mp);

// True iff the residue histogram (c_0..c_{q-1}) of G[S] has
// c_i in {floor(alpha_i k), ceil(alpha_i k)} for all i, k = |S|.
bool is_good_alpha(const Graph& g, const VertexSet& s, const DistributionSpec& alpha);

// Text form: first line n, then n lines of n characters in {0,1}.
std::string encode_graph(const Graph& g);
Graph decode_graph(std::string_view text);
Graph read_graph_file(const std::string& path);

// Rounded histogram bounds for size k: lo[i] = floor(alpha_i k),
// hi[i] = ceil(alpha_i k), with near-integer alpha_i*k snapped to the integer.
void alpha_bounds(const DistributionSpec& alpha, int k,
                  std::vector<int>& lo, std::vector<int>& hi);

}  // namespace modres
