#include "modres/graph.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "modres/rng.hpp"

namespace modres {

void DistributionSpec::validate() const {
    if (q < 2) throw InputError("modulus q must be >= 2");
    if (static_cast<int>(alpha.size()) != q)
        throw InputError("alpha must have exactly q entries");
    double sum = 0.0;
    for (double a : alpha) {
        if (a < 0.0 || a > 1.0) throw InputError("alpha entries must lie in [0,1]");
        sum += a;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw InputError("alpha must sum to 1 (tolerance 1e-12)");
}

int DistributionSpec::indicator_index() const {
    for (int i = 0; i < q; ++i)
        if (alpha[i] == 1.0) return i;
    return -1;
}

DistributionSpec DistributionSpec::uniform(int q) {
    return {q, std::vector<double>(q, 1.0 / q)};
}

DistributionSpec DistributionSpec::indicator(int q, int r) {
    std::vector<double> a(q, 0.0);
    a.at(r) = 1.0;
    return {q, std::move(a)};
}

VertexSet VertexSet::from_mask(int n, std::uint64_t mask) {
    VertexSet s(n);
    if (n < 64 && (mask >> n) != 0)
        throw InputError("vertex set mask has bits outside [n]");
    if (n > 0) s.words_[0] = mask;
    else if (mask != 0) throw InputError("vertex set mask has bits outside [n]");
    return s;
}

VertexSet VertexSet::full(int n) {
    VertexSet s(n);
    for (int v = 0; v < n; ++v) s.add(v);
    return s;
}

int VertexSet::count() const {
    int c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    return c;
}

std::vector<int> VertexSet::members() const {
    std::vector<int> out;
    out.reserve(count());
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t bits = words_[w];
        while (bits) {
            out.push_back(static_cast<int>(w * 64) + std::countr_zero(bits));
            bits &= bits - 1;
        }
    }
    return out;
}

void Graph::set_edge(int i, int j, bool present) {
    if (i == j) throw InputError("self-loops are not allowed");
    auto put = [&](int a, int b) {
        std::uint64_t& w = bits_[static_cast<std::size_t>(a) * words_ + (b >> 6)];
        if (present) w |= 1ull << (b & 63);
        else w &= ~(1ull << (b & 63));
    };
    put(i, j);
    put(j, i);
}

int Graph::degree(int i) const {
    int d = 0;
    for (std::uint64_t w : row(i)) d += std::popcount(w);
    return d;
}

std::size_t Graph::edge_count() const {
    std::size_t twice = 0;
    for (int i = 0; i < n_; ++i) twice += degree(i);
    return twice / 2;
}

Graph sample_gnp(int n, std::uint64_t seed) {
    if (n < 0) throw InputError("vertex count must be nonnegative");
    Graph g(n);
    std::uint64_t pair_index = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++pair_index)
            if (derive_seed(seed, pair_index) >> 63) g.set_edge(i, j, true);
    return g;
}

namespace {

int degree_in_set(const Graph& g, const VertexSet& s, int v) {
    int d = 0;
    auto row = g.row(v);
    auto words = s.words();
    for (std::size_t w = 0; w < words.size(); ++w) d += std::popcount(row[w] & words[w]);
    return d;
}

void check_set(const Graph& g, const VertexSet& s) {
    if (s.universe() != g.order())
        throw InputError("vertex set universe does not match graph order");
}

}  // namespace

ResidueVector degrees_mod(const Graph& g, const VertexSet& s, int q) {
    if (q < 2) throw InputError("modulus q must be >= 2");
    check_set(g, s);
    ResidueVector out{q, {}};
    for (int v : s.members()) out.entries.push_back(degree_in_set(g, s, v) % q);
    return out;
}

bool is_good(const Graph& g, const VertexSet& s, ModParams mp) {
    mp.validate();
    check_set(g, s);
    bool any = false;
    auto words = s.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
        std::uint64_t bits = words[w];
        while (bits) {
            any = true;
            int v = static_cast<int>(w * 64) + std::countr_zero(bits);
            bits &= bits - 1;
            if (degree_in_set(g, s, v) % mp.q != mp.r) return false;
        }
    }
    if (!any) throw InputError("is_good requires a nonempty vertex set");
    return true;
}

void alpha_bounds(const DistributionSpec& alpha, int k,
                  std::vector<int>& lo, std::vector<int>& hi) {
    lo.assign(alpha.q, 0);
    hi.assign(alpha.q, 0);
    for (int i = 0; i < alpha.q; ++i) {
        double x = alpha.alpha[i] * k;
        double nearest = std::round(x);
        if (std::fabs(x - nearest) <= 1e-9) {
            // alpha_i*k is an integer up to float noise: floor = ceil.
            lo[i] = hi[i] = static_cast<int>(nearest);
        } else {
            lo[i] = static_cast<int>(std::floor(x));
            hi[i] = lo[i] + 1;
        }
    }
}

bool is_good_alpha(const Graph& g, const VertexSet& s, const DistributionSpec& alpha) {
    alpha.validate();
    check_set(g, s);
    int k = s.count();
    if (k < 1) throw InputError("is_good_alpha requires a nonempty vertex set");
    std::vector<int> hist(alpha.q, 0);
    for (int v : s.members()) ++hist[degree_in_set(g, s, v) % alpha.q];
    std::vector<int> lo, hi;
    alpha_bounds(alpha, k, lo, hi);
    for (int i = 0; i < alpha.q; ++i)
        if (hist[i] < lo[i] || hist[i] > hi[i]) return false;
    return true;
}

std::string encode_graph(const Graph& g) {
    std::string out = std::to_string(g.order());
    out += '\n';
    for (int i = 0; i < g.order(); ++i) {
        for (int j = 0; j < g.order(); ++j) out += g.edge(i, j) ? '1' : '0';
        out += '\n';
    }
    return out;
}

Graph decode_graph(std::string_view text) {
    std::size_t pos = text.find('\n');
    if (pos == std::string_view::npos)
        throw ParseError("line 1: missing newline after vertex count");
    int n = 0;
    {
        std::string header(text.substr(0, pos));
        std::istringstream in(header);
        if (!(in >> n) || n < 0 || !(in >> std::ws).eof())
            throw ParseError("line 1: malformed vertex count '" + header + "'");
    }
    Graph g(n);
    std::size_t at = pos + 1;
    for (int i = 0; i < n; ++i) {
        std::size_t end = text.find('\n', at);
        if (end == std::string_view::npos)
            throw ParseError("line " + std::to_string(i + 2) + ": missing row (trailing newline required)");
        std::string_view line = text.substr(at, end - at);
        if (static_cast<int>(line.size()) != n)
            throw ParseError("line " + std::to_string(i + 2) + ": row has " +
                             std::to_string(line.size()) + " columns, expected " + std::to_string(n));
        for (int j = 0; j < n; ++j) {
            char c = line[j];
            if (c != '0' && c != '1')
                throw ParseError("line " + std::to_string(i + 2) + ": invalid character '" +
                                 std::string(1, c) + "'");
            if (c == '1') {
                if (i == j)
                    throw ParseError("line " + std::to_string(i + 2) + ": self-loop at (" +
                                     std::to_string(i) + "," + std::to_string(i) + ")");
                if (j < i && !g.edge(j, i))
                    throw ParseError("line " + std::to_string(i + 2) + ": asymmetric at (" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");
                if (j > i) g.set_edge(i, j, true);
            } else if (j < i && g.edge(j, i)) {
                throw ParseError("line " + std::to_string(i + 2) + ": asymmetric at (" +
                                 std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
        at = end + 1;
    }
    while (at < text.size()) {
        if (text[at] != '\n' && text[at] != ' ' && text[at] != '\r' && text[at] != '\t')
            throw ParseError("line " + std::to_string(n + 2) + ": unexpected trailing content");
        ++at;
    }
    return g;
}

Graph read_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open graph file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_graph(buf.str());
}

}  // namespace modres
