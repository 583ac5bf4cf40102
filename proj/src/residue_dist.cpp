#include "modres/residue_dist.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace modres {

namespace {

using Cplx = std::complex<long double>;
constexpr long double kPi = 3.14159265358979323846264338327950288L;

std::vector<Cplx> roots_of_unity(int q) {
    std::vector<Cplx> roots(q);
    for (int k = 0; k < q; ++k) {
        long double th = 2.0L * kPi * k / q;
        roots[k] = {std::cos(th), std::sin(th)};
    }
    return roots;
}

// table[r][c] = ((1 + e_q(r)) / 2)^c for 0 <= c <= max_c.
std::vector<std::vector<Cplx>> half_powers(const std::vector<Cplx>& roots, int max_c) {
    int q = static_cast<int>(roots.size());
    std::vector<std::vector<Cplx>> table(q);
    for (int r = 0; r < q; ++r) {
        Cplx base = (Cplx{1.0L, 0.0L} + roots[r]) / 2.0L;
        table[r].resize(max_c + 1);
        table[r][0] = 1.0L;
        for (int c = 1; c <= max_c; ++c) table[r][c] = table[r][c - 1] * base;
    }
    return table;
}

void check_mod(int q) {
    if (q < 2) throw InputError("modulus q must be >= 2");
}

long long checked_pow(long long q, int m, long long cap) {
    long long p = 1;
    for (int i = 0; i < m; ++i) {
        p *= q;
        if (p > cap) return -1;
    }
    return p;
}

int num_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// ---------------------------------------------------------------------------
// prob_sum_mod
// ---------------------------------------------------------------------------

BigRat sum_mod_closed(long long n, int a, int q) {
    BigInt hits = 0;
    BigInt c = 1;  // C(n, j), incremental Pascal row
    for (long long j = 0; j <= n; ++j) {
        if (j % q == a) hits += c;
        c *= n - j;
        c /= j + 1;
    }
    return BigRat(hits, pow_big(2, n));
}

long double sum_mod_fourier(long long n, int a, int q) {
    // ((1+e_q(l))/2)^n = cos(pi l/q)^n * e^{i pi l n / q}; combined with
    // e_q(-l a) the phase is pi * (l (n - 2a) mod 2q) / q. Integer phase
    // arithmetic avoids drift for large n.
    long double acc = 0.0L;
    for (int l = 0; l < q; ++l) {
        long double c = std::cos(kPi * l / q);
        long double mag = std::pow(std::fabs(c), static_cast<long double>(n));
        if (c < 0.0L && (n & 1)) mag = -mag;
        long long ph = (static_cast<long long>(l) * ((n - 2 * a) % (2 * q))) % (2 * q);
        if (ph < 0) ph += 2 * q;
        acc += mag * std::cos(kPi * ph / q);
    }
    return acc / q;
}

BigRat sum_mod_enum(long long n, int a, int q) {
    if (n > kMaxEnumBits) throw CapacityError("prob_sum_mod enumeration requires n <= 24");
    std::uint64_t hits = 0;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask)
        if (std::popcount(mask) % q == a) ++hits;
    return BigRat(BigInt(hits), pow_big(2, n));
}

}  // namespace

ExactProb prob_sum_mod(long long n, int a, int q, ProbMethod method) {
    check_mod(q);
    if (n < 0) throw InputError("n must be nonnegative");
    if (a < 0 || a >= q) throw InputError("residue a must satisfy 0 <= a < q");
    ExactProb out;
    out.method = method;
    switch (method) {
        case ProbMethod::closed_form:
            out.value = sum_mod_closed(n, a, q);
            out.approx = to_long_double(out.value);
            break;
        case ProbMethod::enumeration:
            out.value = sum_mod_enum(n, a, q);
            out.approx = to_long_double(out.value);
            break;
        case ProbMethod::fourier:
            out.approx = sum_mod_fourier(n, a, q);
            break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// prob_asym_rowsums
// ---------------------------------------------------------------------------

ExactProb prob_asym_rowsums(int s, int t, const ResidueVector& v, ProbMethod method) {
    v.validate();
    if (s < 0 || t < 0) throw InputError("matrix dimensions must be nonnegative");
    if (static_cast<int>(v.entries.size()) != s)
        throw InputError("residue vector length must equal the row count s");
    int q = v.q;
    ExactProb out;
    out.method = method;
    if (method == ProbMethod::enumeration) {
        if (s * t > kMaxEnumBits)
            throw CapacityError("prob_asym_rowsums enumeration requires s*t <= 24");
        std::uint64_t hits = 0;
        std::uint64_t tmask = (t == 0) ? 0 : (1ull << t) - 1;
        std::uint64_t total = 1ull << (s * t);
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            bool ok = true;
            for (int i = 0; i < s && ok; ++i)
                ok = std::popcount((mask >> (i * t)) & tmask) % q == v.entries[i];
            if (ok) ++hits;
        }
        out.value = BigRat(BigInt(hits), pow_big(2, s * t));
        out.approx = to_long_double(out.value);
        return out;
    }
    if (method == ProbMethod::closed_form) {
        BigRat prod = 1;
        for (int i = 0; i < s; ++i) prod *= sum_mod_closed(t, v.entries[i], q);
        out.value = prod;
        out.approx = to_long_double(prod);
        return out;
    }
    long double prod = 1.0L;
    for (int i = 0; i < s; ++i) prod *= sum_mod_fourier(t, v.entries[i], q);
    out.approx = prod;
    return out;
}

// ---------------------------------------------------------------------------
// prob_symmetric: exhaustive enumeration over graphs on m vertices
// ---------------------------------------------------------------------------

namespace {

std::vector<std::pair<int, int>> edge_pairs(int m) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
    return pairs;
}

int slice_bits(int e_total) {
    if (e_total < 16) return 0;
    int want = 2;
    while ((1 << want) < 4 * num_threads() && want < 8) ++want;
    return std::min(want, e_total - 8);
}

// Count graphs whose degree vector is `target` (mod q). Each OpenMP slice
// fixes the top edge bits and runs its own Gray-code walk over the rest,
// keeping a match counter updated in O(1) per graph.
std::uint64_t sym_count_matching(int m, int q, const std::vector<int>& target) {
    auto pairs = edge_pairs(m);
    int e_total = static_cast<int>(pairs.size());
    if (e_total > kMaxEnumEdges)
        throw CapacityError("prob_symmetric enumeration requires C(m,2) <= 28 (m <= 8)");
    int top = slice_bits(e_total);
    int low = e_total - top;
    std::vector<std::uint64_t> partial(std::size_t{1} << top, 0);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t prefix = 0; prefix < (1ll << top); ++prefix) {
        std::vector<int> degm(m, 0);
        std::uint64_t cur = static_cast<std::uint64_t>(prefix) << low;
        for (int e = low; e < e_total; ++e)
            if (cur >> e & 1) {
                degm[pairs[e].first] = (degm[pairs[e].first] + 1) % q;
                degm[pairs[e].second] = (degm[pairs[e].second] + 1) % q;
            }
        int match = 0;
        for (int x = 0; x < m; ++x) match += degm[x] == target[x];
        std::uint64_t hits = match == m;
        std::uint64_t steps = 1ull << low;
        for (std::uint64_t step = 1; step < steps; ++step) {
            int e = std::countr_zero(step);
            cur ^= 1ull << e;
            int di = (cur >> e & 1) ? 1 : q - 1;
            auto [i, j] = pairs[e];
            match -= (degm[i] == target[i]) + (degm[j] == target[j]);
            degm[i] = (degm[i] + di) % q;
            degm[j] = (degm[j] + di) % q;
            match += (degm[i] == target[i]) + (degm[j] == target[j]);
            if (match == m) ++hits;
        }
        partial[prefix] = hits;
    }
    std::uint64_t total = 0;
    for (std::uint64_t h : partial) total += h;
    return total;
}

// Character sum over Z_q^m: prefix recursion carrying residue counts; the
// pair product gains prod_y ((1+e_q(x+y))/2)^{count[y]} when x is appended.
struct SymFourier {
    int m, q;
    const std::vector<int>* v;
    std::vector<Cplx> roots;
    std::vector<std::vector<Cplx>> half;

    Cplx rec(int pos, std::vector<int>& counts, Cplx w, int dot) const {
        if (pos == m) return w * std::conj(roots[dot]);
        Cplx sum = 0.0L;
        for (int x = 0; x < q; ++x) {
            Cplx factor = w;
            for (int y = 0; y < q; ++y)
                if (counts[y]) factor *= half[(x + y) % q][counts[y]];
            ++counts[x];
            sum += rec(pos + 1, counts, factor, (dot + x * (*v)[pos]) % q);
            --counts[x];
        }
        return sum;
    }
};

long double sym_fourier(int m, int q, const std::vector<int>& target) {
    if (checked_pow(q, m, kMaxFourierTerms) < 0)
        throw CapacityError("prob_symmetric fourier requires q^m <= 2e7");
    SymFourier ctx{m, q, &target, roots_of_unity(q), {}};
    ctx.half = half_powers(ctx.roots, m);
    std::vector<Cplx> partial(q);
#pragma omp parallel for schedule(dynamic)
    for (int x0 = 0; x0 < q; ++x0) {
        std::vector<int> counts(q, 0);
        counts[x0] = 1;
        partial[x0] = ctx.rec(1, counts, Cplx{1.0L, 0.0L}, x0 * target[0] % q);
    }
    Cplx sum = 0.0L;
    for (const Cplx& p : partial) sum += p;
    long double qm = std::pow(static_cast<long double>(q), m);
    return sum.real() / qm;
}

}  // namespace

ExactProb prob_symmetric(const ResidueVector& v, ProbMethod method) {
    v.validate();
    int m = static_cast<int>(v.entries.size());
    if (m < 1) throw InputError("prob_symmetric requires m >= 1");
    ExactProb out;
    out.method = method;
    switch (method) {
        case ProbMethod::enumeration: {
            std::uint64_t hits = sym_count_matching(m, v.q, v.entries);
            out.value = BigRat(BigInt(hits), pow_big(2, static_cast<long long>(m) * (m - 1) / 2));
            out.approx = to_long_double(out.value);
            break;
        }
        case ProbMethod::fourier:
            out.approx = sym_fourier(m, v.q, v.entries);
            break;
        case ProbMethod::closed_form:
            throw InputError("prob_symmetric has no closed form; use enumeration or fourier");
    }
    return out;
}

std::vector<std::uint64_t> sym_degree_counts(int m, int q) {
    check_mod(q);
    if (m < 1) throw InputError("sym_degree_counts requires m >= 1");
    auto pairs = edge_pairs(m);
    int e_total = static_cast<int>(pairs.size());
    if (e_total > kMaxEnumEdges)
        throw CapacityError("sym_degree_counts requires C(m,2) <= 28 (m <= 8)");
    long long table_size = checked_pow(q, m, 4'000'000);
    if (table_size < 0)
        throw CapacityError("sym_degree_counts table requires q^m <= 4e6");
    std::vector<long long> qpow(m);
    qpow[0] = 1;
    for (int i = 1; i < m; ++i) qpow[i] = qpow[i - 1] * q;

    int top = slice_bits(e_total);
    int low = e_total - top;
    std::vector<std::vector<std::uint64_t>> partial(std::size_t{1} << top);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t prefix = 0; prefix < (1ll << top); ++prefix) {
        std::vector<std::uint64_t> counts(table_size, 0);
        std::vector<int> degm(m, 0);
        long long vidx = 0;
        std::uint64_t cur = static_cast<std::uint64_t>(prefix) << low;
        for (int e = low; e < e_total; ++e)
            if (cur >> e & 1)
                for (int x : {pairs[e].first, pairs[e].second}) {
                    int old = degm[x];
                    degm[x] = (old + 1) % q;
                    vidx += (degm[x] - old) * qpow[x];
                }
        ++counts[vidx];
        std::uint64_t steps = 1ull << low;
        for (std::uint64_t step = 1; step < steps; ++step) {
            int e = std::countr_zero(step);
            cur ^= 1ull << e;
            int di = (cur >> e & 1) ? 1 : q - 1;
            for (int x : {pairs[e].first, pairs[e].second}) {
                int old = degm[x];
                degm[x] = (old + di) % q;
                vidx += (degm[x] - old) * qpow[x];
            }
            ++counts[vidx];
        }
        partial[prefix] = std::move(counts);
    }
    std::vector<std::uint64_t> total(table_size, 0);
    for (const auto& part : partial)
        for (long long i = 0; i < table_size; ++i) total[i] += part[i];
    return total;
}

std::vector<std::uint64_t> sym_degree_counts_naive(int m, int q) {
    check_mod(q);
    auto pairs = edge_pairs(m);
    int e_total = static_cast<int>(pairs.size());
    if (e_total > kMaxEnumEdges)
        throw CapacityError("sym_degree_counts_naive requires C(m,2) <= 28");
    long long table_size = checked_pow(q, m, 4'000'000);
    if (table_size < 0) throw CapacityError("sym_degree_counts_naive table requires q^m <= 4e6");
    std::vector<std::uint64_t> counts(table_size, 0);
    std::vector<long long> qpow(m);
    qpow[0] = 1;
    for (int i = 1; i < m; ++i) qpow[i] = qpow[i - 1] * q;
    for (std::uint64_t mask = 0; mask < (1ull << e_total); ++mask) {
        std::vector<int> deg(m, 0);
        for (int e = 0; e < e_total; ++e)
            if (mask >> e & 1) {
                ++deg[pairs[e].first];
                ++deg[pairs[e].second];
            }
        long long vidx = 0;
        for (int x = 0; x < m; ++x) vidx += (deg[x] % q) * qpow[x];
        ++counts[vidx];
    }
    return counts;
}

std::vector<double> sym_prob_table_fourier(int m, int q) {
    check_mod(q);
    if (m < 1) throw InputError("sym_prob_table_fourier requires m >= 1");
    long long size = checked_pow(q, m, 4'000'000);
    if (size < 0) throw CapacityError("sym_prob_table_fourier requires q^m <= 4e6");
    auto roots = roots_of_unity(q);
    auto half = half_powers(roots, m);

    // Fill W(l) = prod_{j<k} (1+e_q(l_j+l_k))/2 by prefix recursion.
    std::vector<std::complex<double>> w(size);
    std::vector<int> counts(q, 0);
    std::vector<long long> qpow(m);
    qpow[0] = 1;
    for (int i = 1; i < m; ++i) qpow[i] = qpow[i - 1] * q;
    auto fill = [&](auto&& self, int pos, long long idx, Cplx acc) -> void {
        if (pos == m) {
            w[idx] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
            return;
        }
        for (int x = 0; x < q; ++x) {
            Cplx factor = acc;
            for (int y = 0; y < q; ++y)
                if (counts[y]) factor *= half[(x + y) % q][counts[y]];
            ++counts[x];
            self(self, pos + 1, idx + x * qpow[pos], factor);
            --counts[x];
        }
    };
    fill(fill, 0, 0, Cplx{1.0L, 0.0L});

    // Inverse character transform along each axis: P(v) = q^{-m} sum_l W(l) e_q(-l.v).
    std::vector<std::complex<double>> dft(static_cast<std::size_t>(q) * q);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            dft[static_cast<std::size_t>(a) * q + b] = {
                static_cast<double>(std::conj(roots[a * b % q]).real()),
                static_cast<double>(std::conj(roots[a * b % q]).imag())};
    std::vector<std::complex<double>> fiber(q);
    for (int axis = 0; axis < m; ++axis) {
        long long stride = qpow[axis];
        long long blocks = size / (stride * q);
        for (long long b = 0; b < blocks; ++b)
            for (long long off = 0; off < stride; ++off) {
                long long base = b * stride * q + off;
                for (int x = 0; x < q; ++x) fiber[x] = w[base + x * stride];
                for (int vaxis = 0; vaxis < q; ++vaxis) {
                    std::complex<double> acc = 0.0;
                    for (int x = 0; x < q; ++x)
                        acc += fiber[x] * dft[static_cast<std::size_t>(vaxis) * q + x];
                    w[base + vaxis * stride] = acc;
                }
            }
    }
    double qm = std::pow(static_cast<double>(q), m);
    std::vector<double> probs(size);
    for (long long i = 0; i < size; ++i) probs[i] = w[i].real() / qm;
    return probs;
}

// ---------------------------------------------------------------------------
// prob_joint
// ---------------------------------------------------------------------------

namespace {

std::uint64_t joint_count_enum(int s, int t, const std::vector<int>& u,
                               const std::vector<int>& v, int q) {
    std::uint64_t tmask = (1ull << t) - 1;
    std::vector<std::uint64_t> colmask(t, 0);
    for (int j = 0; j < t; ++j)
        for (int i = 0; i < s; ++i) colmask[j] |= 1ull << (i * t + j);
    std::uint64_t hits = 0;
    std::uint64_t total = 1ull << (s * t);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        bool ok = true;
        for (int i = 0; i < s && ok; ++i)
            ok = std::popcount((mask >> (i * t)) & tmask) % q == u[i];
        for (int j = 0; j < t && ok; ++j)
            ok = std::popcount(mask & colmask[j]) % q == v[j];
        if (ok) ++hits;
    }
    return hits;
}

// Outer recursion over l in Z_q^s; at each leaf the per-coordinate factors
// for the inner sum over m in Z_q^t collapse to factor[y] = prod_x
// ((1+e_q(x+y))/2)^{count_l[x]}, making the inner walk O(1) per node.
struct JointFourier {
    int s, t, q;
    const std::vector<int>*u, *v;
    std::vector<Cplx> roots;
    std::vector<std::vector<Cplx>> half;

    Cplx inner(int pos, const std::vector<Cplx>& factor, Cplx acc, int dot) const {
        if (pos == t) return acc * std::conj(roots[dot]);
        Cplx sum = 0.0L;
        for (int y = 0; y < q; ++y)
            sum += inner(pos + 1, factor, acc * factor[y], (dot + y * (*v)[pos]) % q);
        return sum;
    }

    Cplx outer(int pos, std::vector<int>& counts, int dot_u) const {
        if (pos == s) {
            std::vector<Cplx> factor(q, Cplx{1.0L, 0.0L});
            for (int y = 0; y < q; ++y)
                for (int x = 0; x < q; ++x)
                    if (counts[x]) factor[y] *= half[(x + y) % q][counts[x]];
            return inner(0, factor, Cplx{1.0L, 0.0L}, dot_u);
        }
        Cplx sum = 0.0L;
        for (int x = 0; x < q; ++x) {
            ++counts[x];
            sum += outer(pos + 1, counts, (dot_u + x * (*u)[pos]) % q);
            --counts[x];
        }
        return sum;
    }
};

}  // namespace

ExactProb prob_joint(const ResidueVector& u, const ResidueVector& v, ProbMethod method) {
    u.validate();
    v.validate();
    if (u.q != v.q) throw InputError("u and v must share the modulus");
    int q = u.q;
    int s = static_cast<int>(u.entries.size());
    int t = static_cast<int>(v.entries.size());
    if (s < 1 || t < 1) throw InputError("prob_joint requires s >= 1 and t >= 1");
    ExactProb out;
    out.method = method;
    // Row sums and column sums share the total, so mismatched residue sums
    // are impossible outright.
    if (u.sum_mod() != v.sum_mod()) {
        out.value = 0;
        out.approx = 0.0L;
        return out;
    }
    switch (method) {
        case ProbMethod::enumeration: {
            if (s * t > kMaxEnumBits)
                throw CapacityError("prob_joint enumeration requires s*t <= 24");
            std::uint64_t hits = joint_count_enum(s, t, u.entries, v.entries, q);
            out.value = BigRat(BigInt(hits), pow_big(2, s * t));
            out.approx = to_long_double(out.value);
            break;
        }
        case ProbMethod::fourier: {
            if (checked_pow(q, s + t, kMaxFourierTerms) < 0)
                throw CapacityError("prob_joint fourier requires q^(s+t) <= 2e7");
            JointFourier ctx{s, t, q, &u.entries, &v.entries, roots_of_unity(q), {}};
            ctx.half = half_powers(ctx.roots, std::max(s, t));
            std::vector<Cplx> partial(q);
#pragma omp parallel for schedule(dynamic)
            for (int x0 = 0; x0 < q; ++x0) {
                std::vector<int> counts(q, 0);
                counts[x0] = 1;
                partial[x0] = ctx.outer(1, counts, x0 * u.entries[0] % q);
            }
            Cplx sum = 0.0L;
            for (const Cplx& p : partial) sum += p;
            out.approx = sum.real() / std::pow(static_cast<long double>(q), s + t);
            break;
        }
        case ProbMethod::closed_form:
            throw InputError("prob_joint has no closed form; use enumeration or fourier");
    }
    return out;
}

// ---------------------------------------------------------------------------
// cosine_gap and decay profiles
// ---------------------------------------------------------------------------

double cosine_gap(int q) {
    check_mod(q);
    double worst = 0.0;
    for (int l = 1; l < q; ++l) {
        double c = std::fabs(static_cast<double>(std::cos(kPi * l / q)));
        worst = std::max(worst, c);
    }
    return worst - std::exp(-2.0 / (static_cast<double>(q) * q));
}

const char* decay_mode_name(DecayMode mode) {
    return mode == DecayMode::symmetric ? "symmetric" : "asym";
}

DecayProfile decay_profile(int q, int m_min, int m_max, DecayMode mode) {
    check_mod(q);
    if (m_min < 1 || m_max < m_min) throw InputError("need 1 <= m_min <= m_max");
    DecayProfile out;
    for (int m = m_min; m <= m_max; ++m) {
        long double err = 0.0L;
        if (mode == DecayMode::asym) {
            // Row-sum law at s=1: lead 1/q, normalization q.
            for (int a = 0; a < q; ++a) {
                BigRat diff = sum_mod_closed(m, a, q) - BigRat(1, q);
                err = std::max(err, std::fabs(to_long_double(diff)));
            }
            err *= q;
        } else {
            long long qm = checked_pow(q, m, 4'000'000);
            if (qm < 0) throw CapacityError("decay_profile symmetric requires q^m <= 4e6");
            long long e_total = static_cast<long long>(m) * (m - 1) / 2;
            bool exact = e_total <= kMaxEnumEdges;
            std::vector<std::uint64_t> counts;
            std::vector<double> fourier;
            if (exact) counts = sym_degree_counts(m, q);
            else fourier = sym_prob_table_fourier(m, q);
            BigInt denom = pow_big(2, e_total);
            BigRat lead = (q % 2 == 1) ? BigRat(1, pow_big(q, m)) : BigRat(2, pow_big(q, m));
            for (long long idx = 0; idx < qm; ++idx) {
                if (q % 2 == 0) {
                    int digit_sum = 0;
                    for (long long x = idx; x > 0; x /= q) digit_sum += static_cast<int>(x % q);
                    if (digit_sum % 2 == 1) continue;  // infeasible v
                }
                long double diff;
                if (exact)
                    diff = to_long_double(BigRat(BigInt(counts[idx]), denom) - lead);
                else
                    diff = fourier[idx] - to_long_double(lead);
                err = std::max(err, std::fabs(diff));
            }
            err *= std::pow(static_cast<long double>(q), m);
        }
        out.rows.push_back({m, q, mode, static_cast<double>(err)});
    }
    return out;
}

std::string DecayProfile::to_csv() const {
    std::string out = "m,q,mode,normalized_error\n";
    char buf[128];
    for (const DecayRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%d,%s,%.17g\n", r.m, r.q,
                      decay_mode_name(r.mode), r.normalized_error);
        out += buf;
    }
    return out;
}

}  // namespace modres
