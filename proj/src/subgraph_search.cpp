#include "modres/subgraph_search.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <bit>
#include <vector>

#include <nlohmann/json.hpp>

#include "modres/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace modres {

namespace {

// Lexicographic order on subsets viewed as ascending vertex lists.
bool lex_less(std::uint64_t a, std::uint64_t b) {
    while (a && b) {
        int va = std::countr_zero(a);
        int vb = std::countr_zero(b);
        if (va != vb) return va < vb;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

// Incremental subset tracker: membership mask, per-member degree residues,
// and the residue histogram. One toggle costs one row-AND plus an update per
// neighbor inside S.
struct SubsetState {
    const Graph* g;
    int n, q;
    std::uint64_t s_mask = 0;
    int size = 0;
    std::array<std::uint8_t, 64> degm{};
    std::vector<int> hist;

    SubsetState(const Graph& graph, int modulus)
        : g(&graph), n(graph.order()), q(modulus), hist(modulus, 0) {}

    void toggle(int v) {
        std::uint64_t bit = 1ull << v;
        if (s_mask & bit) {
            --hist[degm[v]];
            --size;
            s_mask ^= bit;
            for (std::uint64_t w = g->row0(v) & s_mask; w; w &= w - 1) {
                int x = std::countr_zero(w);
                int old = degm[x];
                int nw = old == 0 ? q - 1 : old - 1;
                degm[x] = static_cast<std::uint8_t>(nw);
                --hist[old];
                ++hist[nw];
            }
        } else {
            int d = std::popcount(g->row0(v) & s_mask) % q;
            for (std::uint64_t w = g->row0(v) & s_mask; w; w &= w - 1) {
                int x = std::countr_zero(w);
                int old = degm[x];
                int nw = old + 1 == q ? 0 : old + 1;
                degm[x] = static_cast<std::uint8_t>(nw);
                --hist[old];
                ++hist[nw];
            }
            s_mask |= bit;
            ++size;
            degm[v] = static_cast<std::uint8_t>(d);
            ++hist[d];
        }
    }

    bool good_r(int r) const { return size > 0 && hist[r] == size; }
};

// Visit every subset with the given high bits fixed, Gray code over the low
// bits. The visitor sees the state after each toggle (and once initially).
template <class Visit>
void walk_slice(const Graph& g, int q, std::uint64_t prefix_mask, int low_bits, Visit&& visit) {
    SubsetState st(g, q);
    for (std::uint64_t p = prefix_mask; p; p &= p - 1) st.toggle(std::countr_zero(p));
    visit(st);
    std::uint64_t steps = 1ull << low_bits;
    for (std::uint64_t step = 1; step < steps; ++step) {
        st.toggle(std::countr_zero(step));
        visit(st);
    }
}

int slice_top_bits(int n) {
    if (n < 16) return 0;
#ifdef _OPENMP
    int threads = omp_get_max_threads();
#else
    int threads = 1;
#endif
    int want = 2;
    while ((1 << want) < 4 * threads && want < 6) ++want;
    return std::min(want, n - 10);
}

void check_exact_guard(const Graph& g) {
    if (g.order() > kMaxExactVertices)
        throw CapacityError("exhaustive subset search requires n <= 26; use local_search_f");
}

struct BestSet {
    int size = 0;
    std::uint64_t mask = 0;

    void offer(int sz, std::uint64_t m) {
        if (sz > size || (sz == size && sz > 0 && lex_less(m, mask))) {
            size = sz;
            mask = m;
        }
    }
    void merge(const BestSet& other) {
        if (other.size > 0) offer(other.size, other.mask);
    }
};

SearchResult result_from(const Graph& g, const BestSet& best, std::uint64_t nodes) {
    SearchResult out;
    out.best_size = best.size;
    out.exact = true;
    out.nodes_explored = nodes;
    if (best.size > 0) out.witness = VertexSet::from_mask(g.order(), best.mask);
    return out;
}

// Per-size floor/ceil bounds on the residue histogram.
struct AlphaBounds {
    int q;
    std::vector<std::vector<int>> lo, hi;  // [size][residue]

    AlphaBounds(const DistributionSpec& alpha, int n) : q(alpha.q), lo(n + 1), hi(n + 1) {
        for (int s = 0; s <= n; ++s) alpha_bounds(alpha, s, lo[s], hi[s]);
    }
    bool good(const SubsetState& st) const {
        if (st.size == 0) return false;
        const auto& l = lo[st.size];
        const auto& h = hi[st.size];
        for (int i = 0; i < q; ++i)
            if (st.hist[i] < l[i] || st.hist[i] > h[i]) return false;
        return true;
    }
};

}  // namespace

SearchResult exact_f(const Graph& g, ModParams mp) {
    mp.validate();
    check_exact_guard(g);
    int n = g.order();
    if (n == 0) return {0, std::nullopt, true, 0};
    int top = slice_top_bits(n);
    int low = n - top;
    std::vector<BestSet> partial(std::size_t{1} << top);
    std::vector<std::uint64_t> nodes(std::size_t{1} << top, 0);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t prefix = 0; prefix < (1ll << top); ++prefix) {
        BestSet best;
        std::uint64_t cnt = 0;
        walk_slice(g, mp.q, static_cast<std::uint64_t>(prefix) << low, low,
                   [&](const SubsetState& st) {
                       if (st.size == 0) return;
                       ++cnt;
                       if (st.hist[mp.r] == st.size) best.offer(st.size, st.s_mask);
                   });
        partial[prefix] = best;
        nodes[prefix] = cnt;
    }
    BestSet best;
    std::uint64_t total_nodes = 0;
    for (std::size_t i = 0; i < partial.size(); ++i) {
        best.merge(partial[i]);
        total_nodes += nodes[i];
    }
    return result_from(g, best, total_nodes);
}

SearchResult exact_f_alpha(const Graph& g, const DistributionSpec& alpha) {
    alpha.validate();
    check_exact_guard(g);
    int n = g.order();
    if (n == 0) return {0, std::nullopt, true, 0};
    AlphaBounds bounds(alpha, n);
    int top = slice_top_bits(n);
    int low = n - top;
    std::vector<BestSet> partial(std::size_t{1} << top);
    std::vector<std::uint64_t> nodes(std::size_t{1} << top, 0);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t prefix = 0; prefix < (1ll << top); ++prefix) {
        BestSet best;
        std::uint64_t cnt = 0;
        walk_slice(g, alpha.q, static_cast<std::uint64_t>(prefix) << low, low,
                   [&](const SubsetState& st) {
                       if (st.size == 0) return;
                       ++cnt;
                       if (bounds.good(st)) best.offer(st.size, st.s_mask);
                   });
        partial[prefix] = best;
        nodes[prefix] = cnt;
    }
    BestSet best;
    std::uint64_t total_nodes = 0;
    for (std::size_t i = 0; i < partial.size(); ++i) {
        best.merge(partial[i]);
        total_nodes += nodes[i];
    }
    return result_from(g, best, total_nodes);
}

std::uint64_t count_good(const Graph& g, int k, ModParams mp) {
    mp.validate();
    check_exact_guard(g);
    int n = g.order();
    if (k < 1 || k > n) throw InputError("count_good requires 1 <= k <= n");
    int top = slice_top_bits(n);
    int low = n - top;
    std::vector<std::uint64_t> partial(std::size_t{1} << top, 0);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t prefix = 0; prefix < (1ll << top); ++prefix) {
        std::uint64_t cnt = 0;
        walk_slice(g, mp.q, static_cast<std::uint64_t>(prefix) << low, low,
                   [&](const SubsetState& st) {
                       if (st.size == k && st.hist[mp.r] == k) ++cnt;
                   });
        partial[prefix] = cnt;
    }
    std::uint64_t total = 0;
    for (std::uint64_t c : partial) total += c;
    return total;
}

std::uint64_t count_good_alpha(const Graph& g, int k, const DistributionSpec& alpha) {
    alpha.validate();
    check_exact_guard(g);
    int n = g.order();
    if (k < 1 || k > n) throw InputError("count_good_alpha requires 1 <= k <= n");
    AlphaBounds bounds(alpha, n);
    int top = slice_top_bits(n);
    int low = n - top;
    std::vector<std::uint64_t> partial(std::size_t{1} << top, 0);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t prefix = 0; prefix < (1ll << top); ++prefix) {
        std::uint64_t cnt = 0;
        walk_slice(g, alpha.q, static_cast<std::uint64_t>(prefix) << low, low,
                   [&](const SubsetState& st) {
                       if (st.size == k && bounds.good(st)) ++cnt;
                   });
        partial[prefix] = cnt;
    }
    std::uint64_t total = 0;
    for (std::uint64_t c : partial) total += c;
    return total;
}

SearchResult exact_f_naive(const Graph& g, ModParams mp) {
    mp.validate();
    check_exact_guard(g);
    int n = g.order();
    BestSet best;
    std::uint64_t nodes = 0;
    for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
        ++nodes;
        bool ok = true;
        for (std::uint64_t rest = mask; rest && ok; rest &= rest - 1) {
            int v = std::countr_zero(rest);
            ok = std::popcount(g.row0(v) & mask) % mp.q == mp.r;
        }
        if (ok) best.offer(std::popcount(mask), mask);
    }
    return result_from(g, best, nodes);
}

std::uint64_t count_good_naive(const Graph& g, int k, ModParams mp) {
    mp.validate();
    check_exact_guard(g);
    int n = g.order();
    if (k < 1 || k > n) throw InputError("count_good_naive requires 1 <= k <= n");
    std::uint64_t cnt = 0;
    for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
        if (std::popcount(mask) != k) continue;
        bool ok = true;
        for (std::uint64_t rest = mask; rest && ok; rest &= rest - 1) {
            int v = std::countr_zero(rest);
            ok = std::popcount(g.row0(v) & mask) % mp.q == mp.r;
        }
        if (ok) ++cnt;
    }
    return cnt;
}

SearchResult local_search_f(const Graph& g, ModParams mp, int k_target,
                            const LocalSearchParams& params) {
    mp.validate();
    int n = g.order();
    if (n > 64) throw CapacityError("local_search_f requires n <= 64");
    if (k_target < 1 || k_target > n)
        throw InputError("local_search_f requires 1 <= k_target <= n");
    if (params.max_steps < 1) throw InputError("max_steps must be >= 1");

    BestSet best;
    std::uint64_t total_steps = 0;
    double w_total = params.w_add + params.w_remove + params.w_swap;
    if (w_total <= 0.0) throw InputError("move weights must not all be zero");

    for (int restart = 0; restart < params.restarts; ++restart) {
        SplitMix64 rng(derive_seed(params.seed, static_cast<std::uint64_t>(restart)));
        SubsetState st(g, mp.q);
        // Random initial subset of size k_target.
        std::array<int, 64> order;
        for (int i = 0; i < n; ++i) order[i] = i;
        for (int i = 0; i < k_target; ++i) {
            int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
            std::swap(order[i], order[j]);
            st.toggle(order[i]);
        }
        auto bad = [&] { return st.size - st.hist[mp.r]; };
        auto dist = [&] { return std::abs(st.size - k_target); };
        auto note_good = [&] {
            if (st.size > 0 && bad() == 0) best.offer(st.size, st.s_mask);
        };
        note_good();
        std::uint64_t plateau = 0;
        for (std::uint64_t step = 0; step < params.max_steps && best.size < k_target; ++step) {
            ++total_steps;
            int bad0 = bad();
            int dist0 = dist();
            // Pick a move type; fall back to add/remove at the boundaries.
            double roll = rng.next_unit() * w_total;
            int kind = roll < params.w_swap ? 2 : (roll < params.w_swap + params.w_add ? 0 : 1);
            if (st.size == 0) kind = 0;
            else if (st.size == n) kind = 1;
            else if (kind == 2 && st.size == n) kind = 1;

            auto pick_member = [&]() {
                // Prefer a member with the wrong residue (min-conflicts).
                if (bad0 > 0 && rng.next_unit() < 0.75) {
                    int want = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(bad0)));
                    for (std::uint64_t m = st.s_mask; m; m &= m - 1) {
                        int v = std::countr_zero(m);
                        if (st.degm[v] != mp.r && want-- == 0) return v;
                    }
                }
                int want = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(st.size)));
                std::uint64_t m = st.s_mask;
                for (int i = 0; i < want; ++i) m &= m - 1;
                return std::countr_zero(m);
            };
            auto pick_outsider = [&]() {
                std::uint64_t outside = ~st.s_mask & ((n == 64) ? ~0ull : (1ull << n) - 1);
                int want = static_cast<int>(
                    rng.next_below(static_cast<std::uint64_t>(std::popcount(outside))));
                for (int i = 0; i < want; ++i) outside &= outside - 1;
                return std::countr_zero(outside);
            };

            int v1 = -1, v2 = -1;
            if (kind == 0) v1 = pick_outsider();
            else if (kind == 1) v1 = pick_member();
            else {
                v1 = pick_member();
                v2 = pick_outsider();
            }
            st.toggle(v1);
            if (v2 >= 0) st.toggle(v2);
            int delta = bad() - bad0;
            bool keep;
            if (delta < 0) keep = true;
            else if (delta == 0) keep = dist() <= dist0 || rng.next_unit() < 0.5;
            else keep = rng.next_unit() < std::pow(params.noise, delta);
            if (!keep) {
                if (v2 >= 0) st.toggle(v2);
                st.toggle(v1);
                continue;
            }
            bool improved = delta < 0 || (delta == 0 && dist() < dist0);
            plateau = improved ? 0 : plateau + 1;
            note_good();
            if (plateau > params.plateau_tol) break;
        }
        if (best.size >= k_target) break;
    }

    SearchResult out;
    out.best_size = best.size;
    out.exact = false;
    out.nodes_explored = total_steps;
    if (best.size > 0) {
        VertexSet witness = VertexSet::from_mask(n, best.mask);
        if (!is_good(g, witness, mp))
            throw std::logic_error("local search produced an invalid witness");
        out.witness = std::move(witness);
    }
    return out;
}

nlohmann::json SearchResult::to_json() const {
    nlohmann::json j;
    j["best_size"] = best_size;
    j["witness"] = witness ? nlohmann::json(witness->members()) : nlohmann::json(nullptr);
    j["exact"] = exact;
    j["nodes_explored"] = nodes_explored;
    return j;
}

}  // namespace modres
