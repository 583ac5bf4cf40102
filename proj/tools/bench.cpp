// Benchmark: serial naive subset scan vs the Gray-code kernel (serial and
// OpenMP), plus symmetric-matrix enumeration serial vs parallel.

#include <chrono>
#include <cstdio>

#include <omp.h>

#include "modres/residue_dist.hpp"
#include "modres/subgraph_search.hpp"

using namespace modres;

namespace {

double seconds(auto fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int n = argc > 1 ? std::atoi(argv[1]) : 24;
    int threads = omp_get_max_threads();
    std::printf("subset scan, n=%d, q=3, r=0 (threads=%d)\n", n, threads);
    Graph g = sample_gnp(n, 20240817);
    ModParams mp{3, 0};

    SearchResult naive, gray_serial, gray_par;
    double t_naive = seconds([&] { naive = exact_f_naive(g, mp); });
    omp_set_num_threads(1);
    double t_gray1 = seconds([&] { gray_serial = exact_f(g, mp); });
    omp_set_num_threads(threads);
    double t_grayp = seconds([&] { gray_par = exact_f(g, mp); });

    std::printf("  naive serial      %8.3fs  f=%d\n", t_naive, naive.best_size);
    std::printf("  gray-code serial  %8.3fs  f=%d  (%.1fx vs naive)\n", t_gray1,
                gray_serial.best_size, t_naive / t_gray1);
    std::printf("  gray-code OpenMP  %8.3fs  f=%d  (%.1fx vs serial gray)\n", t_grayp,
                gray_par.best_size, t_gray1 / t_grayp);
    if (naive.best_size != gray_serial.best_size || naive.best_size != gray_par.best_size) {
        std::printf("  MISMATCH between engines!\n");
        return 1;
    }

    int m = 8, q = 2;
    std::printf("symmetric degree-vector census, m=%d, q=%d\n", m, q);
    std::vector<std::uint64_t> ser, par;
    double t_ser = seconds([&] { ser = sym_degree_counts_naive(m, q); });
    double t_par = seconds([&] { par = sym_degree_counts(m, q); });
    std::printf("  naive serial      %8.3fs\n", t_ser);
    std::printf("  gray-code OpenMP  %8.3fs  (%.1fx)\n", t_par, t_ser / t_par);
    if (ser != par) {
        std::printf("  MISMATCH between engines!\n");
        return 1;
    }
    return 0;
}
