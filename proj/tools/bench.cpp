// Serial vs OpenMP row reduction on random dense matrices.
// Usage: filtss_bench [size ...]
#include "filtss/exactla.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace filtss;

namespace {

Matrix random_matrix(std::uint32_t p, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Scalar> coeff(0, p - 1);
    Matrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.set(i, j, coeff(rng));
    return m;
}

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::size_t> sizes;
    for (int i = 1; i < argc; ++i) sizes.push_back(std::stoul(argv[i]));
    if (sizes.empty()) sizes = {256, 1024, 2048};
    std::printf("threads %d\n%-4s %6s %12s %12s %8s %s\n", omp_get_max_threads(), "p", "n", "serial_s", "parallel_s",
                "speedup", "agree");
    for (std::uint32_t p : {2u, 3u})
        for (std::size_t n : sizes) {
            const Matrix m = random_matrix(p, n, 42 + n);
            RrefResult s, q;
            const double ts = best_of(3, [&] { s = rref_serial(m); });
            const double tp = best_of(3, [&] { q = rref_parallel(m); });
            const bool agree = s.pivots == q.pivots && s.reduced == q.reduced;
            std::printf("%-4u %6zu %12.4f %12.4f %8.2f %s\n", p, n, ts, tp, ts / tp, agree ? "yes" : "NO");
            if (!agree) return 1;
        }
    return 0;
}
