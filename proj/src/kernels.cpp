#include "logperm/kernels.hpp"

#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace logperm::kernels {

double dot_rev_serial(const double* w, const double* h, std::size_t n) {
    double s = 0.0;
    for (std::size_t m = 1; m <= n; ++m) s += w[m] * h[n - m];
    return s;
}

double dot_rev(const double* w, const double* h, std::size_t n) {
    if (n < 2 * kChunk) return dot_rev_serial(w, h, n);

    const std::size_t nchunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::size_t ci = 0; ci < nchunks; ++ci) {
        const std::size_t lo = 1 + ci * kChunk;
        const std::size_t hi = (lo + kChunk - 1 < n) ? lo + kChunk - 1 : n;
        double s = 0.0;
        for (std::size_t m = lo; m <= hi; ++m) s += w[m] * h[n - m];
        partial[ci] = s;
    }
    double s = 0.0;
    for (std::size_t ci = 0; ci < nchunks; ++ci) s += partial[ci];
    return s;
}

void conv_serial(const double* a, const double* b, double* out, std::size_t n_out) {
    for (std::size_t j = 0; j < n_out; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i <= j; ++i) s += a[i] * b[j - i];
        out[j] = s;
    }
}

void conv(const double* a, const double* b, double* out, std::size_t n_out) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
    for (std::size_t j = 0; j < n_out; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i <= j; ++i) s += a[i] * b[j - i];
        out[j] = s;
    }
}

}  // namespace logperm::kernels
