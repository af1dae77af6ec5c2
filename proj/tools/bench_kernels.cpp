// Timing comparison of the OpenMP kernels against their serial references.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "logperm/exact.hpp"
#include "logperm/kernels.hpp"
#include "logperm/weights.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

double bench_recurrence(const std::vector<double>& theta, std::size_t n, bool parallel) {
    std::vector<double> h(n + 1, 0.0);
    h[0] = 1.0;
    const auto t0 = clock_type::now();
    for (std::size_t i = 1; i <= n; ++i) {
        const double s = parallel ? logperm::kernels::dot_rev(theta.data(), h.data(), i)
                                  : logperm::kernels::dot_rev_serial(theta.data(), h.data(), i);
        h[i] = s / static_cast<double>(i);
    }
    const double ms = ms_since(t0);
    std::printf("    checksum log h_n = %.6f\n", std::log(h[n]));
    return ms;
}

double bench_conv(std::size_t n, bool parallel) {
    std::vector<double> a(n + 1), b(n + 1), out(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        a[i] = 1.0 / static_cast<double>(i + 1);
        b[i] = 1.0 / static_cast<double>(2 * i + 1);
    }
    const auto t0 = clock_type::now();
    if (parallel)
        logperm::kernels::conv(a.data(), b.data(), out.data(), n + 1);
    else
        logperm::kernels::conv_serial(a.data(), b.data(), out.data(), n + 1);
    const double ms = ms_since(t0);
    std::printf("    checksum out[n] = %.6e\n", out[n]);
    return ms;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled, serial build\n");
#endif

    const auto model = logperm::WeightModel::log_power(1);
    for (std::size_t n : {1u << 14, 1u << 16}) {
        const std::vector<double> theta = model.theta_table(static_cast<std::int64_t>(n));
        std::printf("recurrence n = %zu\n", n);
        const double serial = bench_recurrence(theta, n, false);
        const double parallel = bench_recurrence(theta, n, true);
        std::printf("    serial %8.1f ms | kernel %8.1f ms | speedup %.2fx\n", serial,
                    parallel, serial / parallel);
    }

    for (std::size_t n : {4096u, 16384u}) {
        std::printf("convolution N = %zu\n", n);
        const double serial = bench_conv(n, false);
        const double parallel = bench_conv(n, true);
        std::printf("    serial %8.1f ms | kernel %8.1f ms | speedup %.2fx\n", serial,
                    parallel, serial / parallel);
    }
    return 0;
}
