#pragma once

#include <cstddef>

namespace logperm::kernels {

/// Fixed reduction chunk. Parallel reductions sum whole chunks in index
/// order, so results do not depend on the number of OpenMP threads.
inline constexpr std::size_t kChunk = 8192;

/// sum_{m=1}^{n} w[m] * h[n-m]   (the inner step of exp-type recurrences).
/// Deterministic for any thread count; falls back to the serial loop for
/// small n.
double dot_rev(const double* w, const double* h, std::size_t n);

/// Plain left-to-right loop, kept as the reference implementation.
double dot_rev_serial(const double* w, const double* h, std::size_t n);

/// Truncated Cauchy product: out[j] = sum_{i=0}^{j} a[i]*b[j-i], j = 0..n_out-1.
/// Parallel over output coefficients; each coefficient is accumulated
/// left-to-right, so the result is bitwise identical to the serial version.
void conv(const double* a, const double* b, double* out, std::size_t n_out);

void conv_serial(const double* a, const double* b, double* out, std::size_t n_out);

}  // namespace logperm::kernels
