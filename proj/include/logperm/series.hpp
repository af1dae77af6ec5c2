#pragma once

#include <cstddef>
#include <vector>

namespace logperm {

/// Formal power series truncated at a fixed order N: c[n] is the
/// coefficient of t^n, 0 <= n <= N. Operations never read or write past N.
struct TruncatedSeries {
    std::vector<double> c;

    TruncatedSeries() = default;
    explicit TruncatedSeries(std::size_t order, double c0 = 0.0) : c(order + 1, 0.0) {
        c[0] = c0;
    }
    explicit TruncatedSeries(std::vector<double> coeffs) : c(std::move(coeffs)) {}

    std::size_t order() const { return c.size() - 1; }
};

/// Sign/log-magnitude representation of a truncated series. sign[n] == 0
/// iff the coefficient is exactly zero (logabs[n] then holds -infinity).
struct LogSpaceSeries {
    std::vector<int> sign;
    std::vector<double> logabs;

    std::size_t order() const { return sign.size() - 1; }
};

/// Cauchy product truncated at the common order. Orders must match.
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);

/// exp(a) via n*e_n = sum_{m=1}^{n} m*a_m*e_{n-m}, e_0 = 1. Requires a.c[0] == 0.
TruncatedSeries series_exp(const TruncatedSeries& a);

/// log(a). Requires a.c[0] == 1.
TruncatedSeries series_log(const TruncatedSeries& a);

LogSpaceSeries to_logspace(const TruncatedSeries& a);

/// Back to plain coefficients; values outside double range become +/-inf.
TruncatedSeries from_logspace(const LogSpaceSeries& a);

/// exp-recurrence carried out entirely on (sign, logabs) pairs, so the
/// input and output coefficients may have magnitudes far outside double
/// range. Requires the constant term to be zero.
LogSpaceSeries series_exp_log(const LogSpaceSeries& a);

}  // namespace logperm
