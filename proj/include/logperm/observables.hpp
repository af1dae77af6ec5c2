#pragma once

#include <cstdint>
#include <vector>

#include "logperm/exact.hpp"
#include "logperm/weights.hpp"

namespace logperm {

/// Horizontal/vertical rescaling of a Young diagram; n_star * n_bar = n.
struct Scaling {
    double n_star = 1.0;
    double n_bar = 1.0;
};

/// Rescaled diagram profile sampled on a grid: values[i] is the number of
/// cycles of length >= xs[i]*n_star, divided by n_bar. Nonincreasing in x.
struct ShapeCurve {
    std::vector<double> xs;
    std::vector<double> values;
    Scaling scaling;
};

ShapeCurve young_profile(const CycleType& type, const std::vector<double>& xs,
                         const Scaling& scaling);

/// Exponential integral E_1(x) = int_x^inf u^{-1} e^{-u} du, x > 0.
/// Series for x <= 1, continued fraction beyond; absolute error <= 1e-12.
double w_infinity(double x);

/// e^{-2x} + w_infinity(x).
double sigma_infinity2(double x);

/// Limit covariance of profile increments over [x_j, x_j1) and [x_i, x_i1):
/// (e^{-x_j} - e^{-x_j1})(e^{-x_i} - e^{-x_i1}). Requires
/// 0 <= x_j <= x_j1 <= x_i <= x_i1 (infinities allowed).
double increment_cov_theory(double x_j, double x_j1, double x_i, double x_i1);

namespace detail {
double e1_series(double x);
double e1_contfrac(double x);
}  // namespace detail

/// Kolmogorov-Smirnov distance of a sample (modified in place by sorting)
/// to a CDF given as a callable.
double ks_statistic(std::vector<double>& sample, double (*cdf)(double));
double normal_cdf(double z);
double exp1_cdf(double x);

struct K0nCltReport {
    double mean_emp = 0.0;
    double mean_exact = 0.0;    // sum_m (theta_m/m) h_{n-m}/h_n
    double sd_theory = 0.0;     // sqrt(log^{k+1}(n)/(k+1))
    double ks_stat = 0.0;
    std::int64_t samples = 0;
};

/// Sample the total cycle count, standardize by the exact mean and the
/// limit variance, and report the KS distance to the standard normal.
K0nCltReport k0n_clt_check(const WeightModel& model, std::int64_t n, std::int64_t samples,
                           std::uint64_t seed);

struct L1ScalingReport {
    double r = 0.0;             // v=1 saddle point
    double mean_scaled = 0.0;   // mean of L_1 r^k / n
    double ks_vs_exp1 = 0.0;
    double mean_exact_scaled = 0.0;  // E[L_1] r^k / n from the exact law; NaN if skipped
    std::int64_t samples = 0;
};

/// Empirical law of L_1 r^k / n against the unit exponential.
L1ScalingReport l1_scaling_check(const WeightModel& model, std::int64_t n,
                                 std::int64_t samples, std::uint64_t seed,
                                 bool with_exact_mean = true);

/// Per-point fluctuation summary of the rescaled profile.
struct FluctuationReport {
    double x = 0.0;
    double mean_emp = 0.0;
    double w_inf = 0.0;
    double mean_shift = 0.0;       // mean_emp - w_inf
    double variance_emp = 0.0;     // Var(w_n(x n*)) / n_bar
    double variance_theory = 0.0;  // sigma_infinity2(x)
    double z_n_allowance = 0.0;    // 5 / log n
};

struct ShapeStats {
    double r = 0.0;
    Scaling scaling;
    std::vector<FluctuationReport> points;
    /// Empirical and limit covariance of the increments over [0,1) and [1,inf).
    double cov_incr_emp = 0.0;
    double cov_incr_theory = 0.0;
    std::int64_t samples = 0;
};

/// Monte Carlo profile statistics at the given grid points.
ShapeStats shape_experiment(const WeightModel& model, std::int64_t n, std::int64_t samples,
                            std::uint64_t seed, const std::vector<double>& xs);

}  // namespace logperm
