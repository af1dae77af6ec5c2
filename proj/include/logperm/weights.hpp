#pragma once

#include <cstdint>
#include <vector>

namespace logperm {

enum class WeightKind { LogPower, Constant, Custom };

/// Cycle-weight sequence theta_m. Three families:
///   LogPower  theta_m = log^k(m) + sum_{j<k} a_j log^j(m),  k >= 1
///   Constant  theta_m = theta0
///   Custom    theta_m given explicitly for m = 1..horizon (test oracles)
///
/// Weights must be nonnegative; LogPower models with negative lower-order
/// coefficients are scanned up to the requested horizon at construction.
/// All evaluation is pure and thread-safe.
class WeightModel {
public:
    static WeightModel log_power(int k, std::vector<double> lower_coeffs = {},
                                 std::int64_t validate_horizon = 1000000);
    static WeightModel constant(double theta0);
    static WeightModel custom(std::vector<double> seq);

    WeightKind kind() const { return kind_; }
    /// Log-power exponent k; only meaningful for LogPower models.
    int k() const { return k_; }
    const std::vector<double>& lower_coeffs() const { return lower_; }
    double theta_const() const { return theta_const_; }

    /// Largest m with a defined weight (Custom only); 0 means unbounded.
    std::int64_t horizon() const { return horizon_; }

    /// theta_m for m >= 1.
    double theta(std::int64_t m) const;

    /// Partial sum  sum_{m=1}^{n_terms} theta_m t^m / m  for 0 <= t < 1.
    double g_partial(double t, std::int64_t n_terms) const;

    /// theta_1..theta_n as a table (index m holds theta_m; index 0 unused = 0).
    std::vector<double> theta_table(std::int64_t n) const;

    bool operator==(const WeightModel&) const = default;

private:
    WeightModel() = default;
    WeightKind kind_ = WeightKind::Constant;
    int k_ = 0;
    std::vector<double> lower_;
    double theta_const_ = 0.0;
    std::vector<double> custom_;
    std::int64_t horizon_ = 0;
};

}  // namespace logperm
