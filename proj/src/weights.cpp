#include "logperm/weights.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace logperm {

namespace {

double log_poly(double L, int k, const std::vector<double>& lower) {
    // L^k + sum_{j<k} a_j L^j, Horner with leading coefficient 1
    double acc = 1.0;
    for (int j = k - 1; j >= 0; --j) acc = acc * L + lower[static_cast<std::size_t>(j)];
    return acc;
}

}  // namespace

WeightModel WeightModel::log_power(int k, std::vector<double> lower_coeffs,
                                   std::int64_t validate_horizon) {
    if (k < 1) throw std::invalid_argument("WeightModel: k >= 1 required");
    if (lower_coeffs.empty()) lower_coeffs.assign(static_cast<std::size_t>(k), 0.0);
    if (static_cast<int>(lower_coeffs.size()) != k)
        throw std::invalid_argument("WeightModel: need exactly k lower coefficients a_0..a_{k-1}");

    WeightModel m;
    m.kind_ = WeightKind::LogPower;
    m.k_ = k;
    m.lower_ = std::move(lower_coeffs);

    bool any_negative = false;
    for (double a : m.lower_)
        if (a < 0.0) any_negative = true;
    if (any_negative) {
        for (std::int64_t i = 1; i <= validate_horizon; ++i) {
            if (m.theta(i) < 0.0)
                throw std::invalid_argument("WeightModel: theta_" + std::to_string(i) +
                                            " < 0 with the given lower coefficients");
        }
    }
    return m;
}

WeightModel WeightModel::constant(double theta0) {
    if (!(theta0 >= 0.0)) throw std::invalid_argument("WeightModel: theta >= 0 required");
    WeightModel m;
    m.kind_ = WeightKind::Constant;
    m.theta_const_ = theta0;
    return m;
}

WeightModel WeightModel::custom(std::vector<double> seq) {
    for (double t : seq)
        if (!(t >= 0.0)) throw std::invalid_argument("WeightModel: custom weights must be >= 0");
    WeightModel m;
    m.kind_ = WeightKind::Custom;
    m.horizon_ = static_cast<std::int64_t>(seq.size());
    m.custom_ = std::move(seq);
    return m;
}

double WeightModel::theta(std::int64_t m) const {
    if (m < 1) throw std::domain_error("theta: m >= 1 required");
    switch (kind_) {
        case WeightKind::Constant:
            return theta_const_;
        case WeightKind::Custom:
            if (m > horizon_)
                throw std::out_of_range("theta: m beyond the custom horizon " +
                                        std::to_string(horizon_));
            return custom_[static_cast<std::size_t>(m - 1)];
        case WeightKind::LogPower:
        default: {
            const double L = std::log(static_cast<double>(m));
            return log_poly(L, k_, lower_);
        }
    }
}

double WeightModel::g_partial(double t, std::int64_t n_terms) const {
    if (!(t >= 0.0) || t >= 1.0)
        throw std::domain_error("g_partial: t in [0,1) required");
    if (n_terms < 1) throw std::invalid_argument("g_partial: N >= 1 required");
    double sum = 0.0;
    double tp = 1.0;
    for (std::int64_t m = 1; m <= n_terms; ++m) {
        tp *= t;
        if (tp == 0.0) break;
        sum += theta(m) * tp / static_cast<double>(m);
    }
    return sum;
}

std::vector<double> WeightModel::theta_table(std::int64_t n) const {
    std::vector<double> tab(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::int64_t m = 1; m <= n; ++m) tab[static_cast<std::size_t>(m)] = theta(m);
    return tab;
}

}  // namespace logperm
