#include "logperm/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "logperm/asympt.hpp"
#include "logperm/sampler.hpp"

namespace logperm {

namespace detail {

double e1_series(double x) {
    // E_1(x) = -gamma - log x + sum_{n>=1} (-1)^{n+1} x^n / (n n!)
    constexpr double kGamma = 0.5772156649015328606;
    double sum = 0.0;
    double term = 1.0;
    for (int n = 1; n <= 60; ++n) {
        term *= -x / n;
        const double add = -term / n;
        sum += add;
        if (std::fabs(add) < 1e-17 * (std::fabs(sum) + 1.0)) break;
    }
    return -kGamma - std::log(x) + sum;
}

double e1_contfrac(double x) {
    // E_1(x) = e^{-x}/(x+1 - 1/(x+3 - 4/(x+5 - 9/(...)))), modified Lentz
    constexpr double kTiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double f = d;
    for (int i = 1; i <= 300; ++i) {
        const double a = -static_cast<double>(i) * static_cast<double>(i);
        b += 2.0;
        d = a * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + a / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return f * std::exp(-x);
}

}  // namespace detail

ShapeCurve young_profile(const CycleType& type, const std::vector<double>& xs,
                         const Scaling& scaling) {
    if (xs.empty()) throw std::invalid_argument("young_profile: empty grid");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0)) throw std::invalid_argument("young_profile: grid must be positive");
        if (i > 0 && !(xs[i] > xs[i - 1]))
            throw std::invalid_argument("young_profile: grid must be strictly increasing");
    }
    ShapeCurve curve;
    curve.xs = xs;
    curve.scaling = scaling;
    curve.values.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double threshold = xs[i] * scaling.n_star;
        std::int64_t tail = 0;
        for (const auto& [m, c] : type.counts)
            if (static_cast<double>(m) >= threshold) tail += c;
        curve.values[i] = static_cast<double>(tail) / scaling.n_bar;
    }
    return curve;
}

double w_infinity(double x) {
    if (!(x > 0.0)) throw std::domain_error("w_infinity: x > 0 required");
    return x <= 1.0 ? detail::e1_series(x) : detail::e1_contfrac(x);
}

double sigma_infinity2(double x) { return std::exp(-2.0 * x) + w_infinity(x); }

double increment_cov_theory(double x_j, double x_j1, double x_i, double x_i1) {
    if (!(0.0 <= x_j && x_j <= x_j1 && x_j1 <= x_i && x_i <= x_i1))
        throw std::domain_error("increment_cov_theory: need 0 <= x_j <= x_j1 <= x_i <= x_i1");
    auto e = [](double x) { return std::isinf(x) ? 0.0 : std::exp(-x); };
    return (e(x_j) - e(x_j1)) * (e(x_i) - e(x_i1));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double exp1_cdf(double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x); }

double ks_statistic(std::vector<double>& sample, double (*cdf)(double)) {
    if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    }
    return d;
}

K0nCltReport k0n_clt_check(const WeightModel& model, std::int64_t n, std::int64_t samples,
                           std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("k0n_clt_check: samples >= 1 required");
    if (model.kind() != WeightKind::LogPower)
        throw std::invalid_argument("k0n_clt_check: log-power model required");
    const SamplerState state(model, n, seed);

    K0nCltReport report;
    report.samples = samples;
    report.mean_exact = k0n_mean_exact(model, n, state.log_h());
    const double logn = std::log(static_cast<double>(n));
    report.sd_theory = std::sqrt(std::pow(logn, model.k() + 1) / (model.k() + 1));

    std::vector<double> z(static_cast<std::size_t>(samples));
    double mean = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        const CycleType type = state.sample_at(static_cast<std::uint64_t>(i));
        const double k_tot = static_cast<double>(type.total_cycles());
        mean += k_tot;
        z[static_cast<std::size_t>(i)] = (k_tot - report.mean_exact) / report.sd_theory;
    }
    report.mean_emp = mean / static_cast<double>(samples);
    report.ks_stat = ks_statistic(z, normal_cdf);
    return report;
}

L1ScalingReport l1_scaling_check(const WeightModel& model, std::int64_t n,
                                 std::int64_t samples, std::uint64_t seed,
                                 bool with_exact_mean) {
    if (samples < 1) throw std::invalid_argument("l1_scaling_check: samples >= 1 required");
    if (model.kind() != WeightKind::LogPower)
        throw std::invalid_argument("l1_scaling_check: log-power model required");

    const FitReport fit = estimate_cj(model);
    const SaddlePoint sp = solve_saddle(fit.P, static_cast<double>(n), 1.0);
    const double scale = std::pow(sp.r, model.k()) / static_cast<double>(n);

    const SamplerState state(model, n, seed);
    L1ScalingReport report;
    report.r = sp.r;
    report.samples = samples;
    report.mean_exact_scaled = std::numeric_limits<double>::quiet_NaN();

    std::vector<double> xs(static_cast<std::size_t>(samples));
    double mean = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        const double x =
            static_cast<double>(state.sample_first_length(static_cast<std::uint64_t>(i))) *
            scale;
        xs[static_cast<std::size_t>(i)] = x;
        mean += x;
    }
    report.mean_scaled = mean / static_cast<double>(samples);
    report.ks_vs_exp1 = ks_statistic(xs, exp1_cdf);

    if (with_exact_mean) {
        // E[L_1] = sum_m m theta_m h_{n-m} / (n h_n), from the log table
        const std::vector<double>& lh = state.log_h();
        const double lhn = lh[static_cast<std::size_t>(n)];
        double e = 0.0;
        for (std::int64_t m = 1; m <= n; ++m) {
            const double th = model.theta(m);
            const double l = lh[static_cast<std::size_t>(n - m)];
            if (th == 0.0 || !std::isfinite(l)) continue;
            e += static_cast<double>(m) * th / static_cast<double>(n) * std::exp(l - lhn);
        }
        report.mean_exact_scaled = e * scale;
    }
    return report;
}

ShapeStats shape_experiment(const WeightModel& model, std::int64_t n, std::int64_t samples,
                            std::uint64_t seed, const std::vector<double>& xs) {
    if (samples < 1) throw std::invalid_argument("shape_experiment: samples >= 1 required");
    if (model.kind() != WeightKind::LogPower)
        throw std::invalid_argument("shape_experiment: log-power model required");
    if (xs.empty()) throw std::invalid_argument("shape_experiment: empty grid");

    const FitReport fit = estimate_cj(model);
    const SaddlePoint sp = solve_saddle(fit.P, static_cast<double>(n), 1.0);
    const double n_bar = std::pow(sp.r, model.k());

    ShapeStats stats;
    stats.r = sp.r;
    stats.scaling.n_bar = n_bar;
    stats.scaling.n_star = static_cast<double>(n) / n_bar;
    stats.samples = samples;

    const SamplerState state(model, n, seed);
    const std::size_t npts = xs.size();
    std::vector<double> sum(npts, 0.0), sumsq(npts, 0.0);
    // increments over [0,1) and [1,inf): (K - w(n*)) and w(n*)
    double s1 = 0.0, s2 = 0.0, s12 = 0.0, s1sq = 0.0, s2sq = 0.0;

    for (std::int64_t i = 0; i < samples; ++i) {
        const CycleType type = state.sample_at(static_cast<std::uint64_t>(i));
        const ShapeCurve curve = young_profile(type, xs, stats.scaling);
        for (std::size_t p = 0; p < npts; ++p) {
            sum[p] += curve.values[p];
            sumsq[p] += curve.values[p] * curve.values[p];
        }
        std::int64_t w1 = 0;
        for (const auto& [m, c] : type.counts)
            if (static_cast<double>(m) >= stats.scaling.n_star) w1 += c;
        const double inc1 = static_cast<double>(type.total_cycles() - w1);
        const double inc2 = static_cast<double>(w1);
        s1 += inc1;
        s2 += inc2;
        s12 += inc1 * inc2;
        s1sq += inc1 * inc1;
        s2sq += inc2 * inc2;
    }

    const double ns = static_cast<double>(samples);
    const double logn = std::log(static_cast<double>(n));
    stats.points.resize(npts);
    for (std::size_t p = 0; p < npts; ++p) {
        FluctuationReport& rep = stats.points[p];
        rep.x = xs[p];
        rep.mean_emp = sum[p] / ns;
        rep.w_inf = w_infinity(xs[p]);
        rep.mean_shift = rep.mean_emp - rep.w_inf;
        // values are w/n_bar; Var(w)/n_bar = n_bar * Var(w/n_bar)
        rep.variance_emp = n_bar * (sumsq[p] / ns - rep.mean_emp * rep.mean_emp);
        rep.variance_theory = sigma_infinity2(xs[p]);
        rep.z_n_allowance = 5.0 / logn;
    }
    stats.cov_incr_emp = (s12 / ns - (s1 / ns) * (s2 / ns)) / n_bar;
    stats.cov_incr_theory = increment_cov_theory(
        0.0, 1.0, 1.0, std::numeric_limits<double>::infinity());
    return stats;
}

}  // namespace logperm
