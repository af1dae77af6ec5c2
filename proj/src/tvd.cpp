#include "logperm/tvd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "logperm/exact.hpp"

namespace logperm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log h-style table restricted to the given lengths (all others excluded)
std::vector<double> log_coeffs_on(const WeightModel& model,
                                  const std::vector<std::int64_t>& lengths,
                                  std::int64_t lmax) {
    std::vector<bool> keep(static_cast<std::size_t>(lmax) + 1, false);
    for (std::int64_t m : lengths)
        if (m >= 1 && m <= lmax) keep[static_cast<std::size_t>(m)] = true;
    std::vector<std::int64_t> excluded;
    for (std::int64_t m = 1; m <= lmax; ++m)
        if (!keep[static_cast<std::size_t>(m)]) excluded.push_back(m);
    return restricted_h_log(model, lmax, excluded);
}

double lambda_total(const WeightModel& model, const std::vector<std::int64_t>& lengths) {
    double lam = 0.0;
    for (std::int64_t m : lengths) lam += model.theta(m) / static_cast<double>(m);
    return lam;
}

double log_poisson_pmf(double lambda, std::int64_t a) {
    if (lambda == 0.0) return a == 0 ? 0.0 : kNegInf;
    return -lambda + static_cast<double>(a) * std::log(lambda) -
           std::lgamma(static_cast<double>(a) + 1.0);
}

}  // namespace

double PoissonWeightedSum::prob_of(std::int64_t l) const {
    if (l < 0 || l >= static_cast<std::int64_t>(pmf.size())) return 0.0;
    return pmf[static_cast<std::size_t>(l)];
}

PoissonWeightedSum weighted_poisson_sum_pmf(const WeightModel& model,
                                            const std::vector<std::int64_t>& lengths,
                                            std::int64_t lmax) {
    if (lmax < 0) throw std::invalid_argument("weighted_poisson_sum_pmf: lmax >= 0 required");
    PoissonWeightedSum out;
    out.b1 = -1;
    out.b2 = -1;
    const double lam = lambda_total(model, lengths);
    const std::vector<double> lc = log_coeffs_on(model, lengths, lmax);
    out.pmf.resize(static_cast<std::size_t>(lmax) + 1, 0.0);
    double mass = 0.0;
    for (std::int64_t l = 0; l <= lmax; ++l) {
        const double lv = lc[static_cast<std::size_t>(l)];
        const double p = std::isfinite(lv) ? std::exp(lv - lam) : 0.0;
        out.pmf[static_cast<std::size_t>(l)] = p;
        mass += p;
    }
    out.tail_mass = std::max(0.0, 1.0 - mass);
    return out;
}

PoissonWeightedSum t_pmf(const WeightModel& model, std::int64_t b1, std::int64_t b2,
                         std::int64_t lmax) {
    if (b1 < 0 || b1 >= b2) throw std::invalid_argument("t_pmf: 0 <= b1 < b2 required");
    std::vector<std::int64_t> lengths;
    lengths.reserve(static_cast<std::size_t>(b2 - b1));
    for (std::int64_t m = b1 + 1; m <= b2; ++m) lengths.push_back(m);
    PoissonWeightedSum out = weighted_poisson_sum_pmf(model, lengths, lmax);
    out.b1 = b1;
    out.b2 = b2;
    return out;
}

DtvResult dtv_via_formula(const WeightModel& model, std::int64_t n, std::int64_t b) {
    if (b < 1 || b > n) throw std::invalid_argument("dtv_via_formula: 1 <= b <= n required");

    const std::vector<double> log_h = h_sequence_log(model, n);
    if (!std::isfinite(log_h[static_cast<std::size_t>(n)]))
        throw std::domain_error("dtv_via_formula: P[T_{0n} = n] = 0, measure undefined for n = " +
                                std::to_string(n));

    // outer sum cap: mean + 12 sd of T_{0b}, never past n (the mass beyond
    // n contributes in full and is known exactly from the total)
    double mean = 0.0, var = 0.0;
    for (std::int64_t m = 1; m <= b; ++m) {
        const double th = model.theta(m);
        mean += th;
        var += static_cast<double>(m) * th;
    }
    const std::int64_t cap = std::min<std::int64_t>(
        n, static_cast<std::int64_t>(std::ceil(mean + 12.0 * std::sqrt(var))) + 8);

    const PoissonWeightedSum t0b = t_pmf(model, 0, b, cap);

    std::vector<std::int64_t> tail_lengths;
    for (std::int64_t m = b + 1; m <= n; ++m) tail_lengths.push_back(m);
    double lam0b = 0.0;
    for (std::int64_t m = 1; m <= b; ++m) lam0b += model.theta(m) / static_cast<double>(m);
    const std::vector<double> log_hr =
        b < n ? log_coeffs_on(model, tail_lengths, n) : std::vector<double>{0.0};

    const double lhn = log_h[static_cast<std::size_t>(n)];
    double sum = 0.0;
    for (std::int64_t l = 0; l <= cap; ++l) {
        const double p = t0b.prob_of(l);
        if (p == 0.0) continue;
        double ratio = 0.0;
        if (n - l < static_cast<std::int64_t>(log_hr.size())) {
            const double lv = log_hr[static_cast<std::size_t>(n - l)];
            if (std::isfinite(lv)) ratio = std::exp(lam0b + lv - lhn);
        }
        sum += p * std::max(0.0, 1.0 - ratio);
    }

    DtvResult res;
    if (cap == n) {
        res.value = std::min(1.0, sum + t0b.tail_mass);
        res.upper = res.value;
    } else {
        res.value = std::min(1.0, sum);
        res.upper = std::min(1.0, sum + t0b.tail_mass);
    }
    return res;
}

double dtv_direct_subset(const WeightModel& model, std::int64_t n,
                         const std::vector<std::int64_t>& lengths) {
    if (n < 1) throw std::invalid_argument("dtv_direct_subset: n >= 1 required");
    for (std::int64_t m : lengths)
        if (m < 1 || m > n)
            throw std::invalid_argument("dtv_direct_subset: lengths must lie in 1..n");

    const std::vector<double> log_h = h_sequence_log(model, n);
    const double lhn = log_h[static_cast<std::size_t>(n)];
    if (!std::isfinite(lhn))
        throw std::domain_error("dtv_direct_subset: measure undefined for n = " +
                                std::to_string(n));

    std::vector<std::int64_t> excluded = lengths;
    const std::vector<double> log_hr = restricted_h_log(model, n, excluded);

    const std::size_t d = lengths.size();
    std::vector<double> lam(d), log_th(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double th = model.theta(lengths[i]);
        lam[i] = th / static_cast<double>(lengths[i]);
        log_th[i] = th > 0.0 ? std::log(lam[i]) : kNegInf;
    }

    // enumerate all tuples with sum m*a_m <= n; beyond that the weighted
    // measure is zero and the Poisson side contributes its tail mass
    double acc = 0.0;
    auto rec = [&](auto&& self, std::size_t i, std::int64_t used, double log_w,
                   double log_py) -> void {
        if (i == d) {
            const double lv = log_hr[static_cast<std::size_t>(n - used)];
            const double pc =
                (std::isfinite(log_w) && std::isfinite(lv)) ? std::exp(log_w + lv - lhn) : 0.0;
            const double py = std::exp(log_py);
            acc += std::fabs(pc - py);
            return;
        }
        const std::int64_t m = lengths[i];
        const std::int64_t a_max = (n - used) / m;
        for (std::int64_t a = 0; a <= a_max; ++a) {
            double lw = log_w, lpy = log_py - lam[i];
            if (a > 0) {
                if (log_th[i] == kNegInf) {
                    lw = kNegInf;
                    lpy = kNegInf;
                } else {
                    const double t = static_cast<double>(a) * log_th[i] -
                                     std::lgamma(static_cast<double>(a) + 1.0);
                    lw += t;
                    lpy += t;
                }
            }
            if (lpy == kNegInf && lw == kNegInf) continue;
            self(self, i + 1, used + a * m, lw, lpy);
        }
    };
    rec(rec, 0, 0, 0.0, 0.0);

    const PoissonWeightedSum wps = weighted_poisson_sum_pmf(model, lengths, n);
    return 0.5 * (acc + wps.tail_mass);
}

double dtv_direct(const WeightModel& model, int n, int b) {
    if (n < 1 || n > 16) throw std::invalid_argument("dtv_direct: enumeration limit n <= 16");
    if (b < 1 || b > 5) throw std::invalid_argument("dtv_direct: enumeration limit b <= 5");
    if (b > n) throw std::invalid_argument("dtv_direct: b <= n required");
    std::vector<std::int64_t> lengths;
    for (int m = 1; m <= b; ++m) lengths.push_back(m);
    return dtv_direct_subset(model, n, lengths);
}

double threshold_c(int k) {
    if (k < 1) throw std::domain_error("threshold_c: k >= 1 required");
    return std::pow(3.0 * k + 3.0, -1.0 / (k + 1.0));
}

}  // namespace logperm
