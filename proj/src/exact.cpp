#include "logperm/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "logperm/kernels.hpp"

namespace logperm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> thetas_with_exclusions(const WeightModel& model, std::int64_t N,
                                           const std::vector<std::int64_t>& excluded) {
    std::vector<double> theta = model.theta_table(N);
    for (std::int64_t m : excluded)
        if (m >= 1 && m <= N) theta[static_cast<std::size_t>(m)] = 0.0;
    return theta;
}

std::vector<double> recurrence_direct(const std::vector<double>& theta, std::int64_t N) {
    std::vector<double> h(static_cast<std::size_t>(N) + 1, 0.0);
    h[0] = 1.0;
    for (std::int64_t n = 1; n <= N; ++n)
        h[static_cast<std::size_t>(n)] =
            kernels::dot_rev(theta.data(), h.data(), static_cast<std::size_t>(n)) /
            static_cast<double>(n);
    return h;
}

// Honest per-coefficient log-sum-exp; only used when the scaled window
// cannot hold the dynamic range.
std::vector<double> recurrence_logsumexp(const std::vector<double>& theta, std::int64_t N) {
    const std::size_t sz = static_cast<std::size_t>(N) + 1;
    std::vector<double> lt(sz, kNegInf);
    for (std::size_t m = 1; m < sz; ++m)
        if (theta[m] > 0.0) lt[m] = std::log(theta[m]);
    std::vector<double> lh(sz, kNegInf);
    lh[0] = 0.0;
    for (std::size_t n = 1; n < sz; ++n) {
        double max_l = kNegInf, acc = 0.0;
        for (std::size_t m = 1; m <= n; ++m) {
            if (lt[m] == kNegInf || lh[n - m] == kNegInf) continue;
            const double l = lt[m] + lh[n - m];
            if (l > max_l) {
                acc = acc * std::exp(max_l - l) + 1.0;
                max_l = l;
            } else {
                acc += std::exp(l - max_l);
            }
        }
        if (max_l != kNegInf)
            lh[n] = max_l + std::log(acc) - std::log(static_cast<double>(n));
    }
    return lh;
}

// Recurrence on a rescaled window: values are stored as h_n e^{-shift}
// and the window slides whenever the newest value leaves [1e-250, 1e250].
// Entries flushed to zero by a downward slide are ones whose relative
// contribution is below 1e-250; the terms are nonnegative, so dropping
// them is safe. If a slide would overflow an old entry the window cannot
// hold the range and we fall back to log-sum-exp.
std::vector<double> recurrence_log(const std::vector<double>& theta, std::int64_t N) {
    const std::size_t sz = static_cast<std::size_t>(N) + 1;
    std::vector<double> lh(sz, kNegInf);
    std::vector<double> scaled(sz, 0.0);
    scaled[0] = 1.0;
    lh[0] = 0.0;
    double shift = 0.0;
    for (std::size_t n = 1; n < sz; ++n) {
        const double s =
            kernels::dot_rev(theta.data(), scaled.data(), n) / static_cast<double>(n);
        scaled[n] = s;
        if (s > 0.0) lh[n] = std::log(s) + shift;
        if (s > 0.0 && (s > 1e250 || s < 1e-250)) {
            const double factor = 1.0 / s;
            if (factor > 1.0) {
                double mx = 0.0;
                for (std::size_t i = 0; i <= n; ++i) mx = std::max(mx, scaled[i]);
                if (mx * factor > 1e290) return recurrence_logsumexp(theta, N);
            }
            for (std::size_t i = 0; i <= n; ++i) scaled[i] *= factor;
            shift += std::log(s);
        }
    }
    return lh;
}

double log_type_weight(const WeightModel& model, const CycleType& type) {
    // log of prod_m (theta_m/m)^{c_m} / c_m!; -inf when some theta_m = 0
    double lw = 0.0;
    for (const auto& [m, c] : type.counts) {
        const double th = model.theta(m);
        if (th == 0.0) return kNegInf;
        lw += static_cast<double>(c) * (std::log(th) - std::log(static_cast<double>(m))) -
              std::lgamma(static_cast<double>(c) + 1.0);
    }
    return lw;
}

void partitions_rec(int remaining, int max_part, CycleType& current,
                    const std::function<void(const CycleType&)>& visit) {
    if (remaining == 0) {
        visit(current);
        return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
        ++current.counts[p];
        partitions_rec(remaining - p, p, current, visit);
        if (--current.counts[p] == 0) current.counts.erase(p);
    }
}

}  // namespace

bool CycleType::valid() const {
    std::int64_t total = 0;
    for (const auto& [m, c] : counts) {
        if (m < 1 || c < 1) return false;
        total += m * c;
    }
    return total == n;
}

std::int64_t CycleType::total_cycles() const {
    std::int64_t k = 0;
    for (const auto& [m, c] : counts) k += c;
    return k;
}

std::int64_t CycleType::count_of(std::int64_t m) const {
    auto it = counts.find(m);
    return it == counts.end() ? 0 : it->second;
}

double DistributionTable::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i)
        s += static_cast<double>(support[i]) * probs[i];
    return s;
}

double DistributionTable::prob_of(std::int64_t outcome) const {
    for (std::size_t i = 0; i < support.size(); ++i)
        if (support[i] == outcome) return probs[i];
    return 0.0;
}

bool DistributionTable::validate(double tol) const {
    double s = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) return false;
        s += p;
    }
    return std::fabs(s - 1.0) <= tol;
}

std::vector<double> h_sequence(const WeightModel& model, std::int64_t N) {
    if (N < 0) throw std::invalid_argument("h_sequence: N >= 0 required");
    return recurrence_direct(model.theta_table(N), N);
}

std::vector<double> h_sequence_log(const WeightModel& model, std::int64_t N) {
    if (N < 0) throw std::invalid_argument("h_sequence_log: N >= 0 required");
    return recurrence_log(model.theta_table(N), N);
}

std::vector<double> restricted_h(const WeightModel& model, std::int64_t N,
                                 const std::vector<std::int64_t>& excluded) {
    if (N < 0) throw std::invalid_argument("restricted_h: N >= 0 required");
    return recurrence_direct(thetas_with_exclusions(model, N, excluded), N);
}

std::vector<double> restricted_h_log(const WeightModel& model, std::int64_t N,
                                     const std::vector<std::int64_t>& excluded) {
    if (N < 0) throw std::invalid_argument("restricted_h_log: N >= 0 required");
    return recurrence_log(thetas_with_exclusions(model, N, excluded), N);
}

void for_each_partition(int n, const std::function<void(const CycleType&)>& visit) {
    if (n < 0) throw std::invalid_argument("for_each_partition: n >= 0 required");
    CycleType current;
    current.n = n;
    partitions_rec(n, n, current, visit);
}

double brute_force_hn(const WeightModel& model, int n) {
    if (n < 0 || n > 14)
        throw std::invalid_argument("brute_force_hn: enumeration limited to 0 <= n <= 14");
    double sum = 0.0;
    for_each_partition(n, [&](const CycleType& type) {
        const double lw = log_type_weight(model, type);
        if (lw != kNegInf) sum += std::exp(lw);
    });
    return sum;
}

double cycle_type_prob(const WeightModel& model, const CycleType& type,
                       const std::vector<double>& h) {
    if (!type.valid()) throw std::invalid_argument("cycle_type_prob: invalid cycle type");
    if (static_cast<std::int64_t>(h.size()) <= type.n)
        throw std::invalid_argument("cycle_type_prob: h table too short");
    const double hn = h[static_cast<std::size_t>(type.n)];
    if (!(hn > 0.0))
        throw std::domain_error("cycle_type_prob: measure undefined, h_n = 0 for n = " +
                                std::to_string(type.n));
    const double lw = log_type_weight(model, type);
    return lw == kNegInf ? 0.0 : std::exp(lw - std::log(hn));
}

DistributionTable l1_distribution(const WeightModel& model, std::int64_t n,
                                  const std::vector<double>& h) {
    if (n < 1) throw std::invalid_argument("l1_distribution: n >= 1 required");
    if (static_cast<std::int64_t>(h.size()) <= n)
        throw std::invalid_argument("l1_distribution: h table too short");
    const double hn = h[static_cast<std::size_t>(n)];
    if (!(hn > 0.0))
        throw std::domain_error("l1_distribution: measure undefined, h_n = 0 for n = " +
                                std::to_string(n));
    DistributionTable table;
    table.support.reserve(static_cast<std::size_t>(n));
    table.probs.reserve(static_cast<std::size_t>(n));
    for (std::int64_t m = 1; m <= n; ++m) {
        table.support.push_back(m);
        table.probs.push_back(model.theta(m) * h[static_cast<std::size_t>(n - m)] /
                              (static_cast<double>(n) * hn));
    }
    return table;
}

JointDistribution joint_counts_distribution(const WeightModel& model, std::int64_t n, int b,
                                            std::int64_t cap, double prune_tol) {
    if (b < 1 || b > n) throw std::invalid_argument("joint_counts_distribution: 1 <= b <= n");
    const std::vector<double> lh = h_sequence_log(model, n);
    const double lhn = lh[static_cast<std::size_t>(n)];
    if (!std::isfinite(lhn))
        throw std::domain_error("joint_counts_distribution: measure undefined for n = " +
                                std::to_string(n));
    std::vector<std::int64_t> excluded(static_cast<std::size_t>(b));
    for (int m = 1; m <= b; ++m) excluded[static_cast<std::size_t>(m - 1)] = m;
    const std::vector<double> lhr = restricted_h_log(model, n, excluded);

    JointDistribution joint;
    double collected = 0.0;
    std::vector<std::int64_t> a(static_cast<std::size_t>(b), 0);

    // depth-first over tuples with sum m*a_m <= n and a_m <= cap
    auto rec = [&](auto&& self, int m, std::int64_t used, double log_w) -> void {
        if (m > b) {
            const double lrest = lhr[static_cast<std::size_t>(n - used)];
            const double p =
                std::isfinite(lrest) ? std::exp(log_w + lrest - lhn) : 0.0;
            if (p >= prune_tol) {
                joint.support.push_back(a);
                joint.probs.push_back(p);
                collected += p;
            }
            return;
        }
        const double th = model.theta(m);
        const std::int64_t a_max =
            th == 0.0 ? 0 : std::min(cap, (n - used) / m);
        for (std::int64_t am = 0; am <= a_max; ++am) {
            a[static_cast<std::size_t>(m - 1)] = am;
            double lw = log_w;
            if (am > 0)
                lw += static_cast<double>(am) *
                          (std::log(th) - std::log(static_cast<double>(m))) -
                      std::lgamma(static_cast<double>(am) + 1.0);
            self(self, m + 1, used + am * m, lw);
        }
        a[static_cast<std::size_t>(m - 1)] = 0;
    };
    rec(rec, 1, 0, 0.0);
    joint.mass_deficit = std::max(0.0, 1.0 - collected);
    return joint;
}

DistributionTable k0n_distribution(const WeightModel& model, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("k0n_distribution: n >= 1 required");
    const std::vector<double> theta = model.theta_table(n);
    const std::vector<double> h = recurrence_direct(theta, n);
    const double hn = h[static_cast<std::size_t>(n)];
    if (!(hn > 0.0))
        throw std::domain_error("k0n_distribution: measure undefined for n = " +
                                std::to_string(n));

    double mu = 0.0;
    for (std::int64_t m = 1; m <= n; ++m)
        mu += theta[static_cast<std::size_t>(m)] / static_cast<double>(m) *
              h[static_cast<std::size_t>(n - m)] / hn;

    std::int64_t J = std::min<std::int64_t>(
        n, static_cast<std::int64_t>(std::ceil(4.0 * mu + 12.0 * std::sqrt(mu))) + 30);

    // rows of the bivariate table: row[j][i] = h_{i,j}
    const std::size_t sz = static_cast<std::size_t>(n) + 1;
    std::vector<double> prev(sz, 0.0), cur(sz, 0.0);
    prev[0] = 1.0;
    double total = 0.0;
    std::vector<double> probs;
    for (std::int64_t j = 1; j <= J; ++j) {
        std::fill(cur.begin(), cur.end(), 0.0);
        for (std::size_t i = 1; i < sz; ++i)
            cur[i] = kernels::dot_rev(theta.data(), prev.data(), i) / static_cast<double>(i);
        probs.push_back(cur[sz - 1] / hn);
        total += cur[sz - 1];
        std::swap(prev, cur);
        if (j == J && std::fabs(total / hn - 1.0) > 1e-12 && J < n) {
            J = std::min<std::int64_t>(n, J + std::max<std::int64_t>(16, J / 2));
        }
    }

    DistributionTable table;
    table.support.push_back(0);
    table.probs.push_back(n == 0 ? 1.0 : 0.0);
    for (std::size_t j = 0; j < probs.size(); ++j) {
        table.support.push_back(static_cast<std::int64_t>(j) + 1);
        table.probs.push_back(probs[j]);
    }
    return table;
}

double k0n_mean_exact(const WeightModel& model, std::int64_t n,
                      const std::vector<double>& log_h) {
    if (static_cast<std::int64_t>(log_h.size()) <= n)
        throw std::invalid_argument("k0n_mean_exact: log-h table too short");
    const double lhn = log_h[static_cast<std::size_t>(n)];
    if (!std::isfinite(lhn))
        throw std::domain_error("k0n_mean_exact: measure undefined for n = " +
                                std::to_string(n));
    double mu = 0.0;
    for (std::int64_t m = 1; m <= n; ++m) {
        const double th = model.theta(m);
        const double lh = log_h[static_cast<std::size_t>(n - m)];
        if (th == 0.0 || !std::isfinite(lh)) continue;
        mu += th / static_cast<double>(m) * std::exp(lh - lhn);
    }
    return mu;
}

}  // namespace logperm
