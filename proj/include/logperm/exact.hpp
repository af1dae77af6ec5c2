#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "logperm/weights.hpp"

namespace logperm {

/// Multiset of cycle lengths {m -> c_m} of a permutation of n elements.
/// Only strictly positive counts are stored; sum over m of m*c_m must be n.
struct CycleType {
    std::int64_t n = 0;
    std::map<std::int64_t, std::int64_t> counts;

    bool valid() const;
    std::int64_t total_cycles() const;
    std::int64_t count_of(std::int64_t m) const;
};

/// Finite scalar law: P[X = support[i]] = probs[i].
struct DistributionTable {
    std::vector<std::int64_t> support;
    std::vector<double> probs;

    double mean() const;
    double prob_of(std::int64_t outcome) const;
    /// probs nonnegative and total mass within tol of 1.
    bool validate(double tol = 1e-9) const;
};

/// Finite law over integer tuples, with the mass lost to support
/// truncation reported explicitly.
struct JointDistribution {
    std::vector<std::vector<std::int64_t>> support;
    std::vector<double> probs;
    double mass_deficit = 0.0;
};

/// Normalization constants h_0..h_N via n*h_n = sum_m theta_m h_{n-m}.
std::vector<double> h_sequence(const WeightModel& model, std::int64_t N);

/// log(h_n) for n = 0..N (-inf where h_n = 0). Internally runs the same
/// recurrence on a rescaled window so the magnitudes may exceed double range.
std::vector<double> h_sequence_log(const WeightModel& model, std::int64_t N);

/// Same recurrences with theta_m forced to 0 on an excluded set of lengths.
std::vector<double> restricted_h(const WeightModel& model, std::int64_t N,
                                 const std::vector<std::int64_t>& excluded);
std::vector<double> restricted_h_log(const WeightModel& model, std::int64_t N,
                                     const std::vector<std::int64_t>& excluded);

/// Independent oracle: sum over integer partitions of n of
/// prod_m (theta_m/m)^{c_m} / c_m!. Enumeration-based, n <= 14.
double brute_force_hn(const WeightModel& model, int n);

/// Visit every integer partition of n as a cycle type.
void for_each_partition(int n, const std::function<void(const CycleType&)>& visit);

/// P[type] = (1/h_n) prod_m (theta_m/m)^{c_m} / c_m!. h must hold h_0..h_n.
double cycle_type_prob(const WeightModel& model, const CycleType& type,
                       const std::vector<double>& h);

/// Law of the length of the cycle containing element 1:
/// P[L_1 = m] = theta_m h_{n-m} / (n h_n), m = 1..n.
DistributionTable l1_distribution(const WeightModel& model, std::int64_t n,
                                  const std::vector<double>& h);

/// Joint law of (C_1,...,C_b); tuples with probability below prune_tol are
/// dropped from the support and accounted in mass_deficit.
JointDistribution joint_counts_distribution(const WeightModel& model, std::int64_t n,
                                            int b, std::int64_t cap,
                                            double prune_tol = 1e-15);

/// Law of the total number of cycles K = sum_m C_m.
DistributionTable k0n_distribution(const WeightModel& model, std::int64_t n);

/// E[K] = sum_m (theta_m/m) h_{n-m} / h_n, computed from the log-h table.
double k0n_mean_exact(const WeightModel& model, std::int64_t n,
                      const std::vector<double>& log_h);

}  // namespace logperm
