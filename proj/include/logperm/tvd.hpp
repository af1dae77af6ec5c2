#pragma once

#include <cstdint>
#include <vector>

#include "logperm/weights.hpp"

namespace logperm {

/// Law of T = sum over a set of lengths m of m*Y_m, with Y_m independent
/// Poisson(theta_m/m). pmf[l] = P[T = l] for l = 0..lmax; the mass beyond
/// lmax is reported, never silently dropped.
struct PoissonWeightedSum {
    std::int64_t b1 = 0;  // lengths b1+1..b2 for the range form; -1 otherwise
    std::int64_t b2 = 0;
    std::vector<double> pmf;
    double tail_mass = 0.0;

    double prob_of(std::int64_t l) const;
};

/// T over the contiguous range m = b1+1..b2.
PoissonWeightedSum t_pmf(const WeightModel& model, std::int64_t b1, std::int64_t b2,
                         std::int64_t lmax);

/// T over an arbitrary set of lengths.
PoissonWeightedSum weighted_poisson_sum_pmf(const WeightModel& model,
                                            const std::vector<std::int64_t>& lengths,
                                            std::int64_t lmax);

/// Total variation distance with a certified bracket: value <= d <= upper.
/// The two coincide whenever the outer sum was carried to l = n.
struct DtvResult {
    double value = 0.0;
    double upper = 0.0;
};

/// d_b(n) = sum_l P[T_{0b} = l] (1 - P[T_{bn} = n-l]/P[T_{0n} = n])_+ .
DtvResult dtv_via_formula(const WeightModel& model, std::int64_t n, std::int64_t b);

/// Definition route: half the l1 distance between the joint law of the
/// cycle counts on the given lengths and the matching Poisson product.
/// Exact: tuples with sum m*a_m <= n are enumerated, the rest is Poisson
/// tail mass.
double dtv_direct_subset(const WeightModel& model, std::int64_t n,
                         const std::vector<std::int64_t>& lengths);

/// Same for the prefix (C_1..C_b); enumeration scale, n <= 16 and b <= 5.
double dtv_direct(const WeightModel& model, int n, int b);

/// (3k+3)^{-1/(k+1)}, the proved growth threshold for b(n).
double threshold_c(int k);

}  // namespace logperm
