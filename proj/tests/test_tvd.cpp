#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "logperm/exact.hpp"
#include "logperm/tvd.hpp"
#include "logperm/weights.hpp"

using namespace logperm;

namespace {
const WeightModel kLog1 = WeightModel::log_power(1);
const WeightModel kLog2 = WeightModel::log_power(2);
const WeightModel kUniform = WeightModel::constant(1.0);
}  // namespace

TEST_CASE("weighted Poisson sum pmf") {
    SUBCASE("zero weights give a point mass at zero") {
        const auto p = t_pmf(kLog1, 0, 1, 4);  // only m = 1, theta_1 = 0
        CHECK(p.pmf[0] == doctest::Approx(1.0).epsilon(1e-14));
        for (std::size_t l = 1; l <= 4; ++l) CHECK(p.pmf[l] == 0.0);
        CHECK(p.tail_mass == doctest::Approx(0.0));
    }
    SUBCASE("single even-support component") {
        const auto p = t_pmf(kLog1, 1, 2, 6);  // T = 2 Y_2, Y_2 ~ Poi(log2 / 2)
        CHECK(p.pmf[0] == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-12));
        CHECK(p.pmf[2] == doctest::Approx(0.245053).epsilon(1e-5));
        CHECK(p.pmf[1] == 0.0);
        CHECK(p.pmf[3] == 0.0);
        CHECK(p.pmf[5] == 0.0);
    }
    SUBCASE("uniform weights hit the harmonic closed form") {
        const int n = 12;
        double harmonic = 0.0;
        for (int m = 1; m <= n; ++m) harmonic += 1.0 / m;
        const auto p = t_pmf(kUniform, 0, n, n);
        CHECK(p.pmf[n] == doctest::Approx(std::exp(-harmonic)).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)t_pmf(kLog1, 2, 2, 4), std::invalid_argument);
}

TEST_CASE("analytic total variation value at n = 3") {
    const auto d = dtv_via_formula(kLog1, 3, 2);
    CHECK(d.value == doctest::Approx(1.0 - std::pow(2.0, -0.5)).epsilon(1e-12));
    CHECK(d.upper == d.value);
}

TEST_CASE("single zero-weight coordinate gives distance zero") {
    const auto d = dtv_via_formula(kLog1, 50, 1);
    CHECK(d.value <= 1e-14);
    CHECK(dtv_direct_subset(kLog1, 50, {1}) <= 1e-14);
}

TEST_CASE("hand-computed uniform case n = 4, b = 1") {
    // fixed-point counts in S_4: 9, 8, 6, 0, 1 permutations with 0..4 fixed points
    const double counts[] = {9.0, 8.0, 6.0, 0.0, 1.0};
    double acc = 0.0;
    double poisson_rest = 1.0;
    double fact = 1.0;
    for (int j = 0; j <= 4; ++j) {
        if (j > 0) fact *= j;
        const double poi = std::exp(-1.0) / fact;
        poisson_rest -= poi;
        acc += std::fabs(counts[j] / 24.0 - poi);
    }
    const double want = 0.5 * (acc + poisson_rest);
    CHECK(dtv_direct(kUniform, 4, 1) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("formula route equals the definition route") {
    for (const auto& model : {kLog1, kLog2, kUniform}) {
        for (int n : {3, 6, 9, 12}) {
            for (int b = 1; b <= std::min(4, n); ++b) {
                const auto lhs = dtv_via_formula(model, n, b);
                const double rhs = dtv_direct(model, n, b);
                CHECK(lhs.value == doctest::Approx(rhs).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("distance lies in the unit interval") {
    for (int n : {2, 5, 10, 40}) {
        for (int b = 1; b <= std::min<int>(n, 6); ++b) {
            const auto d = dtv_via_formula(kLog1, n, b);
            CHECK(d.value >= 0.0);
            CHECK(d.upper <= 1.0);
            CHECK(d.value <= d.upper);
        }
    }
}

TEST_CASE("direct route on arbitrary length sets") {
    // (C_2, C_3) for the log weights: compare against a prefix computation
    // with the zero-weight first coordinate dropped
    const double sub = dtv_direct_subset(kLog1, 12, {2, 3});
    const double prefix = dtv_direct(kLog1, 12, 3);
    CHECK(sub == doctest::Approx(prefix).epsilon(1e-12));  // C_1 is degenerate at 0
    CHECK_THROWS_AS((void)dtv_direct_subset(kLog1, 10, {11}), std::invalid_argument);
    CHECK_THROWS_AS((void)dtv_direct(kUniform, 17, 2), std::invalid_argument);
    CHECK_THROWS_AS((void)dtv_direct(kUniform, 12, 6), std::invalid_argument);
}

TEST_CASE("growth threshold closed form") {
    CHECK(threshold_c(1) == doctest::Approx(std::pow(6.0, -0.5)).epsilon(1e-15));
    CHECK(threshold_c(1) == doctest::Approx(0.408248).epsilon(1e-6));
    CHECK(threshold_c(2) == doctest::Approx(0.480750).epsilon(1e-6));
    double prev = 0.0;
    for (int k = 1; k <= 40; ++k) {
        const double c = threshold_c(k);
        CHECK(c > prev);
        CHECK(c < 1.0);
        prev = c;
    }
    CHECK(threshold_c(400) > 0.97);
    CHECK_THROWS_AS((void)threshold_c(0), std::domain_error);
}

TEST_CASE("distance to the Poisson product shrinks with n (soft)") {
    // reported, not fatal: only the limit is guaranteed, not monotonicity
    double prev = 1.0;
    for (int p : {8, 10, 12, 14}) {
        const auto d = dtv_via_formula(kLog1, 1LL << p, 3);
        CHECK(d.value >= 0.0);
        CHECK(d.value <= 1.0);
        WARN_MESSAGE(d.value <= prev, "d_3 not monotone at n = 2^", p);
        prev = d.value;
    }
    CHECK(prev < 0.01);
}
