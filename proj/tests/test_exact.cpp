#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "logperm/exact.hpp"
#include "logperm/series.hpp"
#include "logperm/weights.hpp"

using namespace logperm;

namespace {
const WeightModel kLog1 = WeightModel::log_power(1);
const WeightModel kLog2 = WeightModel::log_power(2);
const WeightModel kUniform = WeightModel::constant(1.0);

CycleType make_type(std::int64_t n, std::map<std::int64_t, std::int64_t> counts) {
    CycleType t;
    t.n = n;
    t.counts = std::move(counts);
    return t;
}
}  // namespace

TEST_CASE("h recurrence reference values") {
    const auto h = h_sequence(kLog1, 4);
    CHECK(h[0] == 1.0);
    CHECK(h[1] == 0.0);
    CHECK(h[2] == doctest::Approx(0.346574).epsilon(1e-6));
    CHECK(h[3] == doctest::Approx(0.366204).epsilon(1e-6));
    CHECK(h[4] == doctest::Approx(0.406630).epsilon(1e-6));

    const auto ones = h_sequence(kUniform, 50);
    for (double v : ones) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    const auto ew2 = h_sequence(WeightModel::constant(2.0), 3);
    for (std::size_t i = 0; i <= 3; ++i)
        CHECK(ew2[i] == doctest::Approx(static_cast<double>(i + 1)).epsilon(1e-12));
}

TEST_CASE("h matches the exp of the weight series") {
    for (const auto& model : {kLog1, kLog2, kUniform}) {
        const std::int64_t N = 256;
        const auto h = h_sequence(model, N);
        TruncatedSeries g(static_cast<std::size_t>(N));
        for (std::int64_t m = 1; m <= N; ++m)
            g.c[static_cast<std::size_t>(m)] = model.theta(m) / static_cast<double>(m);
        const auto e = series_exp(g);
        for (std::size_t i = 0; i <= static_cast<std::size_t>(N); ++i)
            CHECK(h[i] == doctest::Approx(e.c[i]).epsilon(1e-11));
    }
}

TEST_CASE("brute force oracle") {
    CHECK(brute_force_hn(kLog1, 3) == doctest::Approx(std::log(3.0) / 3.0).epsilon(1e-13));
    CHECK(brute_force_hn(kLog1, 1) == 0.0);
    CHECK(brute_force_hn(kUniform, 5) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_THROWS_AS((void)brute_force_hn(kLog1, 15), std::invalid_argument);

    int partitions = 0;
    for_each_partition(14, [&](const CycleType& t) {
        CHECK(t.valid());
        ++partitions;
    });
    CHECK(partitions == 135);
}

TEST_CASE("h equals brute force up to n = 14") {
    const auto custom = WeightModel::custom(
        {0.3, 1.7, 0.0, 2.2, 0.9, 1.1, 0.5, 3.0, 0.01, 1.0, 0.7, 0.2, 1.5, 0.8});
    for (const auto& model : {kLog1, kLog2, kUniform, custom}) {
        const auto h = h_sequence(model, 14);
        for (int n = 0; n <= 14; ++n) {
            const double oracle = brute_force_hn(model, n);
            CHECK(h[static_cast<std::size_t>(n)] ==
                  doctest::Approx(oracle).epsilon(1e-12));
        }
    }
}

TEST_CASE("log-space h agrees with the direct recurrence") {
    for (const auto& model : {kLog1, kLog2, kUniform}) {
        const auto h = h_sequence(model, 300);
        const auto lh = h_sequence_log(model, 300);
        for (std::size_t i = 0; i <= 300; ++i) {
            if (h[i] == 0.0)
                CHECK(std::isinf(lh[i]));
            else
                CHECK(std::exp(lh[i]) == doctest::Approx(h[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("log-space h at n = 1e5 is finite and positive") {
    const auto lh = h_sequence_log(kLog1, 100000);
    CHECK(std::isfinite(lh[100000]));
    CHECK(lh[100000] == doctest::Approx(36.5152).epsilon(1e-4));
}

TEST_CASE("cycle type probabilities") {
    const auto h = h_sequence(kLog1, 4);
    CHECK(cycle_type_prob(kLog1, make_type(3, {{3, 1}}), h) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cycle_type_prob(kLog1, make_type(3, {{1, 3}}), h) == 0.0);
    CHECK(cycle_type_prob(kLog1, make_type(4, {{4, 1}}), h) ==
          doctest::Approx(0.852307).epsilon(1e-6));
    CHECK_THROWS_AS((void)cycle_type_prob(kLog1, make_type(1, {{1, 1}}), h),
                    std::domain_error);
    CHECK_THROWS_AS((void)cycle_type_prob(kLog1, make_type(4, {{3, 1}}), h),
                    std::invalid_argument);
}

TEST_CASE("cycle type probabilities sum to one") {
    const auto custom = WeightModel::custom({0.5, 1.2, 0.8, 2.0, 0.0, 1.4, 0.9, 1.0,
                                             0.6, 1.1, 0.4, 0.3});
    for (const auto& model : {kLog1, kUniform, custom}) {
        for (int n : {2, 5, 9, 12}) {
            const auto h = h_sequence(model, n);
            if (!(h[static_cast<std::size_t>(n)] > 0.0)) continue;
            double total = 0.0;
            for_each_partition(n, [&](const CycleType& t) {
                total += cycle_type_prob(model, t, h);
            });
            CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("first-cycle law") {
    const auto h4 = h_sequence(kLog1, 4);
    const auto l1 = l1_distribution(kLog1, 4, h4);
    CHECK(l1.prob_of(4) == doctest::Approx(0.852307).epsilon(1e-6));
    CHECK(l1.prob_of(2) == doctest::Approx(0.147693).epsilon(1e-6));
    CHECK(l1.prob_of(1) == 0.0);
    CHECK(l1.prob_of(3) == 0.0);
    CHECK(l1.validate(1e-10));

    const auto h3 = h_sequence(kLog1, 3);
    const auto point = l1_distribution(kLog1, 3, h3);
    CHECK(point.prob_of(3) == doctest::Approx(1.0).epsilon(1e-12));

    const auto h5 = h_sequence(kUniform, 5);
    const auto flat = l1_distribution(kUniform, 5, h5);
    for (std::int64_t m = 1; m <= 5; ++m)
        CHECK(flat.prob_of(m) == doctest::Approx(0.2).epsilon(1e-12));

    CHECK_THROWS_AS((void)l1_distribution(kLog1, 1, h4), std::domain_error);
}

TEST_CASE("first-cycle law is the size-biased marginal") {
    // P[L_1 = m] = sum over types of P[type] * m c_m / n
    for (const auto& model : {kLog1, kUniform}) {
        for (int n : {4, 7, 12}) {
            const auto h = h_sequence(model, n);
            if (!(h[static_cast<std::size_t>(n)] > 0.0)) continue;
            const auto l1 = l1_distribution(model, n, h);
            std::vector<double> biased(static_cast<std::size_t>(n) + 1, 0.0);
            for_each_partition(n, [&](const CycleType& t) {
                const double p = cycle_type_prob(model, t, h);
                for (const auto& [m, c] : t.counts)
                    biased[static_cast<std::size_t>(m)] +=
                        p * static_cast<double>(m * c) / static_cast<double>(n);
            });
            for (std::int64_t m = 1; m <= n; ++m)
                CHECK(biased[static_cast<std::size_t>(m)] ==
                      doctest::Approx(l1.prob_of(m)).epsilon(1e-10));
        }
    }
}

TEST_CASE("restricted normalization constants") {
    const auto plain = restricted_h(kLog1, 6, {});
    const auto full = h_sequence(kLog1, 6);
    for (std::size_t i = 0; i <= 6; ++i) CHECK(plain[i] == full[i]);

    const auto none = restricted_h(kLog1, 5, {1, 2, 3, 4, 5});
    CHECK(none[0] == 1.0);
    for (std::size_t i = 1; i <= 5; ++i) CHECK(none[i] == 0.0);

    const auto no2 = restricted_h(kLog1, 4, {2});
    CHECK(no2[4] == doctest::Approx(0.346574).epsilon(1e-6));
}

TEST_CASE("joint counts law") {
    const auto joint32 = joint_counts_distribution(kLog1, 3, 2, 3);
    REQUIRE(joint32.support.size() >= 1);
    double mass_00 = 0.0;
    for (std::size_t i = 0; i < joint32.support.size(); ++i)
        if (joint32.support[i] == std::vector<std::int64_t>{0, 0}) mass_00 = joint32.probs[i];
    CHECK(mass_00 == doctest::Approx(1.0).epsilon(1e-12));

    const auto j21 = joint_counts_distribution(kUniform, 2, 1, 2);
    double p0 = 0.0, p2 = 0.0;
    for (std::size_t i = 0; i < j21.support.size(); ++i) {
        if (j21.support[i][0] == 0) p0 = j21.probs[i];
        if (j21.support[i][0] == 2) p2 = j21.probs[i];
    }
    CHECK(p0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p2 == doctest::Approx(0.5).epsilon(1e-12));

    const auto j42 = joint_counts_distribution(kLog1, 4, 2, 4);
    double p00 = 0.0, p02 = 0.0, total = 0.0;
    for (std::size_t i = 0; i < j42.support.size(); ++i) {
        total += j42.probs[i];
        if (j42.support[i] == std::vector<std::int64_t>{0, 0}) p00 = j42.probs[i];
        if (j42.support[i] == std::vector<std::int64_t>{0, 2}) p02 = j42.probs[i];
    }
    CHECK(p00 == doctest::Approx(0.852307).epsilon(1e-6));
    CHECK(p02 == doctest::Approx(0.147693).epsilon(1e-6));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("joint law marginal matches enumeration") {
    for (const auto& model : {kLog1, kUniform}) {
        for (int n : {5, 9, 12}) {
            const auto h = h_sequence(model, n);
            if (!(h[static_cast<std::size_t>(n)] > 0.0)) continue;
            const auto joint = joint_counts_distribution(model, n, 1, n);
            std::vector<double> marg(static_cast<std::size_t>(n) + 1, 0.0);
            for_each_partition(n, [&](const CycleType& t) {
                marg[static_cast<std::size_t>(t.count_of(1))] +=
                    cycle_type_prob(model, t, h);
            });
            for (std::size_t i = 0; i < joint.support.size(); ++i)
                CHECK(joint.probs[i] ==
                      doctest::Approx(marg[static_cast<std::size_t>(joint.support[i][0])])
                          .epsilon(1e-10));
        }
    }
}

TEST_CASE("total cycle count law") {
    const auto point = k0n_distribution(kLog1, 3);
    CHECK(point.prob_of(1) == doctest::Approx(1.0).epsilon(1e-12));

    const auto stirling = k0n_distribution(kUniform, 3);
    CHECK(stirling.prob_of(1) == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
    CHECK(stirling.prob_of(2) == doctest::Approx(3.0 / 6.0).epsilon(1e-12));
    CHECK(stirling.prob_of(3) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

    CHECK_THROWS_AS((void)k0n_distribution(kLog1, 1), std::domain_error);
}

TEST_CASE("total cycle count law matches enumeration") {
    for (const auto& model : {kLog1, kUniform}) {
        for (int n : {6, 10}) {
            const auto h = h_sequence(model, n);
            const auto law = k0n_distribution(model, n);
            CHECK(law.validate(1e-10));
            std::map<std::int64_t, double> by_count;
            for_each_partition(n, [&](const CycleType& t) {
                by_count[t.total_cycles()] += cycle_type_prob(model, t, h);
            });
            for (const auto& [j, p] : by_count)
                CHECK(law.prob_of(j) == doctest::Approx(p).epsilon(1e-10));
        }
    }
}

TEST_CASE("exact mean of the cycle count, two routes") {
    for (const auto& model : {kLog1, kLog2, kUniform}) {
        for (int n : {8, 32, 200}) {
            const auto lh = h_sequence_log(model, n);
            if (!std::isfinite(lh[static_cast<std::size_t>(n)])) continue;
            const double mu = k0n_mean_exact(model, n, lh);
            if (n <= 32) {
                const auto law = k0n_distribution(model, n);
                CHECK(mu == doctest::Approx(law.mean()).epsilon(1e-9));
            }
            CHECK(mu > 0.0);
        }
    }
}
