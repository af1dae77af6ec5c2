#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "logperm/exact.hpp"
#include "logperm/weights.hpp"

namespace logperm {

/// Exact sampler of cycle types under the weighted measure. A draw builds
/// the type cycle by cycle: with n' elements left, the next length is m
/// with probability theta_m h_{n'-m} / (n' h_{n'}), which telescopes to
/// the cycle-type law. The first drawn length is the length of the cycle
/// containing element 1.
///
/// Immutable after construction; draws are pure functions of the stream
/// index, so batches may run on any number of threads in any order.
class SamplerState {
public:
    SamplerState(WeightModel model, std::int64_t n, std::uint64_t seed);

    const WeightModel& model() const { return model_; }
    std::int64_t n() const { return n_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<double>& log_h() const { return log_h_; }

    /// Draw from substream `stream` of the master seed.
    CycleType sample_at(std::uint64_t stream) const;

    /// The first cycle length of the draw (the cycle containing element 1).
    std::int64_t sample_first_length(std::uint64_t stream) const;

    /// Streams 0..count-1. `workers` caps the thread count; it never
    /// changes the result.
    std::vector<CycleType> sample_batch(std::int64_t count, int workers = 0) const;

private:
    WeightModel model_;
    std::int64_t n_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<double> log_h_;
    std::vector<double> h_direct_;  // empty when magnitudes exceed double range
    std::vector<double> theta_;
    std::vector<double> log_theta_;

    std::int64_t draw_length(std::int64_t remaining, double u) const;
};

/// One cycle type per line: "n: m1^c1 m2^c2 ..." with lengths ascending.
std::string serialize(const CycleType& type);
CycleType parse_cycle_type(const std::string& line);

/// Read a sample stream in the line format; '#' lines are metadata.
std::vector<CycleType> read_cycle_types(std::istream& in);

}  // namespace logperm
