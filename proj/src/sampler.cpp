#include "logperm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "logperm/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace logperm {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

SamplerState::SamplerState(WeightModel model, std::int64_t n, std::uint64_t seed)
    : model_(std::move(model)), n_(n), seed_(seed) {
    if (n < 1) throw std::invalid_argument("SamplerState: n >= 1 required");
    log_h_ = h_sequence_log(model_, n);
    if (!std::isfinite(log_h_[static_cast<std::size_t>(n)]))
        throw std::domain_error("SamplerState: measure undefined, h_n = 0 for n = " +
                                std::to_string(n));
    theta_ = model_.theta_table(n);
    log_theta_.assign(theta_.size(), kNegInf);
    for (std::size_t m = 1; m < theta_.size(); ++m)
        if (theta_[m] > 0.0) log_theta_[m] = std::log(theta_[m]);

    double max_abs = 0.0;
    for (double lh : log_h_)
        if (std::isfinite(lh)) max_abs = std::max(max_abs, std::fabs(lh));
    if (max_abs < 600.0) {
        h_direct_.resize(log_h_.size());
        for (std::size_t i = 0; i < log_h_.size(); ++i)
            h_direct_[i] = std::isfinite(log_h_[i]) ? std::exp(log_h_[i]) : 0.0;
    }
}

std::int64_t SamplerState::draw_length(std::int64_t remaining, double u) const {
    // CDF walk over m; probabilities theta_m h_{rem-m} / (rem h_rem) sum
    // to 1 by the recurrence, up to rounding. The last positive entry
    // absorbs any float leak.
    const auto rem = static_cast<std::size_t>(remaining);
    double acc = 0.0;
    std::int64_t last_positive = 0;
    if (!h_direct_.empty()) {
        const double inv = 1.0 / (static_cast<double>(remaining) * h_direct_[rem]);
        for (std::int64_t m = 1; m <= remaining; ++m) {
            const double p =
                theta_[static_cast<std::size_t>(m)] * h_direct_[rem - m] * inv;
            if (p > 0.0) {
                acc += p;
                last_positive = m;
                if (u < acc) return m;
            }
        }
    } else {
        const double base =
            log_h_[rem] + std::log(static_cast<double>(remaining));
        for (std::int64_t m = 1; m <= remaining; ++m) {
            const double lt = log_theta_[static_cast<std::size_t>(m)];
            const double lh = log_h_[rem - m];
            if (lt == kNegInf || lh == kNegInf) continue;
            const double p = std::exp(lt + lh - base);
            if (p > 0.0) {
                acc += p;
                last_positive = m;
                if (u < acc) return m;
            }
        }
    }
    if (last_positive == 0)
        throw std::logic_error("SamplerState: no admissible cycle length at n' = " +
                               std::to_string(remaining));
    return last_positive;
}

CycleType SamplerState::sample_at(std::uint64_t stream) const {
    Rng rng(stream_seed(seed_, stream));
    CycleType type;
    type.n = n_;
    std::int64_t remaining = n_;
    while (remaining > 0) {
        const std::int64_t m = draw_length(remaining, rng.u01());
        ++type.counts[m];
        remaining -= m;
    }
    if (!type.valid()) throw std::logic_error("SamplerState: drew an inconsistent cycle type");
    return type;
}

std::int64_t SamplerState::sample_first_length(std::uint64_t stream) const {
    Rng rng(stream_seed(seed_, stream));
    return draw_length(n_, rng.u01());
}

std::vector<CycleType> SamplerState::sample_batch(std::int64_t count, int workers) const {
    if (count < 0) throw std::invalid_argument("sample_batch: count >= 0 required");
    std::vector<CycleType> out(static_cast<std::size_t>(count));
#ifdef _OPENMP
    if (workers > 0) {
#pragma omp parallel for schedule(static) num_threads(workers)
        for (std::int64_t i = 0; i < count; ++i)
            out[static_cast<std::size_t>(i)] = sample_at(static_cast<std::uint64_t>(i));
        return out;
    }
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = sample_at(static_cast<std::uint64_t>(i));
#else
    (void)workers;
    for (std::int64_t i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = sample_at(static_cast<std::uint64_t>(i));
#endif
    return out;
}

std::string serialize(const CycleType& type) {
    std::ostringstream os;
    os << type.n << ":";
    for (const auto& [m, c] : type.counts) os << " " << m << "^" << c;
    return os.str();
}

std::vector<CycleType> read_cycle_types(std::istream& in) {
    std::vector<CycleType> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        out.push_back(parse_cycle_type(line));
    }
    return out;
}

CycleType parse_cycle_type(const std::string& line) {
    CycleType type;
    std::istringstream is(line);
    std::string head;
    if (!(is >> head) || head.empty() || head.back() != ':')
        throw std::invalid_argument("parse_cycle_type: expected \"n:\" prefix");
    type.n = std::stoll(head.substr(0, head.size() - 1));
    std::string tok;
    while (is >> tok) {
        const auto caret = tok.find('^');
        if (caret == std::string::npos)
            throw std::invalid_argument("parse_cycle_type: expected m^c tokens");
        const std::int64_t m = std::stoll(tok.substr(0, caret));
        const std::int64_t c = std::stoll(tok.substr(caret + 1));
        type.counts[m] += c;
    }
    if (!type.valid()) throw std::invalid_argument("parse_cycle_type: counts do not sum to n");
    return type;
}

}  // namespace logperm
