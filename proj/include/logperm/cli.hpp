#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace logperm {

inline constexpr const char* kVersion = "logperm 0.1.0";

/// One experiment invocation. Field defaults double as flag defaults.
struct RunConfig {
    std::string command;  // hn, saddle, compare, dist, tvd, sample, shape, k0n, l1
    int k = 1;
    std::vector<double> lower_coeffs;
    std::int64_t n = 0;
    std::int64_t b = 0;
    double v = 1.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 1;
    std::string grid;    // comma-separated reals (shape)
    std::string n_list;  // comma-separated sizes (compare)
    std::string dist;    // l1 | k0n | joint
    std::string format = "csv";  // csv | json
    std::string out;     // empty -> stdout
    int workers = 0;     // 0 -> library default; wall time only

    std::string to_json() const;
    static RunConfig from_json(const std::string& text);
};

/// Execute one configured run.
/// Exit codes: 0 ok, 2 usage error, 3 domain error, 4 numerical failure.
int run(const RunConfig& config);
int run(const RunConfig& config, std::ostream& err);

/// Render with 12 significant digits (the one formatting used everywhere).
std::string format_g12(double x);

}  // namespace logperm
