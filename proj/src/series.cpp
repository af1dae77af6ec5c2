#include "logperm/series.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "logperm/kernels.hpp"

namespace logperm {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.order() != b.order())
        throw std::invalid_argument("series_mul: truncation orders differ");
    TruncatedSeries out(a.order());
    kernels::conv(a.c.data(), b.c.data(), out.c.data(), a.c.size());
    return out;
}

TruncatedSeries series_exp(const TruncatedSeries& a) {
    if (a.c[0] != 0.0) throw std::domain_error("series_exp: constant term must be 0");
    const std::size_t N = a.order();
    std::vector<double> wa(N + 1, 0.0);
    for (std::size_t m = 1; m <= N; ++m) wa[m] = static_cast<double>(m) * a.c[m];

    TruncatedSeries e(N, 1.0);
    for (std::size_t n = 1; n <= N; ++n)
        e.c[n] = kernels::dot_rev(wa.data(), e.c.data(), n) / static_cast<double>(n);
    return e;
}

TruncatedSeries series_log(const TruncatedSeries& a) {
    if (a.c[0] != 1.0) throw std::domain_error("series_log: constant term must be 1");
    const std::size_t N = a.order();
    TruncatedSeries l(N, 0.0);
    // n a_n = sum_{m=1}^{n} m l_m a_{n-m}; solve for l_n term by term
    std::vector<double> wl(N + 1, 0.0);
    for (std::size_t n = 1; n <= N; ++n) {
        double s = 0.0;
        for (std::size_t m = 1; m < n; ++m) s += wl[m] * a.c[n - m];
        l.c[n] = a.c[n] - s / static_cast<double>(n);
        wl[n] = static_cast<double>(n) * l.c[n];
    }
    return l;
}

LogSpaceSeries to_logspace(const TruncatedSeries& a) {
    LogSpaceSeries out;
    out.sign.resize(a.c.size());
    out.logabs.resize(a.c.size());
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        const double x = a.c[i];
        if (x == 0.0) {
            out.sign[i] = 0;
            out.logabs[i] = kNegInf;
        } else {
            out.sign[i] = x > 0.0 ? 1 : -1;
            out.logabs[i] = std::log(std::fabs(x));
        }
    }
    return out;
}

TruncatedSeries from_logspace(const LogSpaceSeries& a) {
    TruncatedSeries out(a.order());
    for (std::size_t i = 0; i < a.sign.size(); ++i)
        out.c[i] = a.sign[i] == 0 ? 0.0 : a.sign[i] * std::exp(a.logabs[i]);
    return out;
}

LogSpaceSeries series_exp_log(const LogSpaceSeries& a) {
    if (a.sign[0] != 0) throw std::domain_error("series_exp_log: constant term must be 0");
    const std::size_t N = a.order();
    LogSpaceSeries e;
    e.sign.assign(N + 1, 0);
    e.logabs.assign(N + 1, kNegInf);
    e.sign[0] = 1;
    e.logabs[0] = 0.0;

    for (std::size_t n = 1; n <= N; ++n) {
        // online signed log-sum-exp of the terms m * a_m * e_{n-m}
        double max_l = kNegInf;
        double acc = 0.0;
        for (std::size_t m = 1; m <= n; ++m) {
            const int s = a.sign[m] * e.sign[n - m];
            if (s == 0) continue;
            const double l =
                std::log(static_cast<double>(m)) + a.logabs[m] + e.logabs[n - m];
            if (l > max_l) {
                acc = acc * std::exp(max_l - l) + s;
                max_l = l;
            } else {
                acc += s * std::exp(l - max_l);
            }
        }
        if (acc == 0.0 || max_l == kNegInf) {
            e.sign[n] = 0;
            e.logabs[n] = kNegInf;
        } else {
            e.sign[n] = acc > 0.0 ? 1 : -1;
            e.logabs[n] = max_l + std::log(std::fabs(acc)) - std::log(static_cast<double>(n));
        }
    }
    return e;
}

}  // namespace logperm
