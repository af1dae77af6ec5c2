#include "logperm/asympt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "logperm/errors.hpp"

namespace logperm {

namespace {

// Jacobi eigenvalues of a small symmetric matrix (row-major, d x d).
std::vector<double> jacobi_eigenvalues(std::vector<double> A, int d) {
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) off += A[p * d + q] * A[p * d + q];
        if (off < 1e-28) break;
        for (int p = 0; p < d; ++p) {
            for (int q = p + 1; q < d; ++q) {
                const double apq = A[p * d + q];
                if (apq == 0.0) continue;
                const double tau = (A[q * d + q] - A[p * d + p]) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int i = 0; i < d; ++i) {
                    const double aip = A[i * d + p], aiq = A[i * d + q];
                    A[i * d + p] = c * aip - s * aiq;
                    A[i * d + q] = s * aip + c * aiq;
                }
                for (int i = 0; i < d; ++i) {
                    const double api = A[p * d + i], aqi = A[q * d + i];
                    A[p * d + i] = c * api - s * aqi;
                    A[q * d + i] = s * api + c * aqi;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) ev[static_cast<std::size_t>(i)] = A[i * d + i];
    return ev;
}

// Least squares via normal equations on column-scaled A; returns the
// solution and the condition number of the scaled design matrix.
struct LsqResult {
    std::vector<double> x;
    double condition;
    double residual_rms;
};

LsqResult solve_lsq(const std::vector<std::vector<double>>& A, const std::vector<double>& y) {
    const int rows = static_cast<int>(A.size());
    const int cols = static_cast<int>(A[0].size());
    std::vector<double> scale(static_cast<std::size_t>(cols), 0.0);
    for (int j = 0; j < cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < rows; ++i) s += A[i][j] * A[i][j];
        scale[j] = s > 0.0 ? std::sqrt(s) : 1.0;
    }
    std::vector<double> M(static_cast<std::size_t>(cols * cols), 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(cols), 0.0);
    for (int p = 0; p < cols; ++p) {
        for (int q = 0; q < cols; ++q) {
            double s = 0.0;
            for (int i = 0; i < rows; ++i) s += A[i][p] * A[i][q];
            M[p * cols + q] = s / (scale[p] * scale[q]);
        }
        double s = 0.0;
        for (int i = 0; i < rows; ++i) s += A[i][p] * y[i];
        rhs[p] = s / scale[p];
    }

    std::vector<double> ev = jacobi_eigenvalues(M, cols);
    double lmax = 0.0, lmin = std::numeric_limits<double>::infinity();
    for (double l : ev) {
        lmax = std::max(lmax, l);
        lmin = std::min(lmin, l);
    }
    LsqResult res;
    res.condition = (lmin > 0.0) ? std::sqrt(lmax / lmin)
                                 : std::numeric_limits<double>::infinity();

    // Cholesky solve of M z = rhs
    std::vector<double> L(static_cast<std::size_t>(cols * cols), 0.0);
    for (int i = 0; i < cols; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = M[i * cols + j];
            for (int t = 0; t < j; ++t) s -= L[i * cols + t] * L[j * cols + t];
            if (i == j) {
                if (s <= 0.0) throw ConvergenceError("estimate_cj: singular normal equations");
                L[i * cols + i] = std::sqrt(s);
            } else {
                L[i * cols + j] = s / L[j * cols + j];
            }
        }
    }
    std::vector<double> z(static_cast<std::size_t>(cols), 0.0);
    for (int i = 0; i < cols; ++i) {
        double s = rhs[static_cast<std::size_t>(i)];
        for (int t = 0; t < i; ++t) s -= L[i * cols + t] * z[static_cast<std::size_t>(t)];
        z[static_cast<std::size_t>(i)] = s / L[i * cols + i];
    }
    res.x.assign(static_cast<std::size_t>(cols), 0.0);
    for (int i = cols - 1; i >= 0; --i) {
        double s = z[static_cast<std::size_t>(i)];
        for (int t = i + 1; t < cols; ++t) s -= L[t * cols + i] * res.x[static_cast<std::size_t>(t)];
        res.x[static_cast<std::size_t>(i)] = s / L[i * cols + i];
    }
    for (int j = 0; j < cols; ++j) res.x[static_cast<std::size_t>(j)] /= scale[j];

    double rss = 0.0;
    for (int i = 0; i < rows; ++i) {
        double pred = 0.0;
        for (int j = 0; j < cols; ++j) pred += A[i][j] * res.x[static_cast<std::size_t>(j)];
        rss += (y[i] - pred) * (y[i] - pred);
    }
    res.residual_rms = std::sqrt(rss / rows);
    return res;
}

double scan_r_min(const SingularPolynomial& P) {
    // last point where P' or P'+P'' is nonpositive, refined by bisection
    auto ok = [&](double r) { return P.deriv(r) > 0.0 && P.deriv(r) + P.deriv2(r) > 0.0; };
    double last_bad = -1.0;
    for (double r = 0.0; r <= 400.0; r += 0.05)
        if (!ok(r)) last_bad = r;
    if (last_bad < 0.0) return 0.0;
    double lo = last_bad, hi = last_bad + 0.05;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

double SingularPolynomial::eval(double r) const {
    double lead = 1.0;
    for (int i = 0; i <= k; ++i) lead *= r;
    lead /= static_cast<double>(k + 1);
    double rest = 0.0;
    for (int j = k; j >= 0; --j) rest = rest * r + c[static_cast<std::size_t>(j)];
    return lead + rest;
}

double SingularPolynomial::deriv(double r) const {
    double lead = 1.0;
    for (int i = 0; i < k; ++i) lead *= r;
    double rest = 0.0;
    for (int j = k; j >= 1; --j)
        rest = rest * r + static_cast<double>(j) * c[static_cast<std::size_t>(j)];
    return lead + rest;
}

double SingularPolynomial::deriv2(double r) const {
    double lead = static_cast<double>(k);
    for (int i = 0; i < k - 1; ++i) lead *= r;
    double rest = 0.0;
    for (int j = k; j >= 2; --j)
        rest = rest * r + static_cast<double>(j) * static_cast<double>(j - 1) *
                              c[static_cast<std::size_t>(j)];
    return lead + rest;
}

SingularPolynomial make_singular_polynomial(int k, std::vector<double> c) {
    if (k < 1) throw std::invalid_argument("SingularPolynomial: k >= 1 required");
    if (static_cast<int>(c.size()) != k + 1)
        throw std::invalid_argument("SingularPolynomial: need coefficients c_0..c_k");
    SingularPolynomial P;
    P.k = k;
    P.c = std::move(c);
    P.r_min = scan_r_min(P);
    return P;
}

FitReport estimate_cj(const WeightModel& model, const std::vector<double>& w_grid,
                      std::int64_t n_trunc) {
    if (model.kind() != WeightKind::LogPower)
        throw std::invalid_argument("estimate_cj: k >= 1 log-power model required");
    const int k = model.k();
    if (static_cast<int>(w_grid.size()) < k + 2)
        throw std::invalid_argument("estimate_cj: at least k+2 grid points required");
    double w_min = std::numeric_limits<double>::infinity();
    for (double w : w_grid) {
        if (!(w > 0.0) || w > 0.05)
            throw std::invalid_argument("estimate_cj: grid points must lie in (0, 0.05]");
        w_min = std::min(w_min, w);
    }
    // truncation tail bound: theta_m/m decreasing beyond e^k, so the tail
    // is below (theta_N/N) e^{-(N+1)w} / (1 - e^{-w})
    {
        const double thN = model.theta(n_trunc);
        const double bound = thN / static_cast<double>(n_trunc) *
                             std::exp(-static_cast<double>(n_trunc + 1) * w_min) /
                             (1.0 - std::exp(-w_min));
        if (!(bound < 1e-12))
            throw ConvergenceError(
                "estimate_cj: series truncation too short for the smallest w; "
                "increase N_trunc or drop the smallest grid points");
    }

    const int rows = static_cast<int>(w_grid.size());
    const bool with_w2 = rows >= k + 4;
    const bool with_w1 = rows >= k + 3;
    const int cols = (k + 1) + (with_w1 ? 1 : 0) + (with_w2 ? 1 : 0);

    std::vector<std::vector<double>> A(static_cast<std::size_t>(rows),
                                       std::vector<double>(static_cast<std::size_t>(cols), 0.0));
    std::vector<double> y(static_cast<std::size_t>(rows), 0.0);
    for (int i = 0; i < rows; ++i) {
        const double w = w_grid[static_cast<std::size_t>(i)];
        const double L = -std::log(w);
        double lead = 1.0;
        for (int t = 0; t <= k; ++t) lead *= L;
        lead /= static_cast<double>(k + 1);
        y[static_cast<std::size_t>(i)] = model.g_partial(std::exp(-w), n_trunc) - lead;
        double pw = 1.0;
        for (int j = 0; j <= k; ++j) {
            A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = pw;
            pw *= L;
        }
        int col = k + 1;
        if (with_w1) A[static_cast<std::size_t>(i)][static_cast<std::size_t>(col++)] = w;
        if (with_w2) A[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] = w * w;
    }

    LsqResult lsq = solve_lsq(A, y);
    if (lsq.condition > 1e10)
        throw ConvergenceError(
            "estimate_cj: fit condition number above 1e10; widen the w grid");

    FitReport report;
    report.P = make_singular_polynomial(
        k, std::vector<double>(lsq.x.begin(), lsq.x.begin() + k + 1));
    report.residual_rms = lsq.residual_rms;
    report.condition = lsq.condition;
    return report;
}

FitReport estimate_cj(const WeightModel& model) {
    std::vector<double> grid(12);
    for (int i = 0; i < 12; ++i)
        grid[static_cast<std::size_t>(i)] =
            std::pow(10.0, -4.0 + 2.0 * static_cast<double>(i) / 11.0);
    const double w_min = grid[0];
    const auto n_trunc = static_cast<std::int64_t>(std::ceil(50.0 / w_min));
    return estimate_cj(model, grid, n_trunc);
}

SaddlePoint solve_saddle(const SingularPolynomial& P, double n, double v) {
    if (!(n > 0.0)) throw std::invalid_argument("solve_saddle: n > 0 required");
    if (!(v > 0.0)) throw std::invalid_argument("solve_saddle: v > 0 required");

    // residual in log form: F(r) = r + log(v P'(r)) - log(n), increasing
    // beyond r_min
    const double r_lo = P.r_min + 1e-9;
    auto F = [&](double r) { return r + std::log(v * P.deriv(r)) - std::log(n); };
    if (!(F(r_lo) < 0.0))
        throw ConvergenceError("solve_saddle: no bracket, n too small for the asymptotic regime");

    const double lnv = std::log(n / v);
    double r0 = (lnv > 1.0) ? lnv - static_cast<double>(P.k) * std::log(lnv) : r_lo + 1.0;
    r0 = std::max(r0, r_lo + 1e-6);

    double hi = std::max(r0, r_lo + 1.0);
    double step = 1.0;
    while (F(hi) < 0.0) {
        hi += step;
        step *= 2.0;
        if (hi > 1e6) throw ConvergenceError("solve_saddle: no upper bracket found");
    }
    double lo = r_lo;

    double r = std::min(std::max(r0, lo), hi);
    for (int it = 0; it < 200; ++it) {
        const double f = F(r);
        if (std::fabs(f) <= 1e-13) break;
        if (f > 0.0)
            hi = r;
        else
            lo = r;
        const double fp = 1.0 + P.deriv2(r) / P.deriv(r);
        double next = r - f / fp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        r = next;
        if (it == 199)
            throw ConvergenceError("solve_saddle: residual target not reached");
    }

    SaddlePoint sp;
    sp.r = r;
    sp.n = n;
    sp.v = v;
    sp.P_r = P.eval(r);
    sp.dP_r = P.deriv(r);
    sp.ddP_r = P.deriv2(r);
    sp.n_exp = n * std::exp(-r);
    if (std::fabs(v * sp.dP_r * std::exp(r) / n - 1.0) > 1e-10)
        throw ConvergenceError("solve_saddle: residual invariant violated");
    return sp;
}

double hn_asymptotic_log(const SingularPolynomial& P, double n, double v) {
    const SaddlePoint sp = solve_saddle(P, n, v);
    return v * sp.P_r + sp.n_exp - sp.r -
           0.5 * std::log(2.0 * std::numbers::pi * (v * sp.ddP_r + sp.n_exp));
}

double SignedLog::value() const { return sign == 0 ? 0.0 : sign * std::exp(logabs); }

SignedLog coeff_asympt_regular_prefactor(const SingularPolynomial& P, double n, double v,
                                         double f1) {
    if (f1 == 0.0)
        throw std::domain_error("coeff_asympt_regular_prefactor: f(1) != 0 required");
    SignedLog out;
    out.sign = f1 > 0.0 ? 1 : -1;
    out.logabs = std::log(std::fabs(f1)) + hn_asymptotic_log(P, n, v);
    return out;
}

SignedLog coeff_asympt_singular_prefactor(const SingularPolynomial& P, double n, double c_f,
                                          int j, int kf) {
    if (j < 0) throw std::invalid_argument("coeff_asympt_singular_prefactor: j >= 0 required");
    SignedLog out;
    if (c_f == 0.0) return out;
    const SaddlePoint sp = solve_saddle(P, n, 1.0);
    out.sign = c_f > 0.0 ? 1 : -1;
    out.logabs = std::log(std::fabs(c_f)) + static_cast<double>(kf) * std::log(sp.r) +
                 static_cast<double>(j) * sp.r + sp.P_r + sp.n_exp - sp.r -
                 0.5 * std::log(2.0 * std::numbers::pi * (sp.ddP_r + sp.n_exp));
    return out;
}

}  // namespace logperm
