#pragma once

#include <cstdint>
#include <vector>

#include "logperm/weights.hpp"

namespace logperm {

/// P(r) = r^{k+1}/(k+1) + sum_{j=0}^{k} c[j] r^j.
/// r_min bounds the region where both P' and P'+P'' are positive, i.e.
/// where r -> P'(r) e^r is positive and increasing.
struct SingularPolynomial {
    int k = 1;
    std::vector<double> c;
    double r_min = 0.0;

    double eval(double r) const;
    double deriv(double r) const;
    double deriv2(double r) const;
};

SingularPolynomial make_singular_polynomial(int k, std::vector<double> c);

struct FitReport {
    SingularPolynomial P;
    double residual_rms = 0.0;  // of the least-squares fit, in g units
    double condition = 0.0;     // of the column-scaled design matrix
};

/// Recover the c_j from samples of g(e^{-w}): subtract the fixed leading
/// term (-log w)^{k+1}/(k+1) and fit the remainder against the basis
/// {(-log w)^j}_{j=0..k}, with w and w^2 columns absorbing the analytic
/// remainder of the singular expansion. LogPower models only.
FitReport estimate_cj(const WeightModel& model, const std::vector<double>& w_grid,
                      std::int64_t n_trunc);
FitReport estimate_cj(const WeightModel& model);

/// Root of v P'(r) = n e^{-r} together with the quantities the
/// coefficient formulas need. Residual invariant:
/// |v P'(r) e^r / n - 1| <= 1e-10.
struct SaddlePoint {
    double r = 0.0;
    double n = 0.0;
    double v = 0.0;
    double P_r = 0.0;
    double dP_r = 0.0;
    double ddP_r = 0.0;
    double n_exp = 0.0;  // n e^{-r}
};

/// Newton iteration started from log(n/v) - k log log(n/v), safeguarded by
/// bisection on [r_min, inf) where the map is increasing. Throws
/// ConvergenceError when no bracket exists (n too small).
SaddlePoint solve_saddle(const SingularPolynomial& P, double n, double v);

/// log of  exp(vP(r) + n e^{-r}) / (e^r sqrt(2 pi (v P''(r) + n e^{-r}))).
double hn_asymptotic_log(const SingularPolynomial& P, double n, double v);

struct SignedLog {
    int sign = 0;
    double logabs = 0.0;

    double value() const;
};

/// Coefficient asymptotics with an analytic prefactor f, f(1) = f1 != 0:
/// f1 times the plain coefficient formula.
SignedLog coeff_asympt_regular_prefactor(const SingularPolynomial& P, double n, double v,
                                         double f1);

/// Coefficient asymptotics with a singular prefactor behaving like
/// c_f (-log w)^{kf} / w^j near the singularity; evaluated at the v = 1
/// saddle: c_f r^{kf} e^{j r} times the plain coefficient formula.
SignedLog coeff_asympt_singular_prefactor(const SingularPolynomial& P, double n, double c_f,
                                          int j, int kf);

}  // namespace logperm
