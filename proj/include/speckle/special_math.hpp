#pragma once

#include <cstddef>
#include <functional>

#include "speckle/errors.hpp"

namespace speckle {

/// Result of an adaptive quadrature run.
struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

/// log Gamma(x) for x > 0. Lanczos approximation, ~14 significant digits.
double ln_gamma(double x);

/// log |Gamma(x)| for any non-pole x; sign receives the sign of Gamma(x).
double ln_abs_gamma(double x, int& sign);

/// Digamma psi0(x) for x > 0. Recurrence up to x >= 8, then asymptotic series.
double digamma(double x);

/// Harmonic number H_n = sum_{k=1..n} 1/k, H_0 = 0.
double harmonic(unsigned n);

/// Gauss hypergeometric 2F1(a,b;c;z) for z < 1.
/// Direct power series; z < 0 is mapped into (0,1) by the Pfaff transform and
/// z = 1 is summed by Gauss's theorem when convergent. Throws
/// unsupported_region when the series does not converge within the term cap.
double gauss_2f1(double a, double b, double c, double z);

/// Generalized hypergeometric 3F2(a1,a2,a3;b1,b2;z), |z| <= 1 series region.
double hyp_3f2(double a1, double a2, double a3, double b1, double b2, double z);

/// Regularized upper incomplete gamma Q(s,x) = Gamma(s,x)/Gamma(s), in [0,1].
double reg_upper_gamma(double s, double x);

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    std::size_t max_evals = 400000;
};

/// Adaptive Gauss-Kronrod 7-15 on a finite interval.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    QuadratureOptions opts = {});

/// Integral over (0, inf) via the substitution x = t/(1-t).
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double abs_tol = 1e-10,
                                         double rel_tol = 1e-8);

} // namespace speckle
