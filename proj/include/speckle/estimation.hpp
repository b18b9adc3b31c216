#pragma once

#include <utility>

#include "speckle/g0_model.hpp"

namespace speckle {

/// Outcome of a maximum-likelihood fit of (alpha, gamma) with looks known.
struct FitResult {
    G0Params params;
    double log_likelihood = 0.0;
    bool converged = false;
    int iterations = 0;
    /// Euclidean norm of the scaled score (gradient in the unconstrained
    /// coordinates, per observation) at the returned iterate.
    double score_norm_at_opt = 0.0;
};

/// Total log-likelihood sum_i log f(z_i; alpha, gamma, looks).
double log_likelihood(double alpha, double gamma, const Sample& s);

/// The estimating system: per-observation derivatives of the log-likelihood
/// with respect to alpha and gamma. Both components vanish at the ML solution.
std::pair<double, double> score(double alpha, double gamma, const Sample& s);

/// BFGS fit in the unconstrained coordinates alpha = -exp(a), gamma = exp(g),
/// analytic gradient, moment-matched start with one retry.
FitResult fit_ml(const Sample& s);

/// Censoring rule for Monte Carlo replications: accept iff
/// 10 * true_alpha <= alpha_hat <= true_alpha / 20.
bool censor_accept(const FitResult& fit, double true_alpha);

} // namespace speckle
