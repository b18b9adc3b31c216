#pragma once

#include <cstddef>

#include "speckle/distances.hpp"
#include "speckle/estimation.hpp"
#include "speckle/g0_model.hpp"

namespace speckle {

/// Decision record of one two-sample contrast test.
struct TestOutcome {
    double statistic = 0.0;  ///< S = 2mnv/(m+n) * d
    int df = 2;              ///< estimated parameters under the null (alpha, gamma)
    double p_value = 1.0;
    bool reject = false;
    double level = 0.05;
    DistanceSpec spec;
    std::size_t m = 0;
    std::size_t n = 0;
};

/// Scale constant v = 1/(h'(0) phi''(1)) of the distance kind.
double v_constant(const DistanceSpec& spec);

/// Test statistic from two fitted models and their sample sizes.
double statistic(const DistanceSpec& spec, const FitResult& fit1, std::size_t m,
                 const FitResult& fit2, std::size_t n,
                 EvalMethod method = EvalMethod::auto_select);

/// Survival function of chi-square with df degrees of freedom at s.
double p_value(double s, int df);

/// Fits both samples by ML and decides the null "same law" at the level.
/// Ties p == level count as rejection. Samples must share the looks value.
TestOutcome test_samples(const DistanceSpec& spec, const Sample& s1, const Sample& s2,
                         double level = 0.05, EvalMethod method = EvalMethod::auto_select);

} // namespace speckle
