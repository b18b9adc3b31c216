#include "speckle/testing.hpp"

#include <cmath>
#include <stdexcept>

#include "speckle/special_math.hpp"

namespace speckle {

double v_constant(const DistanceSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case DistanceKind::kullback_leibler: return 1.0;
        case DistanceKind::renyi: return 1.0 / spec.renyi_beta;
        case DistanceKind::hellinger: return 4.0;
        case DistanceKind::bhattacharyya: return 4.0;
        case DistanceKind::jensen_shannon: return 4.0;
        case DistanceKind::arithmetic_geometric: return 4.0;
        case DistanceKind::triangular: return 1.0;
        case DistanceKind::harmonic_mean: return 2.0;
    }
    throw std::logic_error("v_constant: unreachable");
}

double statistic(const DistanceSpec& spec, const FitResult& fit1, std::size_t m,
                 const FitResult& fit2, std::size_t n, EvalMethod method) {
    if (m < 2 || n < 2)
        throw std::domain_error("statistic: requires sample sizes >= 2");
    const double d = distance(spec, fit1.params, fit2.params, method);
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    return 2.0 * md * nd * v_constant(spec) / (md + nd) * d;
}

double p_value(double s, int df) {
    if (!(s >= 0.0)) throw std::domain_error("p_value: requires s >= 0");
    if (df < 1) throw std::domain_error("p_value: requires df >= 1");
    return reg_upper_gamma(0.5 * df, 0.5 * s);
}

TestOutcome test_samples(const DistanceSpec& spec, const Sample& s1, const Sample& s2,
                         double level, EvalMethod method) {
    spec.validate();
    s1.validate();
    s2.validate();
    if (s1.size() < 2 || s2.size() < 2)
        throw std::domain_error("test_samples: requires samples of size >= 2");
    if (s1.looks != s2.looks)
        throw std::domain_error("test_samples: samples must share the looks value");
    if (!(level > 0.0 && level < 1.0))
        throw std::domain_error("test_samples: level must lie in (0,1)");

    TestOutcome out;
    out.spec = spec;
    out.level = level;
    out.m = s1.size();
    out.n = s2.size();
    out.df = 2;
    const FitResult f1 = fit_ml(s1);
    const FitResult f2 = fit_ml(s2);
    out.statistic = statistic(spec, f1, out.m, f2, out.n, method);
    out.p_value = p_value(out.statistic, out.df);
    out.reject = out.p_value <= level;
    return out;
}

} // namespace speckle
