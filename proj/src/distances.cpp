#include "speckle/distances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "speckle/errors.hpp"
#include "speckle/special_math.hpp"

namespace speckle {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPoleTol = 1e-6;

double logaddexp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

double clamp_nonneg(double d) { return d > 0.0 ? d : 0.0; }

// ---------------------------------------------------------------------------
// quadrature path
// ---------------------------------------------------------------------------

double bhattacharyya_coefficient(const G0LogPdf& lp1, const G0LogPdf& lp2) {
    // rho enters distances as 1 - rho, so it needs absolute accuracy well
    // below the default relative target
    auto rho = integrate_semi_infinite(
        [&](double x) { return std::exp(0.5 * (lp1(x) + lp2(x))); }, 1e-12, 1e-10);
    return std::min(1.0, rho.value);
}

double quad_distance(const DistanceSpec& spec, const G0Params& p1, const G0Params& p2) {
    const G0LogPdf lp1(p1), lp2(p2);
    switch (spec.kind) {
        case DistanceKind::kullback_leibler: {
            auto r = integrate_semi_infinite([&](double x) {
                const double l1 = lp1(x), l2 = lp2(x);
                return (std::exp(l1) - std::exp(l2)) * (l1 - l2);
            });
            return clamp_nonneg(0.5 * r.value);
        }
        case DistanceKind::renyi: {
            const double beta = spec.renyi_beta;
            auto a = integrate_semi_infinite([&](double x) {
                return std::exp(beta * lp1(x) + (1.0 - beta) * lp2(x));
            });
            auto b = integrate_semi_infinite([&](double x) {
                return std::exp((1.0 - beta) * lp1(x) + beta * lp2(x));
            });
            const double mean = std::min(1.0, 0.5 * (a.value + b.value));
            return clamp_nonneg(std::log(mean) / (beta - 1.0));
        }
        case DistanceKind::hellinger:
            return clamp_nonneg(1.0 - bhattacharyya_coefficient(lp1, lp2));
        case DistanceKind::bhattacharyya:
            return clamp_nonneg(-std::log(bhattacharyya_coefficient(lp1, lp2)));
        case DistanceKind::jensen_shannon: {
            auto r = integrate_semi_infinite([&](double x) {
                const double l1 = lp1(x), l2 = lp2(x);
                const double ls = logaddexp(l1, l2);
                const double log2 = 0.6931471805599453094;
                return std::exp(l1) * (log2 + l1 - ls) + std::exp(l2) * (log2 + l2 - ls);
            });
            return clamp_nonneg(0.5 * r.value);
        }
        case DistanceKind::arithmetic_geometric: {
            auto r = integrate_semi_infinite([&](double x) {
                const double l1 = lp1(x), l2 = lp2(x);
                const double ls = logaddexp(l1, l2);
                const double log2 = 0.6931471805599453094;
                return (std::exp(l1) + std::exp(l2)) * (ls - log2 - 0.5 * (l1 + l2));
            });
            return clamp_nonneg(0.5 * r.value);
        }
        case DistanceKind::triangular: {
            auto r = integrate_semi_infinite([&](double x) {
                const double f1 = std::exp(lp1(x)), f2 = std::exp(lp2(x));
                const double s = f1 + f2;
                if (s <= 0.0) return 0.0;
                const double diff = f1 - f2;
                return diff * diff / s;
            });
            return clamp_nonneg(r.value);
        }
        case DistanceKind::harmonic_mean: {
            const double dt = quad_distance(DistanceSpec::of(DistanceKind::triangular), p1, p2);
            return clamp_nonneg(-std::log1p(-std::min(dt, 2.0 - 1e-15) / 2.0));
        }
    }
    throw std::logic_error("quad_distance: unreachable");
}

// ---------------------------------------------------------------------------
// closed-form path
// ---------------------------------------------------------------------------

struct SignedLog {
    double log_abs;
    int sign;
};

SignedLog signed_log_sum(const SignedLog& a, const SignedLog& b) {
    if (b.sign == 0) return a;
    if (a.sign == 0) return b;
    const SignedLog& big = a.log_abs >= b.log_abs ? a : b;
    const SignedLog& small = a.log_abs >= b.log_abs ? b : a;
    const double r = std::exp(small.log_abs - big.log_abs);
    const double combined = a.sign == b.sign ? 1.0 + r : 1.0 - r;
    if (combined <= 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    return {big.log_abs + std::log(combined), big.sign};
}

bool near_integer(double x, double tol) { return std::abs(x - std::round(x)) <= tol; }

// int_0^inf x^a (b1+n1 x)^{c1} (b2+n2 x)^{c2} dx via the csc/2F1 connection
// formula (sign, log magnitude). Refuses near its csc pole or when the series
// becomes numerically unusable; callers fall back to quadrature.
std::optional<SignedLog> two_factor_integral(double a, double c1, double b1, double n1,
                                             double c2, double b2, double n2) {
    double w = (b2 * n1) / (b1 * n2);
    if (w > 1.0) {
        std::swap(c1, c2);
        std::swap(b1, b2);
        std::swap(n1, n2);
        w = 1.0 / w;
    }
    if (near_integer(c2 + a, kPoleTol)) return std::nullopt;

    const double sin_arg = std::sin((c2 + a) * kPi);
    double f_a, f_b;
    try {
        f_a = gauss_2f1(-c2, -1.0 - c1 - c2 - a, -c2 - a, w);
        f_b = gauss_2f1(-c1, 1.0 + a, 2.0 + c2 + a, w);
    } catch (const unsupported_region&) {
        return std::nullopt;
    } catch (const std::domain_error&) {
        return std::nullopt;
    }

    int sg_num = 1, sg_d1 = 1, sg_d2 = 1, sg_d3 = 1, sg_d4 = 1;
    SignedLog t1{0.0, 0};
    try {
        const double lg_num = ln_abs_gamma(-1.0 - c1 - c2 - a, sg_num);
        const double lg_d1 = ln_abs_gamma(-c1, sg_d1);
        const double lg_d2 = ln_abs_gamma(-c2 - a, sg_d2);
        t1.log_abs = (-1.0 - c2 - a) * std::log(n1 / b1) + c2 * std::log(n2 / b2)
                     + lg_num - lg_d1 - lg_d2 + std::log(std::abs(f_a));
        t1.sign = -sg_num * sg_d1 * sg_d2 * (f_a >= 0.0 ? 1 : -1);
        if (f_a == 0.0) t1.sign = 0;
    } catch (const std::domain_error&) {
        t1.sign = 0; // denominator gamma pole: the term vanishes
    }
    SignedLog t2{0.0, 0};
    try {
        int sg_1pa = 1;
        const double lg_1pa = ln_abs_gamma(1.0 + a, sg_1pa);
        const double lg_d3 = ln_abs_gamma(-c2, sg_d3);
        const double lg_d4 = ln_abs_gamma(2.0 + c2 + a, sg_d4);
        t2.log_abs = (-1.0 - a) * std::log(n2 / b2) + lg_1pa - lg_d3 - lg_d4
                     + std::log(std::abs(f_b));
        t2.sign = sg_1pa * sg_d3 * sg_d4 * (f_b >= 0.0 ? 1 : -1);
        if (f_b == 0.0) t2.sign = 0;
    } catch (const std::domain_error&) {
        t2.sign = 0;
    }

    // cancellation guard: refuse when the two terms nearly annihilate
    if (t1.sign != 0 && t2.sign != 0 && t1.sign != t2.sign) {
        const double gap = std::abs(t1.log_abs - t2.log_abs);
        if (gap < -std::log(1e-5)) {
            const SignedLog sum = signed_log_sum(t1, t2);
            if (sum.sign == 0 ||
                sum.log_abs < std::max(t1.log_abs, t2.log_abs) + std::log(1e-5))
                return std::nullopt;
        }
    }

    SignedLog sum = signed_log_sum(t1, t2);
    if (sum.sign == 0) return std::nullopt;
    const double log_pref = c1 * std::log(b1) + c2 * std::log(b2)
                            + std::log(kPi / std::abs(sin_arg));
    const int sign_pref = sin_arg > 0.0 ? 1 : -1;
    return SignedLog{sum.log_abs + log_pref, sum.sign * sign_pref};
}

// log of the Bhattacharyya-type coefficient integral under the constants' pair
std::optional<double> closed_log_coefficient(const ClosedFormConstants& k,
                                             double exp_a, double cc1, double cc2,
                                             double log_norm, double L1, double L2) {
    auto integral = two_factor_integral(exp_a, cc1, k.b1, L1, cc2, k.b2, L2);
    if (!integral) return std::nullopt;
    if (integral->sign <= 0) return std::nullopt;
    return log_norm + integral->log_abs;
}

// E_i-side pieces of the explicit Kullback-Leibler expression.
// T(a,c,z) = sum_{k>=1} (1+a)_k z^k / k! * sum_{j<k} 1/(c+j)
std::optional<double> kl_log_series(double a, double c, double z) {
    if (!(std::abs(z) < 1.0 - 1e-9)) return std::nullopt;
    double total = 0.0;
    double term = 1.0;
    double hk = 0.0;
    for (int k = 1; k <= 10000; ++k) {
        term *= (a + k) * z / k;
        hk += 1.0 / (c + k - 1.0);
        total += term * hk;
        if (std::abs(term) * (std::abs(hk) + 1.0) < 1e-15 * (1.0 + std::abs(total)) && k > 8)
            return total;
    }
    return std::nullopt;
}

std::optional<double> closed_kl(const ClosedFormConstants& k, double L1, double L2) {
    const double a[2] = {k.a1, k.a2};
    const double b[2] = {k.b1, k.b2};
    const double c[2] = {k.c1, k.c2};
    const double n[2] = {L1, L2};

    double e_logx[2], e_log_own[2], e_log_cross[2];
    for (int i = 0; i < 2; ++i) {
        const double psi_tail = digamma(c[i] - 1.0 - a[i]);
        e_logx[i] = digamma(1.0 + a[i]) - psi_tail - std::log(n[i] / b[i]);
        e_log_own[i] = std::log(b[i]) + digamma(c[i]) - psi_tail;
        const int j = 1 - i;
        const double z = 1.0 - (b[j] * n[i]) / (n[j] * b[i]);
        auto tail = kl_log_series(a[i], c[i], z);
        if (!tail) return std::nullopt;
        e_log_cross[i] = std::log(b[j]) + digamma(c[i]) - psi_tail
                         + std::pow(1.0 - z, 1.0 + a[i]) * (*tail);
    }
    // log f1 - log f2 = -d + (a1-a2) log x - c1 log(b1+n1 x) + c2 log(b2+n2 x)
    const double e1 = (k.a1 - k.a2) * e_logx[0] - k.c1 * e_log_own[0] + k.c2 * e_log_cross[0];
    const double e2 = (k.a1 - k.a2) * e_logx[1] - k.c1 * e_log_cross[1] + k.c2 * e_log_own[1];
    return clamp_nonneg(0.5 * (e1 - e2));
}

std::optional<double> try_closed_form(const DistanceSpec& spec, const G0Params& p1,
                                      const G0Params& p2) {
    const ClosedFormConstants k = ClosedFormConstants::make(p1, p2, spec.renyi_beta);
    switch (spec.kind) {
        case DistanceKind::hellinger:
        case DistanceKind::bhattacharyya: {
            const double exp_a = 0.5 * (k.a1 + k.a2);
            auto log_rho = closed_log_coefficient(k, exp_a, k.f1, k.f2,
                                                  0.5 * (k.log_k1 + k.log_k2),
                                                  p1.looks, p2.looks);
            if (!log_rho) return std::nullopt;
            const double lr = std::min(0.0, *log_rho);
            if (spec.kind == DistanceKind::bhattacharyya) return clamp_nonneg(-lr);
            return clamp_nonneg(-std::expm1(lr));
        }
        case DistanceKind::renyi: {
            auto log_b = closed_log_coefficient(k, k.g1, k.e1, k.e2, k.log_h1,
                                                p1.looks, p2.looks);
            auto log_a = closed_log_coefficient(k, k.g2, k.m1, k.m2, k.log_h2,
                                                p1.looks, p2.looks);
            if (!log_a || !log_b) return std::nullopt;
            const double mean = std::min(1.0, 0.5 * (std::exp(*log_a) + std::exp(*log_b)));
            return clamp_nonneg(std::log(mean) / (spec.renyi_beta - 1.0));
        }
        case DistanceKind::kullback_leibler:
            return closed_kl(k, p1.looks, p2.looks);
        default:
            return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Table-I (h,phi) divergence, literal Eq.-style integrand
// ---------------------------------------------------------------------------

double table1_phi_times_f2(const DistanceSpec& spec, double l1, double l2) {
    const double f1 = std::exp(l1);
    const double f2 = std::exp(l2);
    const double log2 = 0.6931471805599453094;
    switch (spec.kind) {
        case DistanceKind::kullback_leibler:
            // phi(x) = x log x
            return f1 * (l1 - l2);
        case DistanceKind::renyi: {
            const double beta = spec.renyi_beta;
            const double mixed = std::exp(beta * l1 + (1.0 - beta) * l2);
            return (mixed - beta * (f1 - f2) - f2) / (beta - 1.0);
        }
        case DistanceKind::hellinger: {
            const double root = std::exp(0.5 * l1) - std::exp(0.5 * l2);
            return root * root;
        }
        case DistanceKind::bhattacharyya:
            return -std::exp(0.5 * (l1 + l2)) + 0.5 * (f1 + f2);
        case DistanceKind::jensen_shannon:
            return f1 * (log2 + l1 - logaddexp(l1, l2));
        case DistanceKind::arithmetic_geometric:
            return 0.5 * (f1 + f2) * (logaddexp(l1, l2) - log2 - l1);
        case DistanceKind::triangular:
        case DistanceKind::harmonic_mean: {
            const double s = f1 + f2;
            if (s <= 0.0) return 0.0;
            const double diff = f1 - f2;
            return diff * diff / s;
        }
    }
    throw std::logic_error("table1_phi_times_f2: unreachable");
}

double table1_h(const DistanceSpec& spec, double y) {
    switch (spec.kind) {
        case DistanceKind::kullback_leibler:
        case DistanceKind::jensen_shannon:
        case DistanceKind::arithmetic_geometric:
        case DistanceKind::triangular:
            return y;
        case DistanceKind::renyi: {
            const double beta = spec.renyi_beta;
            const double arg = std::max((beta - 1.0) * y + 1.0, 1e-300);
            return std::log(arg) / (beta - 1.0);
        }
        case DistanceKind::hellinger:
            return 0.5 * y;
        case DistanceKind::bhattacharyya:
            return -std::log1p(-std::min(y, 1.0 - 1e-15));
        case DistanceKind::harmonic_mean:
            return -std::log1p(-0.5 * std::min(y, 2.0 - 1e-15));
    }
    throw std::logic_error("table1_h: unreachable");
}

} // namespace

void DistanceSpec::validate() const {
    if (kind == DistanceKind::renyi && !(renyi_beta > 0.0 && renyi_beta < 1.0))
        throw std::domain_error("DistanceSpec: Renyi order beta must lie in (0,1)");
}

const char* kind_name(DistanceKind k) {
    switch (k) {
        case DistanceKind::kullback_leibler: return "kullback_leibler";
        case DistanceKind::renyi: return "renyi";
        case DistanceKind::hellinger: return "hellinger";
        case DistanceKind::bhattacharyya: return "bhattacharyya";
        case DistanceKind::jensen_shannon: return "jensen_shannon";
        case DistanceKind::arithmetic_geometric: return "arithmetic_geometric";
        case DistanceKind::triangular: return "triangular";
        case DistanceKind::harmonic_mean: return "harmonic_mean";
    }
    return "unknown";
}

std::vector<DistanceSpec> all_distances(double renyi_beta) {
    return {
        DistanceSpec::of(DistanceKind::kullback_leibler),
        DistanceSpec::renyi(renyi_beta),
        DistanceSpec::of(DistanceKind::hellinger),
        DistanceSpec::of(DistanceKind::bhattacharyya),
        DistanceSpec::of(DistanceKind::jensen_shannon),
        DistanceSpec::of(DistanceKind::arithmetic_geometric),
        DistanceSpec::of(DistanceKind::triangular),
        DistanceSpec::of(DistanceKind::harmonic_mean),
    };
}

ClosedFormConstants ClosedFormConstants::make(const G0Params& p1, const G0Params& p2,
                                              double renyi_beta) {
    p1.validate();
    p2.validate();
    ClosedFormConstants k{};
    const double beta = renyi_beta;
    k.log_k1 = p1.looks * std::log(p1.looks) + ln_gamma(p1.looks - p1.alpha)
               - p1.alpha * std::log(p1.gamma / 2.0) - ln_gamma(-p1.alpha)
               - ln_gamma(p1.looks);
    k.log_k2 = p2.looks * std::log(p2.looks) + ln_gamma(p2.looks - p2.alpha)
               - p2.alpha * std::log(p2.gamma / 2.0) - ln_gamma(-p2.alpha)
               - ln_gamma(p2.looks);
    k.k1 = std::exp(k.log_k1);
    k.k2 = std::exp(k.log_k2);
    k.a1 = p1.looks - 1.0;
    k.a2 = p2.looks - 1.0;
    k.b1 = p1.gamma / 2.0;
    k.b2 = p2.gamma / 2.0;
    k.c1 = std::abs(p1.alpha) + p1.looks;
    k.c2 = std::abs(p2.alpha) + p2.looks;
    k.d = k.log_k2 - k.log_k1;
    k.log_h1 = beta * k.log_k2 + (1.0 - beta) * k.log_k1;
    k.log_h2 = beta * k.log_k1 + (1.0 - beta) * k.log_k2;
    k.g1 = k.a1 * (1.0 - beta) + k.a2 * beta;
    k.g2 = k.a1 * beta + k.a2 * (1.0 - beta);
    k.e1 = (p1.alpha - p1.looks) * (1.0 - beta);
    k.e2 = (p2.alpha - p2.looks) * beta;
    k.m1 = (p1.alpha - p1.looks) * beta;
    k.m2 = (p2.alpha - p2.looks) * (1.0 - beta);
    k.f1 = 0.5 * (p1.alpha - p1.looks);
    k.f2 = 0.5 * (p2.alpha - p2.looks);
    return k;
}

double divergence_hphi(const DistanceSpec& spec, const G0Params& p1, const G0Params& p2) {
    spec.validate();
    const G0LogPdf lp1(p1), lp2(p2);
    auto y = integrate_semi_infinite(
        [&](double x) { return table1_phi_times_f2(spec, lp1(x), lp2(x)); });
    return clamp_nonneg(table1_h(spec, clamp_nonneg(y.value)));
}

double distance(const DistanceSpec& spec, const G0Params& p1, const G0Params& p2,
                EvalMethod method) {
    spec.validate();
    p1.validate();
    p2.validate();
    switch (method) {
        case EvalMethod::quadrature:
            return quad_distance(spec, p1, p2);
        case EvalMethod::closed_form: {
            switch (spec.kind) {
                case DistanceKind::kullback_leibler:
                case DistanceKind::renyi:
                case DistanceKind::hellinger:
                case DistanceKind::bhattacharyya:
                    break;
                default:
                    throw unsupported_region(
                        std::string("distance: no closed form for ") + kind_name(spec.kind));
            }
            auto v = try_closed_form(spec, p1, p2);
            if (!v)
                throw unsupported_region(
                    "distance: closed form unavailable at this parameter configuration");
            return *v;
        }
        case EvalMethod::auto_select: {
            auto v = try_closed_form(spec, p1, p2);
            if (v) return *v;
            return quad_distance(spec, p1, p2);
        }
    }
    throw std::logic_error("distance: unreachable");
}

std::vector<std::pair<double, double>> distance_curve(const DistanceSpec& spec,
                                                      const std::vector<double>& alpha_grid,
                                                      const G0Params& reference) {
    spec.validate();
    reference.validate();
    std::vector<std::pair<double, double>> curve;
    curve.reserve(alpha_grid.size());
    for (double alpha : alpha_grid) {
        if (!(alpha < -1.0))
            throw std::domain_error("distance_curve: grid roughness must be < -1");
        const G0Params p{alpha, -alpha - 1.0, reference.looks};
        curve.emplace_back(alpha, distance(spec, p, reference));
    }
    return curve;
}

std::string distance_curve_csv(const std::vector<std::pair<double, double>>& curve) {
    std::ostringstream out;
    out << "alpha,distance\n";
    char buf[64];
    for (const auto& [alpha, d] : curve) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", alpha, d);
        out << buf;
    }
    return out.str();
}

} // namespace speckle
