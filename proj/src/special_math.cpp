#include "speckle/special_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace speckle {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Lanczos coefficients, g = 7, 9 terms.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double lanczos_ln_gamma(double x) {
    if (x < 0.5) {
        // reflection; only reached with x in (0, 0.5) where sin(pi x) > 0
        return std::log(kPi / std::sin(kPi * x)) - lanczos_ln_gamma(1.0 - x);
    }
    x -= 1.0;
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
    const double t = x + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

bool near_nonpositive_integer(double x, double tol) {
    if (x > tol) return false;
    return std::abs(x - std::round(x)) <= tol;
}

} // namespace

double ln_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("ln_gamma: requires x > 0");
    return lanczos_ln_gamma(x);
}

double ln_abs_gamma(double x, int& sign) {
    if (x > 0.0) {
        sign = 1;
        return lanczos_ln_gamma(x);
    }
    if (near_nonpositive_integer(x, 1e-12))
        throw std::domain_error("ln_abs_gamma: pole at nonpositive integer");
    // Gamma(x) = pi / (sin(pi x) Gamma(1-x)); Gamma(1-x) > 0 here
    const double s = std::sin(kPi * x);
    sign = s > 0.0 ? 1 : -1;
    return std::log(kPi / std::abs(s)) - lanczos_ln_gamma(1.0 - x);
}

double digamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("digamma: requires x > 0");
    double result = 0.0;
    while (x < 8.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    // psi(x) ~ ln x - 1/(2x) - sum B_{2k} / (2k x^{2k}), through B_14
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv
              - inv2 * (1.0 / 12.0
              - inv2 * (1.0 / 120.0
              - inv2 * (1.0 / 252.0
              - inv2 * (1.0 / 240.0
              - inv2 * (1.0 / 132.0
              - inv2 * (691.0 / 32760.0
              - inv2 * (1.0 / 12.0)))))));
    return result;
}

double harmonic(unsigned n) {
    double sum = 0.0;
    for (unsigned k = n; k >= 1; --k) sum += 1.0 / k;
    return sum;
}

namespace {

// Shared series loop for 2F1 / 3F2. `ratio(k)` gives term_{k+1}/term_k.
template <class Ratio>
double hypergeometric_series(Ratio ratio, double stable_after, const char* name) {
    constexpr int kMaxTerms = 10000;
    constexpr double kRelTol = 1e-13;
    double sum = 1.0;
    double term = 1.0;
    for (int k = 0; k < kMaxTerms; ++k) {
        const double r = ratio(k);
        term *= r;
        sum += term;
        if (!std::isfinite(sum))
            throw unsupported_region(std::string(name) + ": series diverged");
        if (k > stable_after && std::abs(r) < 0.999) {
            // geometric tail bound once the term ratio has settled below 1
            const double tail = std::abs(term) * std::abs(r) / (1.0 - std::abs(r));
            if (tail <= kRelTol * std::abs(sum) + 1e-300) return sum;
        }
    }
    throw unsupported_region(std::string(name) + ": series did not converge");
}

double gauss_2f1_series(double a, double b, double c, double z) {
    const double stable_after = std::max({std::abs(a), std::abs(b), std::abs(c)}) + 8.0;
    return hypergeometric_series(
        [=](int k) { return (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z; },
        stable_after, "gauss_2f1");
}

// Gauss summation at z = 1: 2F1(a,b;c;1) = G(c)G(c-a-b) / (G(c-a)G(c-b)).
double gauss_2f1_at_one(double a, double b, double c) {
    const double s = c - a - b;
    if (s <= 0.0)
        throw unsupported_region("gauss_2f1: divergent at z = 1");
    int s1 = 1, s2 = 1, s3 = 1, s4 = 1;
    const double num = ln_abs_gamma(c, s1) + ln_abs_gamma(s, s2);
    const double den = ln_abs_gamma(c - a, s3) + ln_abs_gamma(c - b, s4);
    return (s1 * s2 * s3 * s4) * std::exp(num - den);
}

} // namespace

double gauss_2f1(double a, double b, double c, double z) {
    if (near_nonpositive_integer(c, 1e-12))
        throw std::domain_error("gauss_2f1: c is a nonpositive integer");
    if (z == 0.0) return 1.0;
    if (!(z < 1.0)) {
        if (z <= 1.0 + 1e-14) return gauss_2f1_at_one(a, b, c);
        throw unsupported_region("gauss_2f1: z > 1 not supported");
    }
    if (std::abs(1.0 - z) < 1e-12) return gauss_2f1_at_one(a, b, c);
    if (z < 0.0) {
        // Pfaff: F(a,b;c;z) = (1-z)^-a F(a, c-b; c; z/(z-1)) with argument in (0,1)
        const double w = z / (z - 1.0);
        return std::pow(1.0 - z, -a) * gauss_2f1_series(a, c - b, c, w);
    }
    return gauss_2f1_series(a, b, c, z);
}

double hyp_3f2(double a1, double a2, double a3, double b1, double b2, double z) {
    if (near_nonpositive_integer(b1, 1e-12) || near_nonpositive_integer(b2, 1e-12))
        throw std::domain_error("hyp_3f2: lower parameter is a nonpositive integer");
    if (z == 0.0) return 1.0;
    if (std::abs(z) > 1.0)
        throw unsupported_region("hyp_3f2: |z| > 1 not supported");
    const double stable_after =
        std::max({std::abs(a1), std::abs(a2), std::abs(a3), std::abs(b1), std::abs(b2)}) + 8.0;
    return hypergeometric_series(
        [=](int k) {
            return (a1 + k) * (a2 + k) * (a3 + k) / ((b1 + k) * (b2 + k) * (k + 1.0)) * z;
        },
        stable_after, "hyp_3f2");
}

namespace {

// Lower regularized gamma by power series (x < s + 1).
double gamma_p_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int k = 1; k < 1000; ++k) {
        term *= x / (s + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + s * std::log(x) - ln_gamma(s));
}

// Upper regularized gamma by Lentz continued fraction (x >= s + 1).
double gamma_q_contfrac(double s, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + s * std::log(x) - ln_gamma(s)) * h;
}

} // namespace

double reg_upper_gamma(double s, double x) {
    if (!(s > 0.0)) throw std::domain_error("reg_upper_gamma: requires s > 0");
    if (!(x >= 0.0)) throw std::domain_error("reg_upper_gamma: requires x >= 0");
    if (x == 0.0) return 1.0;
    double q = (x < s + 1.0) ? 1.0 - gamma_p_series(s, x) : gamma_q_contfrac(s, x);
    return std::min(1.0, std::max(0.0, q));
}

namespace {

// Gauss-Kronrod 7-15 nodes on [-1,1] (positive half) and weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Segment {
    double lo, hi, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(mid);
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double y = f(mid - dx) + f(mid + dx);
        k15 += kWgk[i] * y;
        if (i % 2 == 1) g7 += kWg[i / 2] * y;
    }
    k15 *= half;
    g7 *= half;
    if (!std::isfinite(k15))
        throw std::domain_error("integrate_adaptive: integrand returned a non-finite value");
    return Segment{lo, hi, k15, std::abs(k15 - g7)};
}

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi, QuadratureOptions opts) {
    if (!(lo < hi)) throw std::domain_error("integrate_adaptive: requires lo < hi");
    std::priority_queue<Segment> queue;
    std::size_t evals = 15;
    Segment first = gk15(f, lo, hi);
    double total = first.value;
    double err = first.error;
    queue.push(first);
    while (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (evals + 30 > opts.max_evals || queue.empty()) {
            throw accuracy_error("integrate_adaptive: evaluation budget exhausted",
                                 total, err, evals);
        }
        const Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (mid <= worst.lo || mid >= worst.hi) {
            // interval no longer splittable in double precision; keep it
            throw accuracy_error("integrate_adaptive: interval exhausted",
                                 total, err, evals);
        }
        const Segment left = gk15(f, worst.lo, mid);
        const Segment right = gk15(f, mid, worst.hi);
        evals += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }
    return QuadratureResult{total, err, evals};
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double abs_tol, double rel_tol) {
    auto transformed = [&f](double t) {
        const double om = 1.0 - t;
        const double x = t / om;
        if (!std::isfinite(x)) return 0.0;
        return f(x) / (om * om);
    };
    QuadratureOptions opts;
    opts.abs_tol = abs_tol;
    opts.rel_tol = rel_tol;
    return integrate_adaptive(transformed, 0.0, 1.0, opts);
}

} // namespace speckle
