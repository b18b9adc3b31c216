#include "speckle/g0_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "speckle/rng.hpp"
#include "speckle/special_math.hpp"

namespace speckle {

void G0Params::validate() const {
    if (!(alpha < 0.0) || !std::isfinite(alpha))
        throw std::domain_error("G0Params: roughness alpha must be < 0");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::domain_error("G0Params: scale gamma must be > 0");
    if (!(looks >= 1.0) || !std::isfinite(looks))
        throw std::domain_error("G0Params: looks must be >= 1");
}

void Sample::validate() const {
    if (values.empty())
        throw std::domain_error("Sample: needs at least one observation");
    if (!(looks >= 1.0))
        throw std::domain_error("Sample: looks must be >= 1");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::domain_error("Sample: every intensity must be positive and finite");
}

G0LogPdf::G0LogPdf(const G0Params& p) {
    p.validate();
    const double L = p.looks;
    log_norm_ = L * std::log(L) + ln_gamma(L - p.alpha) - p.alpha * std::log(p.gamma)
                - ln_gamma(-p.alpha) - ln_gamma(L);
    looks_minus_1_ = L - 1.0;
    alpha_minus_looks_ = p.alpha - L;
    gamma_ = p.gamma;
    looks_ = L;
}

double G0LogPdf::operator()(double z) const {
    if (!(z > 0.0)) throw std::domain_error("g0_log_pdf: requires z > 0");
    return log_norm_ + looks_minus_1_ * std::log(z)
           + alpha_minus_looks_ * std::log(gamma_ + looks_ * z);
}

double g0_log_pdf(double z, const G0Params& p) {
    return G0LogPdf(p)(z);
}

double g0_pdf(double z, const G0Params& p) {
    return std::exp(g0_log_pdf(z, p));
}

double g0_moment(double r, const G0Params& p) {
    p.validate();
    if (!(r > 0.0)) throw std::domain_error("g0_moment: requires r > 0");
    if (!(-r > p.alpha)) return std::numeric_limits<double>::infinity();
    return std::exp(r * (std::log(p.gamma) - std::log(p.looks))
                    + ln_gamma(-p.alpha - r) - ln_gamma(-p.alpha)
                    + ln_gamma(p.looks + r) - ln_gamma(p.looks));
}

double mu_from_params(const G0Params& p) {
    p.validate();
    if (!(p.alpha < -1.0)) return std::numeric_limits<double>::infinity();
    return -p.gamma / (1.0 + p.alpha);
}

double gamma_from_mean(double alpha, double mu) {
    if (!(alpha < -1.0))
        throw std::domain_error("gamma_from_mean: mean exists only for alpha < -1");
    if (!(mu > 0.0))
        throw std::domain_error("gamma_from_mean: requires mu > 0");
    return -(1.0 + alpha) * mu;
}

Sample sample_g0(const G0Params& p, std::size_t n, std::uint64_t seed) {
    p.validate();
    if (n < 1) throw std::domain_error("sample_g0: requires n >= 1");
    Rng rng(seed);
    Sample s;
    s.looks = p.looks;
    s.values.resize(n);
    const double shape_x = -p.alpha;
    const double L = p.looks;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = rng.gamma(shape_x);      // X = gamma / w
        const double y = rng.gamma(L) / L;        // speckle, unit mean
        s.values[i] = p.gamma / w * y;
    }
    return s;
}

} // namespace speckle
