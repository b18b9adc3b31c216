#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace speckle {

/// Parameters of the G0 intensity law: roughness alpha < 0, scale gamma > 0,
/// number of looks >= 1 (non-integer looks are fine).
struct G0Params {
    double alpha;
    double gamma;
    double looks;

    void validate() const;
};

/// A set of positive intensity observations sharing a known looks value.
struct Sample {
    std::vector<double> values;
    double looks = 1.0;

    std::size_t size() const { return values.size(); }
    void validate() const;
};

/// Log-density evaluator with the normalization constant precomputed.
class G0LogPdf {
public:
    explicit G0LogPdf(const G0Params& p);
    double operator()(double z) const;

private:
    double log_norm_;
    double looks_minus_1_;
    double alpha_minus_looks_;
    double gamma_;
    double looks_;
};

/// log f_Z(z; alpha, gamma, L); z > 0.
double g0_log_pdf(double z, const G0Params& p);

/// Density f_Z(z; alpha, gamma, L).
double g0_pdf(double z, const G0Params& p);

/// r-th moment E[Z^r]; returns +infinity when it does not exist (alpha >= -r).
double g0_moment(double r, const G0Params& p);

/// Mean -gamma/(1+alpha); +infinity when alpha >= -1. Independent of looks.
double mu_from_params(const G0Params& p);

/// Scale giving the requested mean at the given roughness: gamma = -(1+alpha) mu.
double gamma_from_mean(double alpha, double mu);

/// Draws n intensities as Z = X * Y: X reciprocal-gamma backscatter,
/// Y gamma speckle with shape = rate = looks. Deterministic in the seed.
Sample sample_g0(const G0Params& p, std::size_t n, std::uint64_t seed);

} // namespace speckle
