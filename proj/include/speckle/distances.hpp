#pragma once

#include <string>
#include <utility>
#include <vector>

#include "speckle/g0_model.hpp"

namespace speckle {

enum class DistanceKind {
    kullback_leibler,
    renyi,
    hellinger,
    bhattacharyya,
    jensen_shannon,
    arithmetic_geometric,
    triangular,
    harmonic_mean,
};

/// A distance selector; carries the order beta for the Renyi distance.
struct DistanceSpec {
    DistanceKind kind = DistanceKind::kullback_leibler;
    double renyi_beta = 0.95;

    static DistanceSpec of(DistanceKind k) { return {k, 0.95}; }
    static DistanceSpec renyi(double beta) { return {DistanceKind::renyi, beta}; }
    void validate() const;
};

const char* kind_name(DistanceKind k);
std::vector<DistanceSpec> all_distances(double renyi_beta = 0.95);

enum class EvalMethod {
    quadrature,   ///< numeric integration of the defining integrals
    closed_form,  ///< explicit expressions; errors outside their support
    auto_select,  ///< closed form when supported, quadrature otherwise
};

/// Constants entering the explicit distance expressions for a pair of G0 laws.
/// k1, k2 are the density normalization products under the half-scale
/// convention b_i = gamma_i/2 (log twins are what the evaluation uses, the
/// linear values can overflow for extreme fitted scales).
struct ClosedFormConstants {
    double k1, k2;
    double log_k1, log_k2;
    double a1, a2;          // L_i - 1
    double b1, b2;          // gamma_i / 2
    double c1, c2;          // |alpha_i| + L_i
    double d;               // log(k2/k1)
    double log_h1, log_h2;  // Renyi cross normalizations
    double g1, g2;          // Renyi power-mix exponents of x
    double e1, e2, m1, m2;  // Renyi factor exponents
    double f1, f2;          // (alpha_i - L_i)/2 for Hellinger/Bhattacharyya

    static ClosedFormConstants make(const G0Params& p1, const G0Params& p2,
                                    double renyi_beta = 0.95);
};

/// Unsymmetrized (h,phi)-divergence of the selected kind, evaluated from the
/// defining integral by quadrature. Indeterminate forms contribute zero.
double divergence_hphi(const DistanceSpec& spec, const G0Params& p1, const G0Params& p2);

/// Symmetrized distance between two G0 laws.
double distance(const DistanceSpec& spec, const G0Params& p1, const G0Params& p2,
                EvalMethod method = EvalMethod::auto_select);

/// Distance profile against a reference law: each grid roughness alpha < -1 is
/// paired with gamma = -alpha - 1 so the law keeps unit mean.
std::vector<std::pair<double, double>> distance_curve(
    const DistanceSpec& spec, const std::vector<double>& alpha_grid,
    const G0Params& reference = {-12.0, 11.0, 8.0});

/// CSV rows "alpha,distance" (with header) for a curve.
std::string distance_curve_csv(const std::vector<std::pair<double, double>>& curve);

} // namespace speckle
