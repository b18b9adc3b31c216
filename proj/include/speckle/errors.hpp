#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace speckle {

/// Quadrature gave up before reaching the requested tolerance.
/// Carries the best estimate obtained so far.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double best_estimate,
                   double error_estimate, std::size_t evaluations)
        : std::runtime_error(what),
          best_estimate_(best_estimate),
          error_estimate_(error_estimate),
          evaluations_(evaluations) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }
    std::size_t evaluations() const noexcept { return evaluations_; }

private:
    double best_estimate_;
    double error_estimate_;
    std::size_t evaluations_;
};

/// A series or closed-form expression was requested outside the region
/// where it converges (callers usually fall back to quadrature).
class unsupported_region : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Maximum-likelihood fitting could not produce a usable iterate.
class estimation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed sample, raster or region file.
class parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace speckle
