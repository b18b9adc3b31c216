#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "speckle/distances.hpp"
#include "speckle/g0_model.hpp"

namespace speckle {

/// The simulated contrast configurations: same law, same roughness with
/// different mean, same mean with different roughness, and both differing
/// in the two possible ways relative to kappa = (1+alpha1)/(1+alpha2).
enum class Scenario {
    null_hypothesis,
    equal_alpha,
    equal_mu,
    both_differ_iii,
    both_differ_iv,
};

const char* scenario_name(Scenario s);

struct ScenarioSpec {
    Scenario scenario = Scenario::null_hypothesis;
    G0Params params1{-3.0, 2.0, 1.0};
    G0Params params2{-3.0, 2.0, 1.0};
    int window = 49;                        ///< sample size per image
    std::vector<double> levels{0.01, 0.05}; ///< nominal test levels
    int max_reps = 5500;                    ///< attempted replications
    std::uint64_t seed = 20260101ULL;

    void validate() const;
};

/// Rejection counts per (kind, level) over the valid replications.
struct MCReport {
    std::vector<DistanceSpec> kinds;
    std::vector<double> levels;
    std::vector<std::vector<std::size_t>> rejections; ///< [kind][level]
    std::size_t valid_reps = 0;
    std::size_t attempted_reps = 0;

    double rate(std::size_t kind_index, std::size_t level_index) const;
    bool operator==(const MCReport& other) const;
};

/// Runs the replication loop: draw both samples, fit, censor against the true
/// roughness of each side, and evaluate every kind's test at every level on
/// the same fitted pair. Deterministic in the spec; threads = 1 runs the
/// serial reference loop, 0 uses all available cores.
MCReport run_experiment(const ScenarioSpec& spec, const std::vector<DistanceSpec>& kinds,
                        int threads = 0);

/// One row of the sample-size study.
struct SampleSizeRow {
    int window = 0;
    MCReport report;
};

/// Power against the sample size for the equal-roughness scenario with the
/// given scale ratio; kinds default to {KL, T, B, AG}.
std::vector<SampleSizeRow> run_sample_size_study(
    double alpha, double looks, double ratio, const std::vector<int>& sizes,
    int max_reps = 2000, std::uint64_t seed = 20260101ULL, int threads = 0);

/// CSV rows in the schema
/// scenario,alpha1,gamma1,alpha2,gamma2,L,N,kind,level,rejection_rate,valid_reps,attempted_reps
std::string mc_report_csv(const ScenarioSpec& spec, const MCReport& report,
                          bool header = true);

} // namespace speckle
