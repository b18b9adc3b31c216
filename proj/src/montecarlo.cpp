#include "speckle/montecarlo.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "speckle/errors.hpp"
#include "speckle/estimation.hpp"
#include "speckle/rng.hpp"
#include "speckle/testing.hpp"

namespace speckle {

namespace {

constexpr double kKappaTol = 1e-9;

double kappa_of(const ScenarioSpec& s) {
    return (1.0 + s.params1.alpha) / (1.0 + s.params2.alpha);
}

// Outcome of one replication: a reject bit per (kind, level), or invalid.
struct RepOutcome {
    bool valid = false;
    std::vector<unsigned char> reject; // kinds * levels
};

RepOutcome run_replication(const ScenarioSpec& spec,
                           const std::vector<DistanceSpec>& kinds, int rep) {
    RepOutcome out;
    const std::uint64_t r = static_cast<std::uint64_t>(rep);
    const Sample s1 = sample_g0(spec.params1, spec.window,
                                Rng::for_stream(spec.seed, r, 0).next_u64());
    const Sample s2 = sample_g0(spec.params2, spec.window,
                                Rng::for_stream(spec.seed, r, 1).next_u64());
    FitResult f1, f2;
    try {
        f1 = fit_ml(s1);
        f2 = fit_ml(s2);
    } catch (const estimation_error&) {
        return out;
    }
    if (!censor_accept(f1, spec.params1.alpha) || !censor_accept(f2, spec.params2.alpha))
        return out;

    out.valid = true;
    out.reject.assign(kinds.size() * spec.levels.size(), 0);
    const double m = static_cast<double>(spec.window);
    const double harmonic_factor = 2.0 * m * m / (m + m);
    for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
        const double d = distance(kinds[ki], f1.params, f2.params);
        const double s = harmonic_factor * v_constant(kinds[ki]) * d;
        const double p = p_value(s, 2);
        for (std::size_t li = 0; li < spec.levels.size(); ++li)
            out.reject[ki * spec.levels.size() + li] = p <= spec.levels[li] ? 1 : 0;
    }
    return out;
}

void accumulate(MCReport& report, const RepOutcome& rep) {
    report.attempted_reps += 1;
    if (!rep.valid) return;
    report.valid_reps += 1;
    const std::size_t n_levels = report.levels.size();
    for (std::size_t ki = 0; ki < report.kinds.size(); ++ki)
        for (std::size_t li = 0; li < n_levels; ++li)
            report.rejections[ki][li] += rep.reject[ki * n_levels + li];
}

} // namespace

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::null_hypothesis: return "null";
        case Scenario::equal_alpha: return "equal_alpha";
        case Scenario::equal_mu: return "equal_mu";
        case Scenario::both_differ_iii: return "both_differ_iii";
        case Scenario::both_differ_iv: return "both_differ_iv";
    }
    return "unknown";
}

void ScenarioSpec::validate() const {
    params1.validate();
    params2.validate();
    if (window < 2) throw std::domain_error("ScenarioSpec: window must be >= 2");
    if (max_reps < 0) throw std::domain_error("ScenarioSpec: max_reps must be >= 0");
    if (levels.empty()) throw std::domain_error("ScenarioSpec: needs at least one level");
    for (double lvl : levels)
        if (!(lvl > 0.0 && lvl < 1.0))
            throw std::domain_error("ScenarioSpec: levels must lie in (0,1)");
    if (params1.looks != params2.looks)
        throw std::domain_error("ScenarioSpec: both images must share the looks value");

    const double a1 = params1.alpha, a2 = params2.alpha;
    const double g1 = params1.gamma, g2 = params2.gamma;
    switch (scenario) {
        case Scenario::null_hypothesis:
            if (a1 != a2 || g1 != g2)
                throw std::domain_error("ScenarioSpec: null scenario needs identical laws");
            break;
        case Scenario::equal_alpha:
            if (a1 != a2 || g1 == g2)
                throw std::domain_error(
                    "ScenarioSpec: equal_alpha needs alpha1 = alpha2 and gamma1 != gamma2");
            break;
        case Scenario::equal_mu:
            if (a1 == a2 || std::abs(g1 - kappa_of(*this) * g2) > kKappaTol * g2)
                throw std::domain_error(
                    "ScenarioSpec: equal_mu needs alpha1 != alpha2 and gamma1 = kappa gamma2");
            break;
        case Scenario::both_differ_iii:
            if (!(a1 < a2) || !(g1 / g2 > kappa_of(*this)))
                throw std::domain_error(
                    "ScenarioSpec: scenario (iii) needs alpha1 < alpha2 and gamma1/gamma2 > kappa");
            break;
        case Scenario::both_differ_iv:
            if (!(a1 < a2) || !(g1 / g2 < kappa_of(*this)))
                throw std::domain_error(
                    "ScenarioSpec: scenario (iv) needs alpha1 < alpha2 and gamma1/gamma2 < kappa");
            break;
    }
}

double MCReport::rate(std::size_t kind_index, std::size_t level_index) const {
    if (valid_reps == 0) return 0.0;
    return static_cast<double>(rejections.at(kind_index).at(level_index))
           / static_cast<double>(valid_reps);
}

bool MCReport::operator==(const MCReport& other) const {
    if (levels != other.levels || valid_reps != other.valid_reps ||
        attempted_reps != other.attempted_reps || rejections != other.rejections ||
        kinds.size() != other.kinds.size())
        return false;
    for (std::size_t i = 0; i < kinds.size(); ++i)
        if (kinds[i].kind != other.kinds[i].kind ||
            kinds[i].renyi_beta != other.kinds[i].renyi_beta)
            return false;
    return true;
}

MCReport run_experiment(const ScenarioSpec& spec, const std::vector<DistanceSpec>& kinds,
                        int threads) {
    spec.validate();
    if (kinds.empty()) throw std::domain_error("run_experiment: needs at least one kind");
    for (const auto& k : kinds) k.validate();

    MCReport report;
    report.kinds = kinds;
    report.levels = spec.levels;
    report.rejections.assign(kinds.size(), std::vector<std::size_t>(spec.levels.size(), 0));

    if (threads == 1) {
        // serial reference loop
        for (int rep = 0; rep < spec.max_reps; ++rep)
            accumulate(report, run_replication(spec, kinds, rep));
    } else {
#ifdef _OPENMP
        const int n_threads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(n_threads)
        {
            MCReport local;
            local.kinds = kinds;
            local.levels = spec.levels;
            local.rejections.assign(kinds.size(),
                                    std::vector<std::size_t>(spec.levels.size(), 0));
#pragma omp for schedule(dynamic, 8) nowait
            for (int rep = 0; rep < spec.max_reps; ++rep)
                accumulate(local, run_replication(spec, kinds, rep));
#pragma omp critical
            {
                report.valid_reps += local.valid_reps;
                report.attempted_reps += local.attempted_reps;
                for (std::size_t ki = 0; ki < kinds.size(); ++ki)
                    for (std::size_t li = 0; li < spec.levels.size(); ++li)
                        report.rejections[ki][li] += local.rejections[ki][li];
            }
        }
#else
        for (int rep = 0; rep < spec.max_reps; ++rep)
            accumulate(report, run_replication(spec, kinds, rep));
#endif
    }

    if (report.valid_reps == 0)
        throw estimation_error("run_experiment: no valid replication survived censoring");
    return report;
}

std::vector<SampleSizeRow> run_sample_size_study(double alpha, double looks, double ratio,
                                                 const std::vector<int>& sizes,
                                                 int max_reps, std::uint64_t seed,
                                                 int threads) {
    if (sizes.empty())
        throw std::domain_error("run_sample_size_study: needs at least one size");
    const double gamma1 = gamma_from_mean(alpha, 1.0);
    const std::vector<DistanceSpec> kinds = {
        DistanceSpec::of(DistanceKind::kullback_leibler),
        DistanceSpec::of(DistanceKind::triangular),
        DistanceSpec::of(DistanceKind::bhattacharyya),
        DistanceSpec::of(DistanceKind::arithmetic_geometric),
    };
    std::vector<SampleSizeRow> rows;
    rows.reserve(sizes.size());
    for (int n : sizes) {
        ScenarioSpec spec;
        spec.scenario = Scenario::equal_alpha;
        spec.params1 = {alpha, gamma1, looks};
        spec.params2 = {alpha, ratio * gamma1, looks};
        spec.window = n;
        spec.max_reps = max_reps;
        spec.seed = seed;
        rows.push_back({n, run_experiment(spec, kinds, threads)});
    }
    return rows;
}

std::string mc_report_csv(const ScenarioSpec& spec, const MCReport& report, bool header) {
    std::ostringstream out;
    if (header)
        out << "scenario,alpha1,gamma1,alpha2,gamma2,L,N,kind,level,"
               "rejection_rate,valid_reps,attempted_reps\n";
    char buf[256];
    for (std::size_t ki = 0; ki < report.kinds.size(); ++ki) {
        for (std::size_t li = 0; li < report.levels.size(); ++li) {
            std::snprintf(buf, sizeof(buf),
                          "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%s,%.17g,%.17g,%zu,%zu\n",
                          scenario_name(spec.scenario), spec.params1.alpha,
                          spec.params1.gamma, spec.params2.alpha, spec.params2.gamma,
                          spec.params1.looks, spec.window,
                          kind_name(report.kinds[ki].kind), report.levels[li],
                          report.rate(ki, li), report.valid_reps, report.attempted_reps);
            out << buf;
        }
    }
    return out.str();
}

} // namespace speckle
