// Command-line front door: fit, distance, curve, test, simulate, analyze.
// Exit codes: 0 success, 1 usage, 2 data, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "speckle/distances.hpp"
#include "speckle/errors.hpp"
#include "speckle/estimation.hpp"
#include "speckle/g0_model.hpp"
#include "speckle/image_analysis.hpp"
#include "speckle/montecarlo.hpp"
#include "speckle/testing.hpp"

namespace {

using namespace speckle;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

std::string fmt(double v) {
    if (std::isinf(v) && v > 0) return "inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw parse_error("cannot open output file " + out_path);
    out << text;
}

Sample read_sample_file(const std::string& path, double looks) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open sample file " + path);
    Sample s;
    s.looks = looks;
    double v;
    std::size_t index = 0;
    while (in >> v) {
        if (!(v > 0.0))
            throw parse_error("sample file " + path + ": nonpositive value at index " +
                              std::to_string(index));
        s.values.push_back(v);
        ++index;
    }
    if (!in.eof())
        throw parse_error("sample file " + path + ": unparsable token at index " +
                          std::to_string(index));
    if (s.values.empty()) throw parse_error("sample file " + path + " is empty");
    return s;
}

G0Params parse_params(const std::string& text) {
    G0Params p{};
    char extra;
    std::istringstream in(text);
    char c1, c2;
    if (!(in >> p.alpha >> c1 >> p.gamma >> c2 >> p.looks) || c1 != ',' || c2 != ',' ||
        (in >> extra))
        throw parse_error("expected \"alpha,gamma,looks\", got \"" + text + "\"");
    p.validate();
    return p;
}

DistanceSpec parse_kind(const std::string& name, double beta) {
    for (const auto& spec : all_distances(beta)) {
        if (name == kind_name(spec.kind)) return spec;
    }
    // short aliases as in the tables
    if (name == "kl") return DistanceSpec::of(DistanceKind::kullback_leibler);
    if (name == "r") return DistanceSpec::renyi(beta);
    if (name == "h") return DistanceSpec::of(DistanceKind::hellinger);
    if (name == "b") return DistanceSpec::of(DistanceKind::bhattacharyya);
    if (name == "js") return DistanceSpec::of(DistanceKind::jensen_shannon);
    if (name == "ag") return DistanceSpec::of(DistanceKind::arithmetic_geometric);
    if (name == "t") return DistanceSpec::of(DistanceKind::triangular);
    if (name == "hm") return DistanceSpec::of(DistanceKind::harmonic_mean);
    throw parse_error("unknown distance kind \"" + name + "\"");
}

EvalMethod parse_method(const std::string& name) {
    if (name == "auto") return EvalMethod::auto_select;
    if (name == "quadrature") return EvalMethod::quadrature;
    if (name == "closed") return EvalMethod::closed_form;
    throw parse_error("unknown method \"" + name + "\" (auto|quadrature|closed)");
}

std::vector<double> parse_grid(const std::string& text) {
    // "start:stop:step"
    double start, stop, step;
    char c1, c2, extra;
    std::istringstream in(text);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
        (in >> extra) || !(step > 0.0))
        throw parse_error("expected grid \"start:stop:step\", got \"" + text + "\"");
    std::vector<double> grid;
    for (double a = start; a <= stop + 1e-12; a += step) grid.push_back(a);
    if (grid.empty()) throw parse_error("empty grid \"" + text + "\"");
    return grid;
}

// ---------------------------------------------------------------------------

int cmd_fit(const std::string& file, double looks) {
    const Sample s = read_sample_file(file, looks);
    const FitResult fit = fit_ml(s);
    const double mu = mu_from_params(fit.params);
    std::cout << "alpha,gamma,mu,log_likelihood,converged,iterations,score_norm\n"
              << fmt(fit.params.alpha) << ',' << fmt(fit.params.gamma) << ',' << fmt(mu)
              << ',' << fmt(fit.log_likelihood) << ',' << (fit.converged ? 1 : 0) << ','
              << fit.iterations << ',' << fmt(fit.score_norm_at_opt) << '\n';
    return fit.converged ? kExitOk : kExitNumerical;
}

int cmd_distance(const std::string& kind, const std::string& p1_text,
                 const std::string& p2_text, double beta, const std::string& method) {
    const DistanceSpec spec = parse_kind(kind, beta);
    const G0Params p1 = parse_params(p1_text);
    const G0Params p2 = parse_params(p2_text);
    const double d = distance(spec, p1, p2, parse_method(method));
    std::cout << "kind,beta,distance\n"
              << kind_name(spec.kind) << ',' << fmt(spec.renyi_beta) << ',' << fmt(d) << '\n';
    return kExitOk;
}

int cmd_curve(const std::string& kind, const std::string& grid_text, double beta,
              const std::string& ref_text, const std::string& out_path) {
    const DistanceSpec spec = parse_kind(kind, beta);
    const G0Params ref = parse_params(ref_text);
    const auto curve = distance_curve(spec, parse_grid(grid_text), ref);
    emit(distance_curve_csv(curve), out_path);
    return kExitOk;
}

int cmd_test(const std::string& file1, const std::string& file2, double looks,
             const std::string& kind, double beta, double level) {
    const Sample s1 = read_sample_file(file1, looks);
    const Sample s2 = read_sample_file(file2, looks);
    const DistanceSpec spec = parse_kind(kind, beta);
    const TestOutcome outcome = test_samples(spec, s1, s2, level);
    std::cout << "kind,level,statistic,df,p_value,reject,m,n\n"
              << kind_name(spec.kind) << ',' << fmt(outcome.level) << ','
              << fmt(outcome.statistic) << ',' << outcome.df << ',' << fmt(outcome.p_value)
              << ',' << (outcome.reject ? 1 : 0) << ',' << outcome.m << ',' << outcome.n
              << '\n';
    return kExitOk;
}

struct SimulateArgs {
    std::string preset;
    std::string cell;
    int reps = 2000;
    int window = 49;
    std::uint64_t seed = 20260101ULL;
    int threads = 0;
    double beta = 0.95;
    std::string out_path;
};

int cmd_simulate(const SimulateArgs& args) {
    const auto kinds = all_distances(args.beta);
    std::ostringstream csv;
    bool header = true;

    auto run_null_cell = [&](double alpha, double gamma, double looks) {
        ScenarioSpec spec;
        spec.scenario = Scenario::null_hypothesis;
        spec.params1 = {alpha, gamma, looks};
        spec.params2 = spec.params1;
        spec.window = args.window;
        spec.max_reps = args.reps;
        spec.seed = args.seed;
        csv << mc_report_csv(spec, run_experiment(spec, kinds, args.threads), header);
        header = false;
    };
    auto run_power_cell = [&](double alpha, double ratio, double looks) {
        ScenarioSpec spec;
        spec.scenario = Scenario::equal_alpha;
        const double gamma1 = gamma_from_mean(alpha, 1.0);
        spec.params1 = {alpha, gamma1, looks};
        spec.params2 = {alpha, ratio * gamma1, looks};
        spec.window = args.window;
        spec.max_reps = args.reps;
        spec.seed = args.seed;
        csv << mc_report_csv(spec, run_experiment(spec, kinds, args.threads), header);
        header = false;
    };

    const std::vector<double> alphas{-1.5, -3.0, -5.0, -8.0};
    const std::vector<double> looks_grid{1.0, 2.0, 4.0, 8.0};

    if (args.preset == "table5") {
        if (!args.cell.empty()) {
            const G0Params p = parse_params(args.cell);
            run_null_cell(p.alpha, p.gamma, p.looks);
        } else {
            for (double a : alphas)
                for (double mu : {1.0, 10.0})
                    for (double L : looks_grid)
                        run_null_cell(a, gamma_from_mean(a, mu), L);
        }
    } else if (args.preset == "table6") {
        if (!args.cell.empty()) {
            const G0Params c = parse_params(args.cell); // alpha, ratio, looks
            run_power_cell(c.alpha, c.gamma, c.looks);
        } else {
            for (double a : alphas)
                for (double ratio : {2.0, 2.5, 5.0})
                    for (double L : looks_grid)
                        run_power_cell(a, ratio, L);
        }
    } else if (args.preset == "sizes") {
        std::vector<double> study_alphas = alphas;
        if (!args.cell.empty()) {
            std::istringstream in(args.cell);
            double a;
            char extra;
            if (!(in >> a) || (in >> extra))
                throw parse_error("sizes preset cell must be a single roughness value");
            study_alphas = {a};
        }
        for (double a : study_alphas) {
            const auto rows =
                run_sample_size_study(a, 1.0, 2.0, {49, 81, 121}, args.reps, args.seed,
                                      args.threads);
            for (const auto& row : rows) {
                ScenarioSpec spec;
                spec.scenario = Scenario::equal_alpha;
                const double gamma1 = gamma_from_mean(a, 1.0);
                spec.params1 = {a, gamma1, 1.0};
                spec.params2 = {a, 2.0 * gamma1, 1.0};
                spec.window = row.window;
                spec.max_reps = args.reps;
                spec.seed = args.seed;
                csv << mc_report_csv(spec, row.report, header);
                header = false;
            }
        }
    } else {
        throw parse_error("unknown preset \"" + args.preset + "\" (table5|table6|sizes)");
    }
    emit(csv.str(), args.out_path);
    return kExitOk;
}

int cmd_analyze(const std::string& raster_path, const std::string& regions_path,
                std::optional<double> looks, std::size_t side, double beta, int threads,
                const std::string& out_path) {
    const Raster raster = load_raster(raster_path, looks);
    const auto regions = load_regions(regions_path);
    const auto fits = fit_windows(raster, regions, side, threads);
    const auto kinds = all_distances(beta);
    const std::vector<double> levels{0.01, 0.05};

    std::ostringstream csv;
    bool header = true;
    for (const auto& region : regions) {
        const auto table = pairwise_rejection_rates(fits, PairMode::same(region.name),
                                                    kinds, levels, threads);
        csv << rate_table_csv(table, raster.looks, header);
        header = false;
    }
    for (std::size_t i = 0; i < regions.size(); ++i) {
        for (std::size_t j = i + 1; j < regions.size(); ++j) {
            const auto table = pairwise_rejection_rates(
                fits, PairMode::cross(regions[i].name, regions[j].name), kinds, levels,
                threads);
            csv << rate_table_csv(table, raster.looks, header);
        }
    }
    emit(csv.str(), out_path);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"G0 speckle statistics: fitting, distances, contrast tests"};
    app.require_subcommand(1);

    // fit
    std::string fit_file;
    double fit_looks = 1.0;
    auto* fit = app.add_subcommand("fit", "ML fit of one sample file");
    fit->add_option("file", fit_file, "sample file, one positive value per line")->required();
    fit->add_option("--looks", fit_looks, "known looks value")->required();

    // distance
    std::string d_kind, d_p1, d_p2, d_method = "auto";
    double d_beta = 0.95;
    auto* dist = app.add_subcommand("distance", "distance between two G0 laws");
    dist->add_option("--kind", d_kind)->required();
    dist->add_option("--p1", d_p1, "alpha,gamma,looks")->required();
    dist->add_option("--p2", d_p2, "alpha,gamma,looks")->required();
    dist->add_option("--beta", d_beta, "Renyi order");
    dist->add_option("--method", d_method, "auto|quadrature|closed");

    // curve
    std::string c_kind, c_grid, c_ref = "-12,11,8", c_out;
    double c_beta = 0.95;
    auto* curve = app.add_subcommand("curve", "distance profile over a roughness grid");
    curve->add_option("--kind", c_kind)->required();
    curve->add_option("--grid", c_grid, "start:stop:step of roughness values")->required();
    curve->add_option("--beta", c_beta, "Renyi order");
    curve->add_option("--ref", c_ref, "reference alpha,gamma,looks");
    curve->add_option("--out", c_out, "output CSV path (default stdout)");

    // test
    std::string t_file1, t_file2, t_kind = "triangular";
    double t_looks = 1.0, t_beta = 0.95, t_level = 0.05;
    auto* test = app.add_subcommand("test", "two-sample contrast test");
    test->add_option("file1", t_file1)->required();
    test->add_option("file2", t_file2)->required();
    test->add_option("--looks", t_looks)->required();
    test->add_option("--kind", t_kind);
    test->add_option("--beta", t_beta);
    test->add_option("--level", t_level);

    // simulate
    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo size/power presets");
    simulate->add_option("--preset", sim.preset, "table5|table6|sizes")->required();
    simulate->add_option("--cell", sim.cell, "narrow to one configuration");
    simulate->add_option("--reps", sim.reps, "attempted replications");
    simulate->add_option("--window", sim.window, "sample size per image");
    simulate->add_option("--seed", sim.seed);
    simulate->add_option("--threads", sim.threads, "0 = all cores, 1 = serial");
    simulate->add_option("--beta", sim.beta, "Renyi order");
    simulate->add_option("--out", sim.out_path, "output CSV path (default stdout)");

    // analyze
    std::string a_raster, a_regions, a_out;
    double a_looks = -1.0, a_beta = 0.95;
    std::size_t a_side = 7;
    int a_threads = 0;
    auto* analyze = app.add_subcommand("analyze", "windowed region tests on a raster");
    analyze->add_option("raster", a_raster)->required();
    analyze->add_option("regions", a_regions)->required();
    analyze->add_option("--looks", a_looks, "override the header looks value");
    analyze->add_option("--side", a_side, "window side length");
    analyze->add_option("--beta", a_beta, "Renyi order");
    analyze->add_option("--threads", a_threads, "0 = all cores, 1 = serial");
    analyze->add_option("--out", a_out, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (fit->parsed()) return cmd_fit(fit_file, fit_looks);
        if (dist->parsed()) return cmd_distance(d_kind, d_p1, d_p2, d_beta, d_method);
        if (curve->parsed()) return cmd_curve(c_kind, c_grid, c_beta, c_ref, c_out);
        if (test->parsed()) return cmd_test(t_file1, t_file2, t_looks, t_kind, t_beta, t_level);
        if (simulate->parsed()) return cmd_simulate(sim);
        if (analyze->parsed())
            return cmd_analyze(a_raster, a_regions,
                               a_looks > 0 ? std::optional<double>(a_looks) : std::nullopt,
                               a_side, a_beta, a_threads, a_out);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const accuracy_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const unsupported_region& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const estimation_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
