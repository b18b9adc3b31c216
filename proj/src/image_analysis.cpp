#include "speckle/image_analysis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "speckle/errors.hpp"
#include "speckle/testing.hpp"

namespace speckle {

namespace {

constexpr double kSanityAlphaLo = -50.0;
constexpr double kSanityAlphaHi = -0.01;
constexpr double kSanityGammaHi = 1e12;

bool in_sanity_band(const FitResult& fit) {
    return fit.params.alpha >= kSanityAlphaLo && fit.params.alpha <= kSanityAlphaHi &&
           fit.params.gamma > 0.0 && fit.params.gamma <= kSanityGammaHi;
}

struct Pair {
    std::size_t i, j;
};

std::vector<Pair> select_pairs(const std::vector<WindowFit>& fits, const PairMode& mode) {
    std::vector<std::size_t> a_idx, b_idx;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        if (fits[i].region == mode.region_a) a_idx.push_back(i);
        if (mode.kind == PairMode::Kind::cross_region && fits[i].region == mode.region_b)
            b_idx.push_back(i);
    }
    std::vector<Pair> pairs;
    if (mode.kind == PairMode::Kind::same_region) {
        if (a_idx.size() < 2)
            throw std::domain_error("pairwise_rejection_rates: region " + mode.region_a +
                                    " has fewer than two windows");
        for (std::size_t i = 0; i < a_idx.size(); ++i)
            for (std::size_t j = i + 1; j < a_idx.size(); ++j)
                pairs.push_back({a_idx[i], a_idx[j]});
    } else {
        if (a_idx.empty() || b_idx.empty())
            throw std::domain_error("pairwise_rejection_rates: empty region in cross mode");
        for (std::size_t i : a_idx)
            for (std::size_t j : b_idx)
                pairs.push_back({i, j});
    }
    return pairs;
}

} // namespace

void Raster::validate() const {
    if (rows == 0 || cols == 0)
        throw std::domain_error("Raster: empty dimensions");
    if (pixels.size() != rows * cols)
        throw std::domain_error("Raster: pixel count does not match dimensions");
    if (!(looks >= 1.0))
        throw std::domain_error("Raster: looks must be >= 1");
    for (std::size_t i = 0; i < pixels.size(); ++i)
        if (!(pixels[i] > 0.0) || !std::isfinite(pixels[i]))
            throw std::domain_error("Raster: nonpositive pixel at index " + std::to_string(i));
}

Raster load_raster(const std::filesystem::path& path, std::optional<double> looks_override) {
    std::ifstream in(path);
    if (!in) throw parse_error("load_raster: cannot open " + path.string());
    long long rows = 0, cols = 0;
    double looks = 0.0;
    if (!(in >> rows >> cols >> looks))
        throw parse_error("load_raster: malformed header (want \"rows cols looks\") in " +
                          path.string());
    if (rows <= 0 || cols <= 0)
        throw parse_error("load_raster: nonpositive dimensions in " + path.string());
    Raster raster;
    raster.rows = static_cast<std::size_t>(rows);
    raster.cols = static_cast<std::size_t>(cols);
    raster.looks = looks_override.value_or(looks);
    raster.pixels.resize(raster.rows * raster.cols);
    for (std::size_t i = 0; i < raster.pixels.size(); ++i) {
        if (!(in >> raster.pixels[i]))
            throw parse_error("load_raster: expected " + std::to_string(raster.pixels.size()) +
                              " pixels, failed at index " + std::to_string(i));
        if (!(raster.pixels[i] > 0.0))
            throw parse_error("load_raster: nonpositive pixel at index " + std::to_string(i));
    }
    double extra;
    if (in >> extra)
        throw parse_error("load_raster: trailing data after " +
                          std::to_string(raster.pixels.size()) + " pixels");
    raster.validate();
    return raster;
}

void save_raster(const Raster& raster, const std::filesystem::path& path) {
    raster.validate();
    std::ofstream out(path);
    if (!out) throw parse_error("save_raster: cannot open " + path.string());
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%zu %zu %.17g\n", raster.rows, raster.cols, raster.looks);
    out << buf;
    for (std::size_t r = 0; r < raster.rows; ++r) {
        for (std::size_t c = 0; c < raster.cols; ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g%c", raster.at(r, c),
                          c + 1 == raster.cols ? '\n' : ' ');
            out << buf;
        }
    }
}

std::vector<RegionLabel> load_regions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("load_regions: cannot open " + path.string());
    std::vector<RegionLabel> regions;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        RegionLabel r;
        long long row0, col0, rows, cols;
        if (!(ls >> r.name >> row0 >> col0 >> rows >> cols))
            throw parse_error("load_regions: malformed line " + std::to_string(line_no) +
                              " (want \"name row0 col0 height width\")");
        if (row0 < 0 || col0 < 0 || rows <= 0 || cols <= 0)
            throw parse_error("load_regions: bad extent on line " + std::to_string(line_no));
        r.row0 = static_cast<std::size_t>(row0);
        r.col0 = static_cast<std::size_t>(col0);
        r.rows = static_cast<std::size_t>(rows);
        r.cols = static_cast<std::size_t>(cols);
        regions.push_back(std::move(r));
    }
    if (regions.empty()) throw parse_error("load_regions: no regions in " + path.string());
    return regions;
}

std::vector<Sample> partition_windows(const Raster& raster, const RegionLabel& region,
                                      std::size_t side) {
    raster.validate();
    if (side < 1) throw std::domain_error("partition_windows: side must be >= 1");
    if (region.row0 + region.rows > raster.rows || region.col0 + region.cols > raster.cols)
        throw std::domain_error("partition_windows: region " + region.name +
                                " exceeds the raster extent");
    if (region.rows < side || region.cols < side)
        throw std::domain_error("partition_windows: region " + region.name +
                                " is smaller than one window");
    const std::size_t tiles_down = region.rows / side;
    const std::size_t tiles_across = region.cols / side;
    std::vector<Sample> windows;
    windows.reserve(tiles_down * tiles_across);
    for (std::size_t tr = 0; tr < tiles_down; ++tr) {
        for (std::size_t tc = 0; tc < tiles_across; ++tc) {
            Sample s;
            s.looks = raster.looks;
            s.values.reserve(side * side);
            for (std::size_t r = 0; r < side; ++r)
                for (std::size_t c = 0; c < side; ++c)
                    s.values.push_back(raster.at(region.row0 + tr * side + r,
                                                 region.col0 + tc * side + c));
            windows.push_back(std::move(s));
        }
    }
    return windows;
}

std::vector<WindowFit> fit_windows(const Raster& raster,
                                   const std::vector<RegionLabel>& regions,
                                   std::size_t side, int threads) {
    struct Job {
        const RegionLabel* region;
        Sample sample;
    };
    std::vector<Job> jobs;
    for (const auto& region : regions)
        for (auto& window : partition_windows(raster, region, side))
            jobs.push_back({&region, std::move(window)});

    std::vector<WindowFit> fits(jobs.size());
    auto fit_one = [&](std::size_t i) {
        WindowFit wf;
        wf.window_id = i;
        wf.region = jobs[i].region->name;
        wf.sample_size = jobs[i].sample.size();
        try {
            wf.fit = fit_ml(jobs[i].sample);
            wf.sane = in_sanity_band(wf.fit);
        } catch (const estimation_error&) {
            wf.sane = false;
        }
        fits[i] = std::move(wf);
    };
    if (threads == 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) fit_one(i);
    } else {
#ifdef _OPENMP
        const int n_threads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
        for (std::size_t i = 0; i < jobs.size(); ++i) fit_one(i);
#else
        for (std::size_t i = 0; i < jobs.size(); ++i) fit_one(i);
#endif
    }
    return fits;
}

PairMode PairMode::same(std::string region) {
    PairMode m;
    m.kind = Kind::same_region;
    m.region_a = std::move(region);
    return m;
}

PairMode PairMode::cross(std::string a, std::string b) {
    PairMode m;
    m.kind = Kind::cross_region;
    m.region_a = std::move(a);
    m.region_b = std::move(b);
    return m;
}

double RateTable::rate(std::size_t kind_index, std::size_t level_index) const {
    if (usable_pairs == 0) return 0.0;
    return static_cast<double>(rejections.at(kind_index).at(level_index))
           / static_cast<double>(usable_pairs);
}

RateTable pairwise_rejection_rates(const std::vector<WindowFit>& fits, const PairMode& mode,
                                   const std::vector<DistanceSpec>& kinds,
                                   const std::vector<double>& levels, int threads) {
    if (kinds.empty() || levels.empty())
        throw std::domain_error("pairwise_rejection_rates: needs kinds and levels");
    RateTable table;
    table.mode = mode;
    table.kinds = kinds;
    table.levels = levels;
    table.rejections.assign(kinds.size(), std::vector<std::size_t>(levels.size(), 0));

    const std::vector<Pair> pairs = select_pairs(fits, mode);
    table.total_pairs = pairs.size();
    for (const auto& wf : fits)
        if (!wf.sane && (wf.region == mode.region_a || wf.region == mode.region_b))
            table.excluded_windows += 1;

    std::vector<Pair> usable;
    usable.reserve(pairs.size());
    for (const auto& p : pairs)
        if (fits[p.i].sane && fits[p.j].sane) usable.push_back(p);
    table.usable_pairs = usable.size();
    if (usable.empty())
        throw std::domain_error("pairwise_rejection_rates: no usable pair of sane fits");
    table.sample_size = fits[usable.front().i].sample_size;

    const std::size_t n_levels = levels.size();
    auto rates_for = [&](const Pair& p, std::vector<std::size_t>& counts) {
        for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
            const double s = statistic(kinds[ki], fits[p.i].fit, fits[p.i].sample_size,
                                       fits[p.j].fit, fits[p.j].sample_size);
            const double pv = p_value(s, 2);
            for (std::size_t li = 0; li < n_levels; ++li)
                if (pv <= levels[li]) counts[ki * n_levels + li] += 1;
        }
    };

    std::vector<std::size_t> counts(kinds.size() * n_levels, 0);
    if (threads == 1) {
        for (const auto& p : usable) rates_for(p, counts);
    } else {
#ifdef _OPENMP
        const int n_threads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(n_threads)
        {
            std::vector<std::size_t> local(counts.size(), 0);
#pragma omp for schedule(dynamic, 16) nowait
            for (std::size_t i = 0; i < usable.size(); ++i) rates_for(usable[i], local);
#pragma omp critical
            for (std::size_t c = 0; c < counts.size(); ++c) counts[c] += local[c];
        }
#else
        for (const auto& p : usable) rates_for(p, counts);
#endif
    }
    for (std::size_t ki = 0; ki < kinds.size(); ++ki)
        for (std::size_t li = 0; li < n_levels; ++li)
            table.rejections[ki][li] = counts[ki * n_levels + li];
    return table;
}

std::string rate_table_csv(const RateTable& table, double looks, bool header) {
    std::ostringstream out;
    if (header)
        out << "scenario,alpha1,gamma1,alpha2,gamma2,L,N,kind,level,"
               "rejection_rate,valid_reps,attempted_reps,pairs\n";
    std::string scenario = table.mode.kind == PairMode::Kind::same_region
                               ? "same_region:" + table.mode.region_a
                               : "cross_region:" + table.mode.region_a + ":" +
                                     table.mode.region_b;
    char buf[256];
    for (std::size_t ki = 0; ki < table.kinds.size(); ++ki) {
        for (std::size_t li = 0; li < table.levels.size(); ++li) {
            std::snprintf(buf, sizeof(buf), "%s,,,,,%.17g,%zu,%s,%.17g,%.17g,%zu,%zu,%zu\n",
                          scenario.c_str(), looks, table.sample_size,
                          kind_name(table.kinds[ki].kind), table.levels[li],
                          table.rate(ki, li), table.usable_pairs, table.total_pairs,
                          table.usable_pairs);
            out << buf;
        }
    }
    return out.str();
}

} // namespace speckle
