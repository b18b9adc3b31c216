#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "speckle/distances.hpp"
#include "speckle/estimation.hpp"
#include "speckle/g0_model.hpp"

namespace speckle {

/// Positive-intensity raster with a shared looks value.
struct Raster {
    std::size_t rows = 0;
    std::size_t cols = 0;
    double looks = 1.0;
    std::vector<double> pixels; ///< row-major, rows*cols entries

    double at(std::size_t r, std::size_t c) const { return pixels[r * cols + c]; }
    void validate() const;
};

/// Axis-aligned rectangular region inside a raster (0-based offsets).
struct RegionLabel {
    std::string name;
    std::size_t row0 = 0;
    std::size_t col0 = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
};

/// One fitted window with its sanity flag.
struct WindowFit {
    std::size_t window_id = 0;
    std::string region;
    FitResult fit;
    std::size_t sample_size = 0;
    bool sane = false;
};

/// Text format: first line "rows cols looks", then rows*cols positive reals in
/// row-major order. A looks override replaces the header value when given.
Raster load_raster(const std::filesystem::path& path,
                   std::optional<double> looks_override = std::nullopt);
void save_raster(const Raster& raster, const std::filesystem::path& path);

/// Region file: one "name row0 col0 height width" per line; '#' comments.
std::vector<RegionLabel> load_regions(const std::filesystem::path& path);

/// Disjoint side x side windows tiled from the region's top-left corner;
/// partial trailing strips are discarded.
std::vector<Sample> partition_windows(const Raster& raster, const RegionLabel& region,
                                      std::size_t side = 7);

/// Fits every window of every region; flags fits outside the sanity band
/// alpha in [-50, -0.01], gamma in (0, 1e12].
std::vector<WindowFit> fit_windows(const Raster& raster,
                                   const std::vector<RegionLabel>& regions,
                                   std::size_t side = 7, int threads = 0);

/// Pair selection: all unordered pairs inside one region, or all cross pairs
/// between two regions.
struct PairMode {
    enum class Kind { same_region, cross_region } kind = Kind::same_region;
    std::string region_a;
    std::string region_b;

    static PairMode same(std::string region);
    static PairMode cross(std::string a, std::string b);
};

/// Rejection rates over usable (both-sane) pairs per (kind, level).
struct RateTable {
    PairMode mode;
    std::vector<DistanceSpec> kinds;
    std::vector<double> levels;
    std::vector<std::vector<std::size_t>> rejections; ///< [kind][level]
    std::size_t usable_pairs = 0;                     ///< the "P" column
    std::size_t total_pairs = 0;
    std::size_t excluded_windows = 0;
    std::size_t sample_size = 0;

    double rate(std::size_t kind_index, std::size_t level_index) const;
};

RateTable pairwise_rejection_rates(const std::vector<WindowFit>& fits, const PairMode& mode,
                                   const std::vector<DistanceSpec>& kinds,
                                   const std::vector<double>& levels, int threads = 0);

/// CSV in the Monte Carlo schema plus a trailing "pairs" column.
std::string rate_table_csv(const RateTable& table, double looks, bool header = true);

} // namespace speckle
