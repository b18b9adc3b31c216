#pragma once

#include <cstdint>

namespace speckle {

/// Deterministic 64-bit generator (xoshiro256++) with gamma and normal draws.
/// Seeding goes through splitmix64, so any 64-bit value is a good seed.
/// Parallel callers derive disjoint streams with for_stream().
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Stateless derivation of an independent stream from (master, stream, substream).
    static Rng for_stream(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t substream = 0);

    std::uint64_t next_u64();

    /// Uniform on the open interval (0,1), 53-bit resolution.
    double uniform01();

    /// Standard normal (Marsaglia polar, one spare cached).
    double normal();

    /// Gamma(shape, rate 1) via Marsaglia-Tsang squeeze.
    double gamma(double shape);

private:
    std::uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace speckle
