#pragma once

#include <cstdint>

namespace stablemc {

/// Deterministic pseudo-random stream: xoshiro256++ state seeded through a
/// SplitMix64 chain from (seed, index).  The same (seed, index) pair yields
/// the same draw sequence on every platform (all integer arithmetic plus an
/// explicit uint64 -> double conversion).  Distinct indices give
/// statistically independent streams, so one stream per Monte Carlo path
/// keeps results independent of how paths are scheduled across workers.
///
/// A stream is single-owner: it may be created on one thread and consumed on
/// another, but never shared concurrently.
class RngStream {
public:
    static RngStream derive(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64();

    /// Uniform draw on (0, 1]; never returns 0, so log(u) is always finite.
    double next_uniform();

    /// Standard normal draw (Box-Muller; the spare deviate is cached).
    double next_normal();

private:
    RngStream() = default;

    std::uint64_t s_[4] = {};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Well-mixed 64-bit sub-seed for (seed, tag) pairs, used where a whole new
/// seed (rather than a stream) is needed, e.g. one seed per study row.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace stablemc
