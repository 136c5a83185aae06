#include "stablemc/rng.hpp"

#include <cmath>
#include <numbers>

namespace stablemc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream RngStream::derive(std::uint64_t seed, std::uint64_t index) {
    // SplitMix64 chain started at a mixed seed offset by the stream index;
    // the pre-mix keeps adjacent seeds from aliasing adjacent indices.
    std::uint64_t z = mix64(seed ^ 0x6A09E667F3BCC909ull) + kGolden * (index + 1);
    RngStream r;
    for (auto& s : r.s_) {
        z += kGolden;
        s = mix64(z);
    }
    if ((r.s_[0] | r.s_[1] | r.s_[2] | r.s_[3]) == 0) r.s_[0] = kGolden;
    return r;
}

std::uint64_t RngStream::next_u64() {
    // xoshiro256++
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::next_uniform() {
    // 53-bit mantissa shifted into (0, 1].
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(mix64(seed ^ 0x243F6A8885A308D3ull) + kGolden * (tag + 1));
}

}  // namespace stablemc
