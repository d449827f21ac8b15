#ifndef FKLAB_RNG_HPP
#define FKLAB_RNG_HPP

#include <cstdint>

namespace fklab {

// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// Key for an independent stream identified by three coordinates, e.g.
// (realization, replica, role). Streams with distinct coordinates are
// decorrelated whatever order the workers touch them in.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a,
                                   std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ULL);
    h = mix64(h ^ (a + 0xC2B2AE3D27D4EB4FULL));
    h = mix64(h ^ (b + 0x165667B19E3779F9ULL));
    h = mix64(h ^ (c + 0xD6E8FEB86659FD93ULL));
    return h;
}

// Inverse of the standard normal CDF, Wichura's algorithm AS241 (PPND16),
// accurate to about 1e-16 relative over (0,1).
double inverse_normal_cdf(double p);

// Counter-based generator: output n is a pure function of (key, n), so a
// stream can be replayed or sharded without carrying mutable state around.
class CounterRng {
public:
    CounterRng() = default;
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() { return mix64(key_ + 0x9E3779B97F4A7C15ULL * ++n_); }

    // uniform on the open interval (0,1); never returns an endpoint, so it
    // is safe to push through the inverse CDF
    double next_uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_normal() { return inverse_normal_cdf(next_uniform01()); }

private:
    std::uint64_t key_ = 0;
    std::uint64_t n_ = 0;
};

} // namespace fklab

#endif
