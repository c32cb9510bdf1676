#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace goldilocks {

/// Deterministic 64-bit generator with named streams. Every random draw in
/// the library goes through this so that runs reproduce bit-for-bit across
/// platforms and reimplementations. The scheme is fixed:
///
///   fnv1a64(name): offset 0xcbf29ce484222325, prime 0x100000001b3
///   stream(seed, name): state = splitmix64_mix(seed XOR fnv1a64(name))
///   next_u64(): splitmix64 (state += 0x9e3779b97f4a7c15, then mixed)
///   next_unit(): (next_u64() >> 11) * 2^-53, uniform in [0, 1)
///   uniform(lo, hi): lo + (hi - lo) * next_unit()
///   gaussian(): Box-Muller; u1 in (0,1], u2 in [0,1);
///     returns sqrt(-2 ln u1) * cos(2 pi u2), then the sin partner.
class Rng {
public:
    explicit Rng(std::uint64_t state) : state_(state) {}

    static std::uint64_t fnv1a64(std::string_view name) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (char ch : name) {
            h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(ch));
            h *= 0x100000001b3ull;
        }
        return h;
    }

    /// Derives an independent stream from a user seed and a stream name
    /// ("weights", "dropout", "data", ...).
    static Rng stream(std::uint64_t seed, std::string_view name) {
        return Rng(mix(seed ^ fnv1a64(name)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - next_unit();  // (0, 1], keeps log finite
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace goldilocks
