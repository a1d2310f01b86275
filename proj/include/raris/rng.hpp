#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace raris {

/// splitmix64 finalizer; used to derive independent per-replicate seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for stream `index` of a run with master seed `seed`. Streams with
/// different (seed, index) pairs are statistically independent for practical
/// purposes, and the mapping does not depend on how work is scheduled.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Reserved stream indices (replicates use 0..L-1).
inline constexpr std::uint64_t kMixtureStream = 0xffffffffffff0001ULL;
inline constexpr std::uint64_t kScanStream = 0xffffffffffff0002ULL;

/// Random source handed to every sampler. Wraps a 64-bit Mersenne twister with
/// the handful of base variates the library needs.
class Rng {
public:
    using engine_type = std::mt19937_64;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(stream_seed(seed, stream)) {}

    /// Uniform on the open interval (0, 1).
    double uniform() {
        // 53 random bits, shifted off zero.
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() { return normal_(engine_); }
    double normal(double mean, double sd) { return mean + sd * normal_(engine_); }

    /// Exponential with the given rate.
    double exponential(double rate) { return -std::log(uniform()) / rate; }

    double gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(engine_); }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    engine_type& engine() { return engine_; }

private:
    engine_type engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace raris
