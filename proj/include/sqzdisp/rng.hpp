#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace sqzdisp::rng {

/// SplitMix64 finalizer; used to derive independent stream seeds.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed of sub-stream `index` of `seed`. Streams are keyed by index, not by
/// the thread that consumes them, so results do not depend on thread count.
[[nodiscard]] constexpr std::uint64_t split(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(seed ^ mix64(index + 0x632BE59BD9B4E019ull));
}

/// FNV-1a over a label, for naming streams ("fig6/horizontal").
[[nodiscard]] constexpr std::uint64_t label_hash(std::string_view label) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Portable random stream: mt19937_64 (bit-exact across standard libraries)
/// with hand-written transforms, since std distributions are
/// implementation-defined and would break golden files across toolchains.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal (Box-Muller, caches the second variate).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace sqzdisp::rng
