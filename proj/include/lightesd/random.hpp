#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace lightesd {

/// Name of the generator recorded in reports so runs can be reproduced.
inline constexpr const char* kPrngName = "mt19937_64/splitmix64-stream";

/// Seeded generator with platform-independent output. The engine sequence
/// is fixed by the standard; the transforms to uniform, normal and bounded
/// integers are implemented here instead of relying on the unspecified
/// standard distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();
    double uniform(double lo, double hi);
    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound);
    /// Standard normal (Box-Muller, one variate cached).
    double normal();

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace lightesd
