#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace lhv::detail {

// mt19937_64 + Box-Muller. std::normal_distribution is implementation-defined,
// so rolling the transform keeps streams identical across standard libraries.
class NormalRng {
public:
    explicit NormalRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in (0, 1], 53-bit resolution.
    double uniform() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    double gauss()
    {
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

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// SplitMix64 finalizer; derives independent per-chunk seeds from (seed, index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace lhv::detail
