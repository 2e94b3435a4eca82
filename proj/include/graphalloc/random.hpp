#pragma once

// Portable random streams. The engine is std::mt19937_64, whose output sequence
// is fixed by the C++ standard; every distribution below is implemented here
// rather than taken from <random>, whose distributions are implementation-defined.
//
//   uniform01     : top 53 bits of one engine draw, scaled by 2^-53 -> [0, 1)
//   uniform_int   : rejection sampling on the engine output (no modulo bias)
//   normal        : Marsaglia polar method, second variate cached
//   gamma(shape)  : Marsaglia-Tsang; shape < 1 boosted by U^(1/shape)
//   seed mixing   : SplitMix64 finalizer

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>

namespace graphalloc {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    return splitmix64(seed ^ splitmix64(stream));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0)
        : engine_(seed)
    {
    }

    std::uint64_t next_u64() { return engine_(); }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Inclusive range [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
    {
        if (hi <= lo) {
            return lo;
        }
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) { // full 64-bit range
            return static_cast<std::int64_t>(engine_());
        }
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % span);
        std::uint64_t x = engine_();
        while (x >= limit) {
            x = engine_();
        }
        return lo + static_cast<std::int64_t>(x % span);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    double normal()
    {
        if (cached_normal_) {
            double v = *cached_normal_;
            cached_normal_.reset();
            return v;
        }
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        cached_normal_ = v * factor;
        return u * factor;
    }

    double gamma(double shape)
    {
        if (shape < 1.0) {
            double u = uniform01();
            while (u == 0.0) {
                u = uniform01();
            }
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = 0.0;
            double v = 0.0;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) {
                return d * v;
            }
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
                return d * v;
            }
        }
    }

    template <typename T>
    void shuffle(std::span<T> values)
    {
        for (std::size_t i = values.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    std::optional<double> cached_normal_;
};

} // namespace graphalloc
