#pragma once

#include "graphalloc/error.hpp"
#include "graphalloc/random.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace graphalloc {

inline constexpr double kSimplexTolerance = 1e-9;

// A point on the probability simplex: 0 <= w_i <= 1, sum w_i = 1.
class PreferenceVector {
public:
    PreferenceVector() = default;

    explicit PreferenceVector(std::vector<double> weights)
        : w_(std::move(weights))
    {
        if (w_.empty()) {
            throw Error(ErrorCode::InvalidPreference, "empty preference vector");
        }
        double sum = 0.0;
        for (double x : w_) {
            if (!std::isfinite(x) || x < -kSimplexTolerance || x > 1.0 + kSimplexTolerance) {
                throw Error(ErrorCode::InvalidPreference, "component outside [0, 1]");
            }
            sum += x;
        }
        if (std::abs(sum - 1.0) > kSimplexTolerance) {
            throw Error(ErrorCode::InvalidPreference, "components sum to " + std::to_string(sum));
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return w_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return w_[i]; }
    [[nodiscard]] std::span<const double> values() const noexcept { return w_; }
    [[nodiscard]] const std::vector<double>& vector() const noexcept { return w_; }

    friend bool operator==(const PreferenceVector&, const PreferenceVector&) = default;

private:
    std::vector<double> w_;
};

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

inline std::uint64_t das_dennis_count(std::size_t num_objectives, std::size_t divisions)
{
    return binomial(divisions + num_objectives - 1, num_objectives - 1);
}

// Simplex lattice {k/H : sum k = H}, lexicographically ascending.
inline std::vector<PreferenceVector> das_dennis(std::size_t num_objectives, std::size_t divisions)
{
    if (num_objectives < 2 || divisions < 1) {
        throw Error(ErrorCode::InvalidSpec, "das_dennis needs N >= 2 and H >= 1");
    }
    std::vector<PreferenceVector> out;
    out.reserve(das_dennis_count(num_objectives, divisions));
    std::vector<std::size_t> counts(num_objectives, 0);
    const auto h = static_cast<double>(divisions);

    auto recurse = [&](auto&& self, std::size_t dim, std::size_t remaining) -> void {
        if (dim + 1 == num_objectives) {
            counts[dim] = remaining;
            std::vector<double> w(num_objectives);
            for (std::size_t i = 0; i < num_objectives; ++i) {
                w[i] = static_cast<double>(counts[i]) / h;
            }
            out.emplace_back(std::move(w));
            return;
        }
        for (std::size_t k = 0; k <= remaining; ++k) {
            counts[dim] = k;
            self(self, dim + 1, remaining - k);
        }
    };
    recurse(recurse, 0, divisions);
    return out;
}

// Default lattice resolution: H = 99 / 12 / 6 / 5 for N = 2 / 3 / 4 / 5; beyond that the
// largest H whose lattice has at most 250 points (at least 1).
inline std::size_t default_divisions(std::size_t num_objectives)
{
    switch (num_objectives) {
    case 2: return 99;
    case 3: return 12;
    case 4: return 6;
    case 5: return 5;
    default: break;
    }
    std::size_t h = 1;
    while (das_dennis_count(num_objectives, h + 1) <= 250) {
        ++h;
    }
    return h;
}

// Symmetric Dirichlet(alpha, ..., alpha) via normalized gamma variates.
inline PreferenceVector sample_dirichlet(std::size_t num_objectives, double alpha, Rng& rng)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw Error(ErrorCode::NonPositiveAlpha, "alpha = " + std::to_string(alpha));
    }
    if (num_objectives == 0) {
        throw Error(ErrorCode::InvalidSpec, "Dirichlet over zero components");
    }
    std::vector<double> g(num_objectives);
    double sum = 0.0;
    for (auto& x : g) {
        x = rng.gamma(alpha);
        sum += x;
    }
    if (!(sum > 0.0)) {
        // every variate underflowed (tiny alpha): the limit distribution is a random vertex
        std::fill(g.begin(), g.end(), 0.0);
        g[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(num_objectives) - 1))] = 1.0;
        return PreferenceVector(std::move(g));
    }
    for (auto& x : g) {
        x /= sum;
    }
    return PreferenceVector(std::move(g));
}

struct SweepSet {
    std::size_t objective = 0;
    std::size_t repetition = 0;
    std::vector<double> off_axis_direction; // N-1 weights over the other objectives
    std::vector<PreferenceVector> preferences;
};

// One sweep per (objective i, repetition j): w_i = k/(n_step-1) for k = 0..n_step-1 and
// the other components (1 - w_i) * d, where d is a Dirichlet direction drawn once per
// repetition. Order: objective-major, repetition-minor.
inline std::vector<SweepSet> build_sweeps(std::size_t num_objectives, std::size_t n_samp, std::size_t n_step, double alpha, Rng& rng)
{
    if (num_objectives < 2 || n_samp < 1 || n_step < 2) {
        throw Error(ErrorCode::InvalidSpec, "build_sweeps needs N >= 2, n_samp >= 1, n_step >= 2");
    }
    if (!(alpha > 0.0)) {
        throw Error(ErrorCode::NonPositiveAlpha, "alpha = " + std::to_string(alpha));
    }
    std::vector<SweepSet> sweeps;
    sweeps.reserve(num_objectives * n_samp);
    for (std::size_t i = 0; i < num_objectives; ++i) {
        for (std::size_t j = 0; j < n_samp; ++j) {
            SweepSet s;
            s.objective = i;
            s.repetition = j;
            if (num_objectives == 2) {
                s.off_axis_direction = { 1.0 };
            } else {
                s.off_axis_direction = sample_dirichlet(num_objectives - 1, alpha, rng).vector();
            }
            for (std::size_t k = 0; k < n_step; ++k) {
                const double wi = static_cast<double>(k) / static_cast<double>(n_step - 1);
                std::vector<double> w(num_objectives);
                std::size_t d = 0;
                for (std::size_t c = 0; c < num_objectives; ++c) {
                    w[c] = (c == i) ? wi : (1.0 - wi) * s.off_axis_direction[d++];
                }
                s.preferences.emplace_back(std::move(w));
            }
            sweeps.push_back(std::move(s));
        }
    }
    return sweeps;
}

} // namespace graphalloc
