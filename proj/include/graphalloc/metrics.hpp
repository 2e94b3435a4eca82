#pragma once

// Multi-objective metrics in the maximization orientation.

#include "graphalloc/error.hpp"
#include "graphalloc/objective.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace graphalloc {

inline constexpr std::size_t kMaxExactHypervolumeObjectives = 8;

// a >= b component-wise with at least one strict inequality.
inline bool dominates(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "comparing vectors of size " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) {
            return false;
        }
        strict = strict || a[i] > b[i];
    }
    return strict;
}

// Indices (ascending) of the points no other point dominates. Identical points never
// dominate each other, so duplicates are all kept.
inline std::vector<std::size_t> pareto_filter(std::span<const ObjectiveVector> points)
{
    if (points.empty()) {
        throw Error(ErrorCode::EmptyInput, "pareto_filter of an empty set");
    }
    const std::size_t dim = points.front().size();
    for (const auto& p : points) {
        if (p.size() != dim) {
            throw Error(ErrorCode::DimensionMismatch, "mixed objective dimensions");
        }
    }
    // A dominator is lexicographically greater than what it dominates, so scanning in
    // lexicographically descending order only ever compares against kept points.
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t { 0 });
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(points[b].begin(), points[b].end(), points[a].begin(), points[a].end());
    });
    std::vector<std::size_t> kept;
    for (std::size_t idx : order) {
        const bool dominated = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) { return dominates(points[k], points[idx]); });
        if (!dominated) {
            kept.push_back(idx);
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

inline std::vector<bool> dominated_flags(std::span<const ObjectiveVector> points)
{
    std::vector<bool> flags(points.size(), true);
    for (std::size_t i : pareto_filter(points)) {
        flags[i] = false;
    }
    return flags;
}

namespace detail {

    using PointSet = std::vector<ObjectiveVector>;

    inline PointSet nondominated(const PointSet& pts)
    {
        if (pts.empty()) {
            return {};
        }
        PointSet out;
        for (std::size_t i : pareto_filter(pts)) {
            out.push_back(pts[i]);
        }
        // exact duplicates add no volume
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    inline double box_volume(const ObjectiveVector& p)
    {
        double v = 1.0;
        for (double x : p) {
            v *= x;
        }
        return v;
    }

    // 2-D sweep over a non-dominated set, reference at the origin.
    inline double hv2d(PointSet pts)
    {
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a[0] > b[0]; });
        double volume = 0.0;
        double covered_y = 0.0;
        for (const auto& p : pts) {
            if (p[1] > covered_y) {
                volume += p[0] * (p[1] - covered_y);
                covered_y = p[1];
            }
        }
        return volume;
    }

    inline double wfg(PointSet pts);

    // Volume dominated by p and by none of `rest`.
    inline double exclusive_hv(const ObjectiveVector& p, std::span<const ObjectiveVector> rest)
    {
        PointSet limited;
        limited.reserve(rest.size());
        for (const auto& q : rest) {
            ObjectiveVector l(p.size());
            for (std::size_t k = 0; k < p.size(); ++k) {
                l[k] = std::min(p[k], q[k]);
            }
            limited.push_back(std::move(l));
        }
        return box_volume(p) - wfg(nondominated(limited));
    }

    // WFG recursion over a non-dominated set with origin reference.
    inline double wfg(PointSet pts)
    {
        if (pts.empty()) {
            return 0.0;
        }
        const std::size_t dim = pts.front().size();
        if (pts.size() == 1) {
            return box_volume(pts.front());
        }
        if (dim == 1) {
            double m = 0.0;
            for (const auto& p : pts) {
                m = std::max(m, p[0]);
            }
            return m;
        }
        if (dim == 2) {
            return hv2d(std::move(pts));
        }
        // best-first in the last objective keeps later limit sets small
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.back() > b.back(); });
        double volume = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            volume += exclusive_hv(pts[i], std::span<const ObjectiveVector>(pts).subspan(i + 1));
        }
        return volume;
    }

} // namespace detail

// Lebesgue measure of the union of boxes [reference, x] over the set (exact).
inline double hypervolume(std::span<const ObjectiveVector> points, std::span<const double> reference = {})
{
    if (points.empty()) {
        return 0.0;
    }
    const std::size_t dim = points.front().size();
    if (dim > kMaxExactHypervolumeObjectives) {
        throw Error(ErrorCode::TooManyObjectives, "exact hypervolume supports at most " + std::to_string(kMaxExactHypervolumeObjectives) + " objectives, got " + std::to_string(dim));
    }
    if (!reference.empty() && reference.size() != dim) {
        throw Error(ErrorCode::DimensionMismatch, "reference point dimension");
    }
    detail::PointSet shifted;
    shifted.reserve(points.size());
    for (const auto& p : points) {
        if (p.size() != dim) {
            throw Error(ErrorCode::DimensionMismatch, "mixed objective dimensions");
        }
        ObjectiveVector s(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            const double r = reference.empty() ? 0.0 : reference[k];
            if (p[k] < r) {
                throw Error(ErrorCode::PointBelowReference, "component " + std::to_string(p[k]) + " below reference " + std::to_string(r));
            }
            s[k] = p[k] - r;
        }
        shifted.push_back(std::move(s));
    }
    return detail::wfg(detail::nondominated(shifted));
}

inline constexpr double kRatioTolerance = 1e-9;

inline double hv_ratio(std::span<const ObjectiveVector> predicted, double ideal_hv)
{
    if (!(ideal_hv > 0.0)) {
        throw Error(ErrorCode::ZeroIdealHV, "ideal hypervolume " + std::to_string(ideal_hv));
    }
    const double ratio = hypervolume(predicted) / ideal_hv;
    if (ratio > 1.0 + kRatioTolerance) {
        throw Error(ErrorCode::InvalidSpec, "predicted hypervolume exceeds the ideal (ratio " + std::to_string(ratio) + "); the front does not match this problem");
    }
    return ratio;
}

// Proportion of the set that is non-dominated within the set.
inline double pnds(std::span<const ObjectiveVector> points)
{
    const auto kept = pareto_filter(points);
    return static_cast<double>(kept.size()) / static_cast<double>(points.size());
}

// Average (fractional) ranks, 1-based.
inline std::vector<double> average_ranks(std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t { 0 });
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = r;
        }
        i = j + 1;
    }
    return ranks;
}

// Spearman rank correlation: Pearson correlation of average ranks. Two constant
// sequences are treated as perfectly concordant (1.0); exactly one constant sequence
// is an error.
inline double spearman(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        throw Error(ErrorCode::LengthMismatch, std::to_string(x.size()) + " vs " + std::to_string(y.size()));
    }
    if (x.size() < 2) {
        throw Error(ErrorCode::LengthMismatch, "Spearman needs at least two observations");
    }
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(rx.size());
    const double mean = (n + 1.0) / 2.0; // mean of ranks is invariant under ties
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 && syy == 0.0) {
        return 1.0;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw Error(ErrorCode::DegenerateAfterRanking, "one sequence has zero rank variance");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// Per-sweep score: 1 if every value is identical, else (Spearman(J, sorted(J)) + 1) / 2.
inline double sweep_order_score(std::span<const double> values)
{
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
        return 1.0;
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return 0.5 * (spearman(values, sorted) + 1.0);
}

} // namespace graphalloc
