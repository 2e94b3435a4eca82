#pragma once

// Objective normalization against a moving ideal point (nadir fixed at the origin) and
// the scalarizers used to turn a normalized objective vector into a scalar reward.
// Every scalarizer is a reward: larger is better, maximized at the ideal point z* = 1.

#include "graphalloc/error.hpp"
#include "graphalloc/objective.hpp"
#include "graphalloc/preferences.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace graphalloc {

inline constexpr double kIdealFloor = 1e-6;

class Normalizer {
public:
    Normalizer() = default;

    explicit Normalizer(std::size_t num_objectives, double floor = kIdealFloor)
        : ideal_(num_objectives, floor)
    {
    }

    // Starts from a known ideal point (component-wise floored).
    static Normalizer from_ideal(std::span<const double> ideal, double floor = kIdealFloor)
    {
        Normalizer n(ideal.size(), floor);
        for (std::size_t i = 0; i < ideal.size(); ++i) {
            n.ideal_[i] = std::max(floor, ideal[i]);
        }
        return n;
    }

    [[nodiscard]] std::size_t size() const noexcept { return ideal_.size(); }
    [[nodiscard]] const std::vector<double>& ideal() const noexcept { return ideal_; }

    // Raises the ideal point to cover `objectives`, then returns objectives / ideal.
    ObjectiveVector normalize(std::span<const double> objectives)
    {
        observe(objectives);
        return scaled(objectives);
    }

    void observe(std::span<const double> objectives)
    {
        check(objectives);
        for (std::size_t i = 0; i < ideal_.size(); ++i) {
            ideal_[i] = std::max(ideal_[i], objectives[i]);
        }
    }

    // objectives / ideal without updating the ideal point.
    [[nodiscard]] ObjectiveVector scaled(std::span<const double> objectives) const
    {
        check(objectives);
        ObjectiveVector out(objectives.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = objectives[i] / ideal_[i];
        }
        return out;
    }

    friend Normalizer merge(const Normalizer& a, const Normalizer& b)
    {
        if (a.size() != b.size()) {
            throw Error(ErrorCode::DimensionMismatch, "merging normalizers of size " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
        }
        Normalizer out = a;
        for (std::size_t i = 0; i < out.ideal_.size(); ++i) {
            out.ideal_[i] = std::max(a.ideal_[i], b.ideal_[i]);
        }
        return out;
    }

    friend bool operator==(const Normalizer&, const Normalizer&) = default;

private:
    void check(std::span<const double> objectives) const
    {
        if (objectives.size() != ideal_.size()) {
            throw Error(ErrorCode::DimensionMismatch, "objective vector has " + std::to_string(objectives.size()) + " components, normalizer " + std::to_string(ideal_.size()));
        }
        for (double x : objectives) {
            if (x < 0.0 || std::isnan(x)) {
                throw Error(ErrorCode::NegativeObjective, "objective component " + std::to_string(x));
            }
        }
    }

    std::vector<double> ideal_;
};

inline Normalizer merge_normalizers(const Normalizer& a, const Normalizer& b) { return merge(a, b); }

enum class ScalarizerMethod { WeightedSum, Tchebycheff, SmoothTchebycheff, PBI };

constexpr std::string_view to_string(ScalarizerMethod m) noexcept
{
    switch (m) {
    case ScalarizerMethod::WeightedSum: return "weighted-sum";
    case ScalarizerMethod::Tchebycheff: return "tchebycheff";
    case ScalarizerMethod::SmoothTchebycheff: return "smooth-tchebycheff";
    case ScalarizerMethod::PBI: return "pbi";
    }
    return "?";
}

inline ScalarizerMethod parse_scalarizer_method(std::string_view name)
{
    for (auto m : { ScalarizerMethod::WeightedSum, ScalarizerMethod::Tchebycheff, ScalarizerMethod::SmoothTchebycheff, ScalarizerMethod::PBI }) {
        if (name == to_string(m)) {
            return m;
        }
    }
    throw Error(ErrorCode::InvalidSpec, "unknown scalarizer '" + std::string(name) + "'");
}

struct ScalarizerSpec {
    ScalarizerMethod method = ScalarizerMethod::SmoothTchebycheff;
    double mu = 0.1;    // SmoothTchebycheff
    double theta = 5.0; // PBI

    void validate() const
    {
        if (method == ScalarizerMethod::SmoothTchebycheff && !(mu > 0.0)) {
            throw Error(ErrorCode::NonPositiveMu, "mu = " + std::to_string(mu));
        }
        if (method == ScalarizerMethod::PBI && !(theta >= 0.0)) {
            throw Error(ErrorCode::InvalidSpec, "theta = " + std::to_string(theta));
        }
    }

    friend bool operator==(const ScalarizerSpec&, const ScalarizerSpec&) = default;
};

inline nlohmann::json to_json(const ScalarizerSpec& spec)
{
    nlohmann::json j;
    j["method"] = std::string(to_string(spec.method));
    if (spec.method == ScalarizerMethod::SmoothTchebycheff) {
        j["mu"] = spec.mu;
    }
    if (spec.method == ScalarizerMethod::PBI) {
        j["theta"] = spec.theta;
    }
    return j;
}

namespace detail {

    inline double weighted_gap(double w, double jhat) { return w * (1.0 - jhat); }

} // namespace detail

inline double scalarize(std::span<const double> normalized, const PreferenceVector& w, const ScalarizerSpec& spec)
{
    if (normalized.size() != w.size()) {
        throw Error(ErrorCode::DimensionMismatch, "normalized objectives have " + std::to_string(normalized.size()) + " components, preference " + std::to_string(w.size()));
    }
    const std::size_t n = normalized.size();
    switch (spec.method) {
    case ScalarizerMethod::WeightedSum: {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += w[i] * normalized[i];
        }
        return s;
    }
    case ScalarizerMethod::Tchebycheff: {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            worst = std::max(worst, detail::weighted_gap(w[i], normalized[i]));
        }
        return -worst;
    }
    case ScalarizerMethod::SmoothTchebycheff: {
        if (!(spec.mu > 0.0)) {
            throw Error(ErrorCode::NonPositiveMu, "mu = " + std::to_string(spec.mu));
        }
        // mu * log sum exp(g_i / mu), shifted by max g for stability
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            m = std::max(m, detail::weighted_gap(w[i], normalized[i]));
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += std::exp((detail::weighted_gap(w[i], normalized[i]) - m) / spec.mu);
        }
        return -(m + spec.mu * std::log(sum));
    }
    case ScalarizerMethod::PBI: {
        double norm_w = 0.0;
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            norm_w += w[i] * w[i];
            dot += (1.0 - normalized[i]) * w[i];
        }
        norm_w = std::sqrt(norm_w);
        const double d1 = std::abs(dot) / norm_w;
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = (1.0 - normalized[i]) - d1 * w[i] / norm_w;
            d2 += r * r;
        }
        return -(d1 + spec.theta * std::sqrt(d2));
    }
    }
    return 0.0;
}

} // namespace graphalloc
