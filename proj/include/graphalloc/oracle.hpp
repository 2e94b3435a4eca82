#pragma once

// Brute-force oracle over the feasible production set, and the baseline policies.
//
// A production vector P is feasible when every resource budget covers the demands
// that use it (sum over j with i in R'(D_j) of P_j <= budget_i) and the horizon covers
// the total (sum P_j <= T, since each step adds at most one unit).

#include "graphalloc/error.hpp"
#include "graphalloc/metrics.hpp"
#include "graphalloc/model.hpp"
#include "graphalloc/policy.hpp"
#include "graphalloc/random.hpp"
#include "graphalloc/scalarization.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace graphalloc {

inline constexpr std::size_t kDefaultSizeLimit = 2'000'000;

class FeasibleSet {
public:
    FeasibleSet() = default;
    explicit FeasibleSet(std::size_t num_demands)
        : num_demands_(num_demands)
    {
    }

    [[nodiscard]] std::size_t size() const noexcept { return num_demands_ == 0 ? 0 : flat_.size() / num_demands_; }
    [[nodiscard]] std::size_t num_demands() const noexcept { return num_demands_; }

    [[nodiscard]] std::span<const Units> operator[](std::size_t k) const
    {
        return std::span<const Units>(flat_).subspan(k * num_demands_, num_demands_);
    }

    [[nodiscard]] ProductionVector vector(std::size_t k) const
    {
        auto s = (*this)[k];
        return ProductionVector(s.begin(), s.end());
    }

    void push_back(std::span<const Units> p) { flat_.insert(flat_.end(), p.begin(), p.end()); }
    void reserve(std::size_t n) { flat_.reserve(n * num_demands_); }

private:
    std::size_t num_demands_ = 0;
    std::vector<Units> flat_;
};

namespace detail {

    // Depth-first walk over feasible vectors in lexicographic order; `visit` returns
    // false to stop early.
    template <typename Visit>
    bool walk_feasible(const ProblemConfig& config, std::vector<Units>& remaining, Units horizon_left, std::size_t demand, ProductionVector& current, Visit& visit)
    {
        if (demand == config.num_demands()) {
            return visit(current);
        }
        Units cap = horizon_left;
        for (std::size_t i : config.dependencies[demand]) {
            cap = std::min(cap, remaining[i]);
        }
        for (Units p = 0; p <= cap; ++p) {
            current[demand] = p;
            for (std::size_t i : config.dependencies[demand]) {
                remaining[i] -= p;
            }
            const bool go_on = walk_feasible(config, remaining, horizon_left - p, demand + 1, current, visit);
            for (std::size_t i : config.dependencies[demand]) {
                remaining[i] += p;
            }
            if (!go_on) {
                current[demand] = 0;
                return false;
            }
        }
        current[demand] = 0;
        return true;
    }

    template <typename Visit>
    void for_each_feasible(const ProblemConfig& config, Visit visit)
    {
        std::vector<Units> remaining;
        for (const auto& r : config.resources) {
            remaining.push_back(r.budget);
        }
        ProductionVector current(config.num_demands(), 0);
        walk_feasible(config, remaining, config.horizon, 0, current, visit);
    }

} // namespace detail

inline bool is_feasible(const ProblemConfig& config, std::span<const Units> production)
{
    if (production.size() != config.num_demands()) {
        return false;
    }
    std::vector<Units> used(config.num_resources(), 0);
    Units total = 0;
    for (std::size_t j = 0; j < production.size(); ++j) {
        if (production[j] < 0) {
            return false;
        }
        total += production[j];
        for (std::size_t i : config.dependencies[j]) {
            used[i] += production[j];
        }
    }
    for (std::size_t i = 0; i < used.size(); ++i) {
        if (used[i] > config.resources[i].budget) {
            return false;
        }
    }
    return total <= config.horizon;
}

// Counts feasible vectors, stopping once the count exceeds `limit`.
inline std::size_t count_feasible(const ProblemConfig& config, std::size_t limit)
{
    std::size_t n = 0;
    detail::for_each_feasible(config, [&](const ProductionVector&) { return ++n <= limit; });
    return n;
}

inline FeasibleSet enumerate_feasible(const ProblemConfig& config, std::size_t size_limit = kDefaultSizeLimit)
{
    const auto n = count_feasible(config, size_limit);
    if (n > size_limit) {
        throw Error(ErrorCode::TooLarge, "problem '" + config.problem_id + "' has more than " + std::to_string(size_limit) + " feasible production vectors");
    }
    FeasibleSet set(config.num_demands());
    set.reserve(n);
    detail::for_each_feasible(config, [&](const ProductionVector& p) {
        set.push_back(p);
        return true;
    });
    return set;
}

struct IdealFront {
    std::string problem_id;
    std::vector<ProductionVector> productions;
    std::vector<ObjectiveVector> points;
    double hv = 0.0;
    std::size_t feasible_count = 0;
    ObjectiveVector ideal_point; // per-component maxima over the feasible set
};

inline IdealFront ideal_front(const ProblemConfig& config, std::size_t size_limit = kDefaultSizeLimit)
{
    const auto feasible = enumerate_feasible(config, size_limit);
    std::vector<ObjectiveVector> images;
    images.reserve(feasible.size());
    IdealFront front;
    front.problem_id = config.problem_id;
    front.feasible_count = feasible.size();
    front.ideal_point.assign(config.num_objectives(), 0.0);
    for (std::size_t k = 0; k < feasible.size(); ++k) {
        images.push_back(evaluate_objectives(std::span<const Expr>(config.objectives), feasible[k]));
        for (std::size_t i = 0; i < front.ideal_point.size(); ++i) {
            front.ideal_point[i] = std::max(front.ideal_point[i], images.back()[i]);
        }
    }
    for (std::size_t k : pareto_filter(images)) {
        front.productions.push_back(feasible.vector(k));
        front.points.push_back(images[k]);
    }
    front.hv = hypervolume(front.points);
    return front;
}

// Front file (schema_version 1).
inline nlohmann::json to_json(const IdealFront& front)
{
    nlohmann::json j;
    j["schema_version"] = 1;
    j["problem_id"] = front.problem_id;
    j["feasible_count"] = front.feasible_count;
    j["hv_ideal"] = front.hv;
    j["ideal_point"] = front.ideal_point;
    j["bounds"] = { { "resource_budgets", true }, { "horizon", true } };
    auto& pts = j["front"] = nlohmann::json::array();
    for (std::size_t k = 0; k < front.points.size(); ++k) {
        pts.push_back({ { "production", front.productions[k] }, { "objectives", front.points[k] } });
    }
    return j;
}

inline IdealFront front_from_json(const nlohmann::json& doc)
{
    try {
        IdealFront f;
        f.problem_id = doc.at("problem_id").get<std::string>();
        f.feasible_count = doc.at("feasible_count").get<std::size_t>();
        f.hv = doc.at("hv_ideal").get<double>();
        f.ideal_point = doc.at("ideal_point").get<ObjectiveVector>();
        for (const auto& p : doc.at("front")) {
            f.productions.push_back(p.at("production").get<ProductionVector>());
            f.points.push_back(p.at("objectives").get<ObjectiveVector>());
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("front file: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Baseline policies

inline std::uint64_t preference_hash(const PreferenceVector& w)
{
    std::uint64_t h = 0x243F6A8885A308D3ULL;
    for (double x : w.values()) {
        h = splitmix64(h ^ std::bit_cast<std::uint64_t>(x));
    }
    return h;
}

// Uniform over the actions the mask allows (NoOp included); the per-episode stream
// is derived from (seed, preference), so a rollout is a function of its preference.
class RandomPolicy final : public Policy {
public:
    explicit RandomPolicy(std::uint64_t seed)
        : seed_(seed)
    {
    }

    [[nodiscard]] std::string name() const override { return "random"; }

    [[nodiscard]] Actor start_episode(const ProblemConfig&, const PreferenceVector& preference) const override
    {
        auto rng = std::make_shared<Rng>(mix_seed(seed_, preference_hash(preference)));
        return [rng](const StepView& v) {
            std::vector<std::size_t> valid;
            for (std::size_t k = 0; k < v.mask.size(); ++k) {
                if (v.mask[k]) {
                    valid.push_back(k);
                }
            }
            const auto pick = valid[static_cast<std::size_t>(rng->uniform_int(0, static_cast<std::int64_t>(valid.size()) - 1))];
            return Action::from_code(pick, v.config.num_demands());
        };
    }

private:
    std::uint64_t seed_;
};

// One-step lookahead: every valid action is simulated and the one with the best
// scalarized, normalized post-action objective wins; ties go to the lowest code. The
// normalizer is copied per episode and raised to cover each step's candidates before
// they are compared.
class GreedyPolicy final : public Policy {
public:
    GreedyPolicy(ScalarizerSpec spec, Normalizer normalizer)
        : spec_(spec)
        , normalizer_(std::move(normalizer))
    {
        spec_.validate();
    }

    [[nodiscard]] std::string name() const override { return "greedy"; }

    [[nodiscard]] Actor start_episode(const ProblemConfig& config, const PreferenceVector&) const override
    {
        auto norm = std::make_shared<Normalizer>(normalizer_.size() == config.num_objectives() ? normalizer_ : Normalizer(config.num_objectives()));
        return [norm, spec = spec_](const StepView& v) {
            std::vector<std::size_t> codes;
            std::vector<ObjectiveVector> candidates;
            for (std::size_t k = 0; k < v.mask.size(); ++k) {
                if (!v.mask[k]) {
                    continue;
                }
                AllocationState next = v.state;
                apply_action(next, Action::from_code(k, v.config.num_demands()), v.config);
                codes.push_back(k);
                candidates.push_back(evaluate_objectives(v.config, next.production));
                norm->observe(candidates.back());
            }
            std::size_t best = 0;
            double best_value = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < codes.size(); ++c) {
                const double value = scalarize(norm->scaled(candidates[c]), v.preference, spec);
                if (value > best_value) {
                    best_value = value;
                    best = c;
                }
            }
            return Action::from_code(codes[best], v.config.num_demands());
        };
    }

private:
    ScalarizerSpec spec_;
    Normalizer normalizer_;
};

// For preference w, targets P* = argmax over the ideal front of the Smooth Tchebycheff
// reward of J(P) / ideal_point; ties go to the lexicographically smallest P. Maximizing
// over the front rather than the whole feasible set selects the same optimum value,
// since a monotone scalarizer never prefers a dominated point. The actor adds units
// demand by demand until P* is reached, then emits NoOps.
class ExhaustivePlanner final : public Policy {
public:
    explicit ExhaustivePlanner(std::shared_ptr<const IdealFront> front, double mu = 0.1)
        : front_(std::move(front))
        , spec_ { ScalarizerMethod::SmoothTchebycheff, mu, 0.0 }
        , normalizer_(Normalizer::from_ideal(front_->ideal_point))
    {
        spec_.validate();
    }

    [[nodiscard]] std::string name() const override { return "planner"; }

    [[nodiscard]] ProductionVector target(const PreferenceVector& w) const
    {
        std::size_t best = 0;
        double best_value = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < front_->points.size(); ++k) {
            const double value = scalarize(normalizer_.scaled(front_->points[k]), w, spec_);
            if (value > best_value || (value == best_value && front_->productions[k] < front_->productions[best])) {
                best_value = value;
                best = k;
            }
        }
        return front_->productions[best];
    }

    [[nodiscard]] Actor start_episode(const ProblemConfig& config, const PreferenceVector& preference) const override
    {
        if (config.num_objectives() != front_->ideal_point.size()) {
            throw Error(ErrorCode::DimensionMismatch, "planner front does not match the problem");
        }
        return [target = this->target(preference)](const StepView& v) {
            for (std::size_t j = 0; j < target.size(); ++j) {
                if (v.state.production[j] < target[j]) {
                    return Action::add(j);
                }
            }
            return Action::noop();
        };
    }

    [[nodiscard]] const IdealFront& front() const noexcept { return *front_; }

private:
    std::shared_ptr<const IdealFront> front_;
    ScalarizerSpec spec_;
    Normalizer normalizer_;
};

inline PolicyPtr random_policy(std::uint64_t seed) { return std::make_shared<RandomPolicy>(seed); }

inline PolicyPtr greedy_policy(const ScalarizerSpec& spec, Normalizer normalizer)
{
    return std::make_shared<GreedyPolicy>(spec, std::move(normalizer));
}

inline PolicyPtr exhaustive_planner(const ProblemConfig& config, std::size_t size_limit = kDefaultSizeLimit, double mu = 0.1)
{
    return std::make_shared<ExhaustivePlanner>(std::make_shared<IdealFront>(ideal_front(config, size_limit)), mu);
}

inline PolicyPtr exhaustive_planner(std::shared_ptr<const IdealFront> front, double mu = 0.1)
{
    return std::make_shared<ExhaustivePlanner>(std::move(front), mu);
}

} // namespace graphalloc
