#pragma once

// Ordering Score: does objective i rise as its preference weight is swept from 0 to 1?
// Each (objective, repetition) sweep is scored by the normalized Spearman correlation
// between the observed J_i sequence and its ascending sort; all-equal sequences score 1.

#include "graphalloc/metrics.hpp"
#include "graphalloc/policy.hpp"
#include "graphalloc/preferences.hpp"
#include "graphalloc/random.hpp"

#include <functional>
#include <vector>

namespace graphalloc {

struct OrderingScoreParams {
    std::size_t n_samp = 5;
    std::size_t n_step = 11;
    double alpha = 1.0;

    friend bool operator==(const OrderingScoreParams&, const OrderingScoreParams&) = default;
};

struct SweepScore {
    std::size_t objective = 0;
    std::size_t repetition = 0;
    std::vector<double> values; // J_i at each sweep position
    double score = 0.0;
};

struct OrderingScoreResult {
    double score = 0.0;
    std::vector<SweepScore> sweeps;
};

using PreferenceEvaluator = std::function<ObjectiveVector(const PreferenceVector&)>;

// Scores any deterministic map from preference to final objective vector.
inline OrderingScoreResult ordering_score(const PreferenceEvaluator& evaluate, std::size_t num_objectives, const OrderingScoreParams& params, Rng& rng)
{
    const auto sweeps = build_sweeps(num_objectives, params.n_samp, params.n_step, params.alpha, rng);
    OrderingScoreResult result;
    result.sweeps.reserve(sweeps.size());
    double total = 0.0;
    for (const auto& sweep : sweeps) {
        SweepScore s;
        s.objective = sweep.objective;
        s.repetition = sweep.repetition;
        s.values.reserve(sweep.preferences.size());
        for (const auto& w : sweep.preferences) {
            const auto j = evaluate(w);
            if (j.size() != num_objectives) {
                throw Error(ErrorCode::DimensionMismatch, "evaluator returned " + std::to_string(j.size()) + " objectives");
            }
            s.values.push_back(j[sweep.objective]);
        }
        s.score = sweep_order_score(s.values);
        total += s.score;
        result.sweeps.push_back(std::move(s));
    }
    result.score = total / static_cast<double>(sweeps.size());
    return result;
}

inline OrderingScoreResult ordering_score(const Policy& policy, const ProblemConfig& config, const OrderingScoreParams& params, Rng& rng)
{
    return ordering_score([&](const PreferenceVector& w) { return rollout(policy, config, w).objectives; }, config.num_objectives(), params, rng);
}

} // namespace graphalloc
