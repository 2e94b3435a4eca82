#pragma once

// Preference-conditioned policies and deterministic evaluation rollouts.
//
// A Policy is immutable and shareable. For each episode it hands out an Actor, a
// callable that maps the current step view to an action; actors may carry private
// per-episode state (an RNG stream, a plan). External agents plug in through
// callable_policy, which only ever sees (observation, preference).

#include "graphalloc/error.hpp"
#include "graphalloc/model.hpp"
#include "graphalloc/preferences.hpp"

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace graphalloc {

struct StepView {
    const ProblemConfig& config;
    const AllocationState& state;
    const Observation& observation;
    const std::vector<bool>& mask;
    const PreferenceVector& preference;
};

using Actor = std::function<Action(const StepView&)>;

class Policy {
public:
    virtual ~Policy() = default;
    [[nodiscard]] virtual std::string name() const = 0;
    [[nodiscard]] virtual Actor start_episode(const ProblemConfig& config, const PreferenceVector& preference) const = 0;
};

using PolicyPtr = std::shared_ptr<const Policy>;

struct Rollout {
    AllocationState final_state;
    ObjectiveVector objectives;
    std::vector<std::size_t> actions; // flat codes, one per step
};

// Runs one episode of exactly config.horizon steps from the reset state.
inline Rollout rollout(const Policy& policy, const ProblemConfig& config, const PreferenceVector& preference)
{
    auto [state, obs] = reset(config, preference);
    Rollout out;
    out.actions.reserve(static_cast<std::size_t>(config.horizon));
    auto preference_text = [&] {
        std::string s = "(";
        for (std::size_t i = 0; i < preference.size(); ++i) {
            s += (i ? ", " : "") + std::to_string(preference[i]);
        }
        return s + ")";
    };
    Actor actor;
    try {
        actor = policy.start_episode(config, preference);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::PolicyFailure, policy.name() + " failed to start at preference " + preference_text() + ": " + e.what());
    }
    out.objectives = evaluate_objectives(config, state.production);
    while (state.step < config.horizon) {
        const auto mask = action_mask(state, config);
        Action action;
        try {
            action = actor(StepView { config, state, obs, mask, preference });
        } catch (const std::exception& e) {
            throw Error(ErrorCode::PolicyFailure, policy.name() + " failed at step " + std::to_string(state.step) + ", preference " + preference_text() + ": " + e.what());
        }
        out.actions.push_back(action.code(config.num_demands()));
        out.objectives = step(state, action, config).reward;
        obs = observe(state, config, preference);
    }
    out.final_state = std::move(state);
    return out;
}

// Wraps a deterministic (observation, preference) -> flat action code callable.
class CallablePolicy final : public Policy {
public:
    using Fn = std::function<std::size_t(const Observation&, const PreferenceVector&)>;

    CallablePolicy(std::string name, Fn fn)
        : name_(std::move(name))
        , fn_(std::move(fn))
    {
    }

    [[nodiscard]] std::string name() const override { return name_; }

    [[nodiscard]] Actor start_episode(const ProblemConfig&, const PreferenceVector&) const override
    {
        return [fn = fn_](const StepView& v) { return Action::from_code(fn(v.observation, v.preference), v.config.num_demands()); };
    }

private:
    std::string name_;
    Fn fn_;
};

inline PolicyPtr callable_policy(std::string name, CallablePolicy::Fn fn)
{
    return std::make_shared<CallablePolicy>(std::move(name), std::move(fn));
}

// Always emits the same flat action code.
inline PolicyPtr constant_policy(std::size_t code)
{
    return callable_policy("constant-" + std::to_string(code), [code](const Observation&, const PreferenceVector&) { return code; });
}

} // namespace graphalloc
