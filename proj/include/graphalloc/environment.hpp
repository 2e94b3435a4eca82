#pragma once

// Gym-style episodic wrapper around the core state machine. This is the surface
// language bindings expose: reset(seed, preference) -> (observation, info) and
// step(action) -> (observation, reward, terminated, truncated, info). It adds no
// dynamics of its own; every value comes from model.hpp.

#include "graphalloc/error.hpp"
#include "graphalloc/model.hpp"
#include "graphalloc/preferences.hpp"
#include "graphalloc/random.hpp"
#include "graphalloc/scalarization.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace graphalloc {

struct EnvironmentOptions {
    // When set, step rewards are the scalarized, normalized objective (a single value)
    // instead of the raw objective vector.
    std::optional<ScalarizerSpec> scalarize_on_step;
    // Shared moving ideal point; created per environment when null.
    std::shared_ptr<Normalizer> normalizer;
    double dirichlet_alpha = 1.0;
};

struct StepInfo {
    PreferenceVector preference;
    std::vector<bool> mask;
    ObjectiveVector raw_reward; // empty after reset
    Units step = 0;
};

struct ResetResult {
    Observation observation;
    StepInfo info;
};

struct EnvStepResult {
    Observation observation;
    std::vector<double> reward; // raw N-vector, or one scalarized value
    bool terminated = false;
    bool truncated = false;
    StepInfo info;
};

class Environment {
public:
    explicit Environment(ProblemConfig config, EnvironmentOptions options = {})
        : config_(std::move(config))
        , options_(std::move(options))
    {
        validate_config(config_);
        if (options_.scalarize_on_step) {
            options_.scalarize_on_step->validate();
            if (!options_.normalizer) {
                options_.normalizer = std::make_shared<Normalizer>(config_.num_objectives());
            }
            if (options_.normalizer->size() != config_.num_objectives()) {
                throw Error(ErrorCode::DimensionMismatch, "normalizer size does not match the objective count");
            }
        }
    }

    [[nodiscard]] const ProblemConfig& config() const noexcept { return config_; }
    [[nodiscard]] const AllocationState& state() const noexcept { return state_; }
    [[nodiscard]] std::size_t observation_size() const noexcept { return config_.num_resources() * config_.num_demands() + config_.num_objectives(); }
    [[nodiscard]] std::size_t num_actions() const noexcept { return config_.num_actions(); }
    [[nodiscard]] std::shared_ptr<Normalizer> normalizer() const noexcept { return options_.normalizer; }

    // A missing preference is drawn from Dirichlet(alpha) on the environment's stream;
    // a seed reseeds that stream first.
    ResetResult reset(std::optional<std::uint64_t> seed = std::nullopt, std::optional<PreferenceVector> preference = std::nullopt)
    {
        if (seed) {
            rng_ = Rng(*seed);
        }
        if (preference) {
            check_preference(config_, *preference);
            preference_ = std::move(*preference);
        } else {
            preference_ = sample_dirichlet(config_.num_objectives(), options_.dirichlet_alpha, rng_);
        }
        auto [state, obs] = graphalloc::reset(config_, preference_);
        state_ = std::move(state);
        active_ = true;
        return { std::move(obs), info({}) };
    }

    EnvStepResult step(std::size_t action_code)
    {
        if (!active_) {
            throw Error(ErrorCode::EpisodeOver, "reset() must be called before step()");
        }
        const auto action = Action::from_code(action_code, config_.num_demands());
        auto outcome = graphalloc::step(state_, action, config_);
        EnvStepResult out;
        if (options_.scalarize_on_step) {
            const auto normalized = options_.normalizer->normalize(outcome.reward);
            out.reward = { scalarize(normalized, preference_, *options_.scalarize_on_step) };
        } else {
            out.reward = outcome.reward;
        }
        out.terminated = outcome.terminated;
        out.truncated = false;
        out.observation = observe(state_, config_, preference_);
        out.info = info(std::move(outcome.reward));
        if (out.terminated) {
            active_ = false;
        }
        return out;
    }

    [[nodiscard]] GraphObservation graph_observation() const { return encode_graph_observation(state_, config_, preference_); }

private:
    StepInfo info(ObjectiveVector raw) const { return { preference_, action_mask(state_, config_), std::move(raw), state_.step }; }

    ProblemConfig config_;
    EnvironmentOptions options_;
    Rng rng_ { 0 };
    PreferenceVector preference_;
    AllocationState state_;
    bool active_ = false;
};

} // namespace graphalloc
