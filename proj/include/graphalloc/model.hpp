#pragma once

// CityPlannerEnv state machine: resources with integer budgets, demands that each
// require one unit of every resource in their dependency set per production unit,
// and an objective vector evaluated on the production counts after every step.

#include "graphalloc/error.hpp"
#include "graphalloc/objective.hpp"
#include "graphalloc/preferences.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace graphalloc {

struct Resource {
    std::string name;
    Units budget = 0;

    friend bool operator==(const Resource&, const Resource&) = default;
};

struct ProblemConfig {
    std::string problem_id;
    std::string family = "custom";
    std::vector<Resource> resources;
    std::vector<std::string> demands;
    // dependencies[j] = sorted indices of the resources demand j requires
    std::vector<std::vector<std::size_t>> dependencies;
    std::vector<Expr> objectives;
    Units horizon = 1;
    std::string notes;

    [[nodiscard]] std::size_t num_resources() const noexcept { return resources.size(); }
    [[nodiscard]] std::size_t num_demands() const noexcept { return demands.size(); }
    [[nodiscard]] std::size_t num_objectives() const noexcept { return objectives.size(); }
    [[nodiscard]] std::size_t num_actions() const noexcept { return 2 * demands.size() + 1; }

    [[nodiscard]] Units total_budget() const
    {
        Units s = 0;
        for (const auto& r : resources) {
            s += r.budget;
        }
        return s;
    }

    [[nodiscard]] bool requires_resource(std::size_t demand, std::size_t resource) const
    {
        const auto& deps = dependencies[demand];
        return std::binary_search(deps.begin(), deps.end(), resource);
    }

    friend bool operator==(const ProblemConfig&, const ProblemConfig&) = default;
};

// Throws Error for the first violated rule.
inline void validate_config(const ProblemConfig& config)
{
    if (config.demands.empty()) {
        throw Error(ErrorCode::InvalidConfig, "no demands");
    }
    if (config.dependencies.size() != config.demands.size()) {
        throw Error(ErrorCode::InvalidConfig, "dependency table has " + std::to_string(config.dependencies.size()) + " rows for " + std::to_string(config.demands.size()) + " demands");
    }
    for (std::size_t j = 0; j < config.demands.size(); ++j) {
        if (config.dependencies[j].empty()) {
            throw Error(ErrorCode::EmptyDependencySet, "demand '" + config.demands[j] + "' requires no resource");
        }
        for (std::size_t i : config.dependencies[j]) {
            if (i >= config.resources.size()) {
                throw Error(ErrorCode::IndexOutOfRange, "demand '" + config.demands[j] + "' references resource " + std::to_string(i));
            }
        }
        if (!std::is_sorted(config.dependencies[j].begin(), config.dependencies[j].end())
            || std::adjacent_find(config.dependencies[j].begin(), config.dependencies[j].end()) != config.dependencies[j].end()) {
            throw Error(ErrorCode::InvalidConfig, "dependency set of '" + config.demands[j] + "' must be sorted and duplicate-free");
        }
    }
    if (config.objectives.size() < 2) {
        throw Error(ErrorCode::FewerThanTwoObjectives, std::to_string(config.objectives.size()) + " objective(s)");
    }
    if (config.horizon < 1) {
        throw Error(ErrorCode::InvalidConfig, "horizon must be >= 1");
    }
    for (const auto& r : config.resources) {
        if (r.budget < 0) {
            throw Error(ErrorCode::InvalidConfig, "resource '" + r.name + "' has negative budget");
        }
    }
    for (std::size_t k = 0; k < config.objectives.size(); ++k) {
        for (std::size_t j : referenced_productions(config.objectives[k])) {
            if (j >= config.demands.size()) {
                throw Error(ErrorCode::IndexOutOfRange, "objective " + std::to_string(k) + " references P_" + std::to_string(j));
            }
        }
    }
}

inline ObjectiveVector evaluate_objectives(const ProblemConfig& config, std::span<const Units> production)
{
    if (production.size() != config.num_demands()) {
        throw Error(ErrorCode::DimensionMismatch, "production has " + std::to_string(production.size()) + " entries, problem has " + std::to_string(config.num_demands()) + " demands");
    }
    for (Units p : production) {
        if (p < 0) {
            throw Error(ErrorCode::DimensionMismatch, "negative production");
        }
    }
    return evaluate_objectives(std::span<const Expr>(config.objectives), production);
}

inline ObjectiveVector evaluate_objectives(const ProblemConfig& config, const ProductionVector& production)
{
    return evaluate_objectives(config, std::span<const Units>(production));
}

// ---------------------------------------------------------------------------
// Actions

enum class ActionKind { NoOp, Add, Remove };

struct Action {
    ActionKind kind = ActionKind::NoOp;
    std::size_t demand = 0;

    static Action noop() { return {}; }
    static Action add(std::size_t demand) { return { ActionKind::Add, demand }; }
    static Action remove(std::size_t demand) { return { ActionKind::Remove, demand }; }

    // 0 = NoOp, 1..|D| = Add(code-1), |D|+1..2|D| = Remove(code-|D|-1)
    static Action from_code(std::size_t code, std::size_t num_demands)
    {
        if (code == 0) {
            return noop();
        }
        if (code <= num_demands) {
            return add(code - 1);
        }
        if (code <= 2 * num_demands) {
            return remove(code - num_demands - 1);
        }
        throw Error(ErrorCode::IndexOutOfRange, "action code " + std::to_string(code) + " outside [0, " + std::to_string(2 * num_demands) + "]");
    }

    [[nodiscard]] std::size_t code(std::size_t num_demands) const
    {
        switch (kind) {
        case ActionKind::NoOp: return 0;
        case ActionKind::Add: return 1 + demand;
        case ActionKind::Remove: return 1 + num_demands + demand;
        }
        return 0;
    }

    friend bool operator==(const Action& a, const Action& b)
    {
        return a.kind == b.kind && (a.kind == ActionKind::NoOp || a.demand == b.demand);
    }
};

// ---------------------------------------------------------------------------
// State

struct AllocationState {
    std::size_t num_resources = 0;
    std::size_t num_demands = 0;
    std::vector<Units> allocation; // row-major |R| x |D|
    std::vector<Units> unallocated;
    ProductionVector production;
    Units step = 0;

    [[nodiscard]] Units allocated(std::size_t resource, std::size_t demand) const
    {
        return allocation[resource * num_demands + demand];
    }

    Units& allocated(std::size_t resource, std::size_t demand) { return allocation[resource * num_demands + demand]; }

    friend bool operator==(const AllocationState&, const AllocationState&) = default;
};

struct Observation {
    // normalized allocation matrix (row i divided by budget i), then the preference
    std::vector<double> flat;

    friend bool operator==(const Observation&, const Observation&) = default;
};

struct StepOutcome {
    ObjectiveVector reward;
    bool terminated = false;
    bool changed = false;
};

inline AllocationState initial_state(const ProblemConfig& config)
{
    AllocationState s;
    s.num_resources = config.num_resources();
    s.num_demands = config.num_demands();
    s.allocation.assign(s.num_resources * s.num_demands, 0);
    s.unallocated.reserve(s.num_resources);
    for (const auto& r : config.resources) {
        s.unallocated.push_back(r.budget);
    }
    s.production.assign(s.num_demands, 0);
    s.step = 0;
    return s;
}

inline Observation observe(const AllocationState& state, const ProblemConfig& config, const PreferenceVector& preference)
{
    Observation obs;
    obs.flat.reserve(state.allocation.size() + preference.size());
    for (std::size_t i = 0; i < state.num_resources; ++i) {
        const auto budget = config.resources[i].budget;
        for (std::size_t j = 0; j < state.num_demands; ++j) {
            obs.flat.push_back(budget > 0 ? static_cast<double>(state.allocated(i, j)) / static_cast<double>(budget) : 0.0);
        }
    }
    for (double w : preference.values()) {
        obs.flat.push_back(w);
    }
    return obs;
}

inline void check_preference(const ProblemConfig& config, const PreferenceVector& preference)
{
    if (preference.size() != config.num_objectives()) {
        throw Error(ErrorCode::DimensionMismatch, "preference has " + std::to_string(preference.size()) + " components, problem has " + std::to_string(config.num_objectives()) + " objectives");
    }
}

inline std::pair<AllocationState, Observation> reset(const ProblemConfig& config, const PreferenceVector& preference)
{
    check_preference(config, preference);
    auto state = initial_state(config);
    auto obs = observe(state, config, preference);
    return { std::move(state), std::move(obs) };
}

inline bool can_add(const AllocationState& state, const ProblemConfig& config, std::size_t demand)
{
    for (std::size_t i : config.dependencies[demand]) {
        if (state.unallocated[i] < 1) {
            return false;
        }
    }
    return true;
}

inline bool can_remove(const AllocationState& state, std::size_t demand) { return state.production[demand] >= 1; }

// Applies the allocation change only; does not advance the step counter.
inline bool apply_action(AllocationState& state, const Action& action, const ProblemConfig& config)
{
    if (action.kind != ActionKind::NoOp && action.demand >= config.num_demands()) {
        throw Error(ErrorCode::IndexOutOfRange, "action targets demand " + std::to_string(action.demand));
    }
    switch (action.kind) {
    case ActionKind::NoOp:
        return false;
    case ActionKind::Add:
        if (!can_add(state, config, action.demand)) {
            return false;
        }
        for (std::size_t i : config.dependencies[action.demand]) {
            state.allocated(i, action.demand) += 1;
            state.unallocated[i] -= 1;
        }
        state.production[action.demand] += 1;
        return true;
    case ActionKind::Remove:
        if (!can_remove(state, action.demand)) {
            return false;
        }
        for (std::size_t i : config.dependencies[action.demand]) {
            state.allocated(i, action.demand) -= 1;
            state.unallocated[i] += 1;
        }
        state.production[action.demand] -= 1;
        return true;
    }
    return false;
}

// Invalid actions (insufficient resources, removing zero production) are NoOps.
// The reward is the raw objective vector of the post-action state.
inline StepOutcome step(AllocationState& state, const Action& action, const ProblemConfig& config)
{
    if (state.step >= config.horizon) {
        throw Error(ErrorCode::EpisodeOver, "step " + std::to_string(state.step) + " of horizon " + std::to_string(config.horizon));
    }
    StepOutcome out;
    out.changed = apply_action(state, action, config);
    state.step += 1;
    out.terminated = state.step == config.horizon;
    out.reward = evaluate_objectives(config, state.production);
    return out;
}

// Entry k is true iff flat action k changes the state; NoOp is always true.
inline std::vector<bool> action_mask(const AllocationState& state, const ProblemConfig& config)
{
    const auto d = config.num_demands();
    std::vector<bool> mask(2 * d + 1, false);
    mask[0] = true;
    for (std::size_t j = 0; j < d; ++j) {
        mask[1 + j] = can_add(state, config, j);
        mask[1 + d + j] = can_remove(state, j);
    }
    return mask;
}

inline double resource_utilization(const AllocationState& state, const ProblemConfig& config)
{
    const Units total = config.total_budget();
    if (total <= 0) {
        throw Error(ErrorCode::ZeroBudget, "problem '" + config.problem_id + "' has no resources to allocate");
    }
    const Units used = std::accumulate(state.allocation.begin(), state.allocation.end(), Units { 0 });
    return static_cast<double>(used) / static_cast<double>(total);
}

// Builds the state reached by adding `production` from the initial state; the
// production must fit the budgets.
inline AllocationState state_from_production(const ProblemConfig& config, const ProductionVector& production)
{
    auto s = initial_state(config);
    for (std::size_t j = 0; j < production.size(); ++j) {
        for (std::size_t i : config.dependencies[j]) {
            s.allocated(i, j) = production[j];
            s.unallocated[i] -= production[j];
        }
    }
    s.production = production;
    return s;
}

// ---------------------------------------------------------------------------
// Heterogeneous bipartite graph view

enum class NodeType : int { Resource = 0, Demand = 1, Pool = 2 };

struct GraphObservation {
    static constexpr std::size_t kNodeFeatureDim = 2;

    // Nodes: resources, then demands, then the single unallocated pool node.
    //   resource: [unallocated / budget, budget]
    //   demand:   [production, production / capacity], capacity = min budget over requirements
    //   pool:     [total unallocated / total budget, total budget]
    std::vector<NodeType> node_types;
    std::vector<double> node_features; // num_nodes x kNodeFeatureDim, row-major
    // Edge e goes from resource node edge_source[e] to demand node edge_target[e].
    std::vector<std::size_t> edge_source;
    std::vector<std::size_t> edge_target;
    std::vector<double> edge_features; // allocation / budget
    std::vector<double> graph_features; // preference vector

    [[nodiscard]] std::size_t num_nodes() const noexcept { return node_types.size(); }
    [[nodiscard]] std::size_t num_edges() const noexcept { return edge_source.size(); }
};

inline GraphObservation encode_graph_observation(const AllocationState& state, const ProblemConfig& config, const PreferenceVector& preference)
{
    const auto nr = config.num_resources();
    const auto nd = config.num_demands();
    auto ratio = [](double a, double b) { return b > 0 ? a / b : 0.0; };

    GraphObservation g;
    g.node_types.reserve(nr + nd + 1);
    g.node_features.reserve((nr + nd + 1) * GraphObservation::kNodeFeatureDim);
    for (std::size_t i = 0; i < nr; ++i) {
        const auto budget = static_cast<double>(config.resources[i].budget);
        g.node_types.push_back(NodeType::Resource);
        g.node_features.push_back(ratio(static_cast<double>(state.unallocated[i]), budget));
        g.node_features.push_back(budget);
    }
    for (std::size_t j = 0; j < nd; ++j) {
        Units capacity = std::numeric_limits<Units>::max();
        for (std::size_t i : config.dependencies[j]) {
            capacity = std::min(capacity, config.resources[i].budget);
        }
        const auto p = static_cast<double>(state.production[j]);
        g.node_types.push_back(NodeType::Demand);
        g.node_features.push_back(p);
        g.node_features.push_back(ratio(p, static_cast<double>(capacity)));
    }
    const auto total = static_cast<double>(config.total_budget());
    const auto free_units = static_cast<double>(std::accumulate(state.unallocated.begin(), state.unallocated.end(), Units { 0 }));
    g.node_types.push_back(NodeType::Pool);
    g.node_features.push_back(ratio(free_units, total));
    g.node_features.push_back(total);

    for (std::size_t j = 0; j < nd; ++j) {
        for (std::size_t i : config.dependencies[j]) {
            g.edge_source.push_back(i);
            g.edge_target.push_back(nr + j);
            g.edge_features.push_back(ratio(static_cast<double>(state.allocated(i, j)), static_cast<double>(config.resources[i].budget)));
        }
    }
    g.graph_features = preference.vector();
    return g;
}

// ---------------------------------------------------------------------------
// Problem configuration documents (schema_version 1)
//
//   {
//     "schema_version": 1,
//     "problem_id": "0",
//     "family": "encoded",
//     "resources": [{"name": "R0", "budget": 9}, ...],
//     "demands": ["D0", ...],
//     "dependencies": {"D0": ["R0", "R1"], ...},
//     "objectives": [<expression node>, ...],
//     "horizon": 20,
//     "notes": "..."            (optional)
//   }

inline nlohmann::json config_to_json(const ProblemConfig& config)
{
    nlohmann::json j;
    j["schema_version"] = 1;
    j["problem_id"] = config.problem_id;
    j["family"] = config.family;
    auto& res = j["resources"] = nlohmann::json::array();
    for (const auto& r : config.resources) {
        res.push_back({ { "name", r.name }, { "budget", r.budget } });
    }
    j["demands"] = config.demands;
    auto& deps = j["dependencies"] = nlohmann::json::object();
    for (std::size_t d = 0; d < config.demands.size(); ++d) {
        auto& list = deps[config.demands[d]] = nlohmann::json::array();
        for (std::size_t i : config.dependencies[d]) {
            list.push_back(config.resources[i].name);
        }
    }
    auto& objs = j["objectives"] = nlohmann::json::array();
    for (const auto& e : config.objectives) {
        objs.push_back(to_json(e));
    }
    j["horizon"] = config.horizon;
    if (!config.notes.empty()) {
        j["notes"] = config.notes;
    }
    return j;
}

inline ProblemConfig config_from_json(const nlohmann::json& doc)
{
    auto require = [&](const char* key) -> const nlohmann::json& {
        if (!doc.contains(key)) {
            throw Error(ErrorCode::ParseError, std::string("problem document missing '") + key + "'");
        }
        return doc[key];
    };
    try {
        ProblemConfig c;
        c.problem_id = require("problem_id").get<std::string>();
        c.family = doc.value("family", std::string("custom"));
        c.notes = doc.value("notes", std::string());
        std::map<std::string, std::size_t> resource_index;
        for (const auto& r : require("resources")) {
            Resource res { r.at("name").get<std::string>(), r.at("budget").get<Units>() };
            if (!resource_index.emplace(res.name, c.resources.size()).second) {
                throw Error(ErrorCode::InvalidConfig, "duplicate resource '" + res.name + "'");
            }
            c.resources.push_back(std::move(res));
        }
        c.demands = require("demands").get<std::vector<std::string>>();
        const auto& deps = require("dependencies");
        c.dependencies.resize(c.demands.size());
        for (std::size_t d = 0; d < c.demands.size(); ++d) {
            if (!deps.contains(c.demands[d])) {
                continue; // left empty, rejected by validation
            }
            for (const auto& name : deps[c.demands[d]]) {
                const auto it = resource_index.find(name.get<std::string>());
                if (it == resource_index.end()) {
                    throw Error(ErrorCode::IndexOutOfRange, "demand '" + c.demands[d] + "' depends on unknown resource '" + name.get<std::string>() + "'");
                }
                c.dependencies[d].push_back(it->second);
            }
            auto& list = c.dependencies[d];
            std::sort(list.begin(), list.end());
            list.erase(std::unique(list.begin(), list.end()), list.end());
        }
        for (const auto& node : require("objectives")) {
            c.objectives.push_back(parse_expression(node));
        }
        c.horizon = require("horizon").get<Units>();
        validate_config(c);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

} // namespace graphalloc
