#pragma once

#include "graphalloc/model.hpp"
#include "graphalloc/objective.hpp"
#include "graphalloc/random.hpp"

#include <string>
#include <vector>

namespace testing_support {

using namespace graphalloc;

// Problem 0 objectives (10 log(P_j + 1 + eps)) over a fully connected graph.
inline ProblemConfig log_problem(std::vector<Units> budgets, std::size_t num_demands = 2, Units horizon = 20)
{
    ProblemConfig c;
    c.problem_id = "log-fc";
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        c.resources.push_back({ "R" + std::to_string(i), budgets[i] });
    }
    std::vector<std::size_t> all(budgets.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = i;
    }
    for (std::size_t j = 0; j < num_demands; ++j) {
        c.demands.push_back("D" + std::to_string(j));
        c.dependencies.push_back(all);
        c.objectives.push_back(expr::mul({ expr::constant(10.0), expr::log(expr::production(j), 1.0, 1e-8) }));
    }
    c.horizon = horizon;
    return c;
}

// Small random configuration with non-empty sorted dependency sets.
inline ProblemConfig random_config(Rng& rng)
{
    ProblemConfig c;
    c.problem_id = "fuzz";
    const auto nr = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const auto nd = static_cast<std::size_t>(rng.uniform_int(1, 5));
    for (std::size_t i = 0; i < nr; ++i) {
        c.resources.push_back({ "R" + std::to_string(i), rng.uniform_int(0, 8) });
    }
    for (std::size_t j = 0; j < nd; ++j) {
        c.demands.push_back("D" + std::to_string(j));
        std::vector<std::size_t> deps;
        for (std::size_t i = 0; i < nr; ++i) {
            if (rng.bernoulli(0.5)) {
                deps.push_back(i);
            }
        }
        if (deps.empty()) {
            deps.push_back(static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(nr) - 1)));
        }
        c.dependencies.push_back(deps);
    }
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 3));
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Expr> terms;
        for (std::size_t j = 0; j < nd; ++j) {
            terms.push_back(expr::scaled(rng.uniform(-1.0, 2.0), j));
        }
        terms.push_back(expr::constant(1.0));
        c.objectives.push_back(expr::add(std::move(terms)));
    }
    c.horizon = rng.uniform_int(1, 30);
    return c;
}

} // namespace testing_support
