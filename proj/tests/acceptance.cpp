// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Tolerances are fixed here and printed alongside each result.

#include "graphalloc/graphalloc.hpp"

#include "hv_reference.hpp"
#include "closed_form_reference.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

using namespace graphalloc;

namespace {

int failures = 0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

void report(const char* name, bool ok, const std::string& detail)
{
    std::printf("%s  %-34s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!ok) {
        ++failures;
    }
}

void check(const char* name, const std::function<std::pair<bool, std::string>()>& body)
{
    try {
        const auto [ok, detail] = body();
        report(name, ok, detail);
    } catch (const std::exception& e) {
        report(name, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::pair<bool, std::string> hv_oracle_equivalence()
{
    Rng rng(2001);
    const auto start = Clock::now();
    double worst = 0.0;
    for (int set = 0; set < 200; ++set) {
        const auto dim = static_cast<std::size_t>(rng.uniform_int(2, 3));
        const auto count = static_cast<std::size_t>(rng.uniform_int(1, 8));
        std::vector<ObjectiveVector> pts(count, ObjectiveVector(dim));
        for (auto& p : pts) {
            for (auto& x : p) {
                x = rng.uniform01();
            }
        }
        const double want = hv_reference::inclusion_exclusion(pts);
        const double got = hypervolume(pts);
        const double rel = want > 0 ? std::abs(got - want) / want : std::abs(got - want);
        worst = std::max(worst, rel);
    }
    const double t = seconds_since(start);
    return { worst <= 1e-9 && t < 10.0, fmt("200 sets, max rel err %.3g (tol 1e-9), %.3f s (limit 10 s)", worst, t) };
}

std::pair<bool, std::string> worked_hv()
{
    const double a = hypervolume(std::vector<ObjectiveVector> { { 2, 1 }, { 1, 2 } });
    const double b = hypervolume(std::vector<ObjectiveVector> { { 0.5, 0.5 } });
    return { a == 3.0 && b == 0.25, fmt("{(2,1),(1,2)} -> %.17g, {(0.5,0.5)} -> %.17g (exact)", a, b) };
}

std::pair<bool, std::string> oracle_planner_closure()
{
    const auto start = Clock::now();
    const auto config = testing_support::log_problem({ 3, 3 }, 2, 3);
    const auto feasible = enumerate_feasible(config);
    const auto front = std::make_shared<IdealFront>(ideal_front(config));
    EvaluationParams params;
    params.divisions = 99;
    const auto r = evaluate_policy(*exhaustive_planner(front), config, params, front.get());
    const double t = seconds_since(start);
    const bool ok = feasible.size() == 10 && front->points.size() == 4 && r.lattice_count == 100 && r.hv_ratio && std::abs(*r.hv_ratio - 1.0) <= 1e-9 && r.pnds == 1.0 && t < 5.0;
    return { ok, fmt("|F|=%zu (want 10), front=%zu (want 4), hv_ratio=%.12f (tol 1e-9), pnds=%.3f, %.3f s (limit 5 s)", feasible.size(), front->points.size(), r.hv_ratio.value_or(-1.0), r.pnds, t) };
}

std::pair<bool, std::string> ordering_calibration()
{
    auto monotone = [](const PreferenceVector& w) {
        ObjectiveVector j(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            j[i] = 2.0 + 5.0 * w[i] * w[i] + w[i];
        }
        return j;
    };
    auto anti = [](const PreferenceVector& w) {
        ObjectiveVector j(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            j[i] = 10.0 - 4.0 * w[i];
        }
        return j;
    };
    bool ok = true;
    std::ostringstream detail;
    for (std::size_t n : { 2u, 3u, 5u }) {
        Rng a(n);
        Rng b(n);
        const double m = ordering_score(monotone, n, {}, a).score;
        const double an = ordering_score(anti, n, {}, b).score;
        ok = ok && m == 1.0 && an == 0.0;
        detail << "N=" << n << " mono=" << m << " anti=" << an << "; ";
    }
    const auto c = load_problem("0");
    const auto constant = constant_policy(1);
    Rng rc(1);
    const double cs = ordering_score(*constant, c, {}, rc).score;
    ok = ok && cs == 1.0;
    detail << "constant=" << cs << "; ";
    const auto rnd = random_policy(5);
    std::vector<double> by_alpha;
    for (double alpha : { 0.2, 1.0, 5.0 }) {
        Rng r(42);
        by_alpha.push_back(ordering_score(*rnd, c, { 5, 11, alpha }, r).score);
    }
    const bool same = by_alpha[0] == by_alpha[1] && by_alpha[1] == by_alpha[2];
    ok = ok && same;
    detail << "N=2 random OS over alpha {0.2,1,5} = " << by_alpha[0] << "," << by_alpha[1] << "," << by_alpha[2] << " (exact)";
    return { ok, detail.str() };
}

std::pair<bool, std::string> scalarizer_sandwich()
{
    Rng rng(3003);
    double worst_slack = 1e300;
    int violations = 0;
    for (double mu : { 1.0, 0.1, 0.01 }) {
        ScalarizerSpec stch { ScalarizerMethod::SmoothTchebycheff, mu, 5.0 };
        ScalarizerSpec tch { ScalarizerMethod::Tchebycheff, mu, 5.0 };
        for (int k = 0; k < 1000; ++k) {
            const auto n = static_cast<std::size_t>(rng.uniform_int(2, 6));
            std::vector<double> j(n);
            for (auto& x : j) {
                x = rng.uniform01();
            }
            const auto w = sample_dirichlet(n, 1.0, rng);
            const double gap = scalarize(j, w, tch) - scalarize(j, w, stch);
            const double bound = mu * std::log(static_cast<double>(n));
            if (gap < -1e-12 || gap > bound + 1e-12) {
                ++violations;
            }
            worst_slack = std::min(worst_slack, bound - gap);
        }
    }
    bool exact = true;
    for (double mu : { 1.0, 0.1, 0.01 }) {
        for (std::size_t n = 2; n <= 6; ++n) {
            const std::vector<double> ideal(n, 1.0);
            const auto w = das_dennis(n, 3)[1];
            exact = exact && scalarize(ideal, w, { ScalarizerMethod::SmoothTchebycheff, mu, 5.0 }) == -mu * std::log(static_cast<double>(n));
        }
    }
    return { violations == 0 && exact, fmt("3000 pairs, %d violations (tol 1e-12), min slack %.3g; value at z* == -mu ln N: %s", violations, worst_slack, exact ? "exact" : "MISMATCH") };
}

std::pair<bool, std::string> environment_invariants()
{
    Rng rng(4004);
    std::size_t steps = 0;
    std::size_t violations = 0;
    std::size_t configs = 0;
    while (steps < 100000) {
        ProblemConfig c;
        if (configs % 2 == 0) {
            GeneratorSpec spec;
            spec.family = GeneratorFamily::RandomDeps;
            spec.num_demands = static_cast<std::size_t>(rng.uniform_int(1, 8));
            spec.num_resources = static_cast<std::size_t>(rng.uniform_int(1, 6));
            spec.num_objectives = static_cast<std::size_t>(rng.uniform_int(2, 4));
            spec.budget_min = rng.uniform_int(0, 3);
            spec.budget_max = spec.budget_min + rng.uniform_int(0, 8);
            spec.density = rng.uniform(0.1, 1.0);
            spec.horizon = rng.uniform_int(1, 40);
            spec.seed = rng.next_u64();
            c = generate_problem(spec);
        } else {
            c = testing_support::random_config(rng);
        }
        ++configs;
        const auto w = sample_dirichlet(c.num_objectives(), 1.0, rng);
        auto [s, obs] = reset(c, w);
        auto twin = s;
        while (s.step < c.horizon) {
            const auto code = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(c.num_actions()) - 1));
            const auto action = Action::from_code(code, c.num_demands());
            const auto before = s;
            bool limiting_ok = true;
            if (action.kind == ActionKind::Add) {
                bool room = true;
                for (std::size_t i : c.dependencies[action.demand]) {
                    room = room && s.unallocated[i] >= 1;
                }
                limiting_ok = room == can_add(s, c, action.demand);
            }
            const auto out = step(s, action, c);
            const auto twin_out = step(twin, action, c);
            bool ok = limiting_ok && s == twin && out.reward == twin_out.reward;
            if (action.kind == ActionKind::Add) {
                ok = ok && out.changed == can_add(before, c, action.demand);
            }
            for (std::size_t i = 0; i < c.num_resources() && ok; ++i) {
                Units row = 0;
                for (std::size_t j = 0; j < c.num_demands(); ++j) {
                    row += s.allocated(i, j);
                    ok = ok && s.allocated(i, j) == (c.requires_resource(j, i) ? s.production[j] : 0);
                }
                ok = ok && row + s.unallocated[i] == c.resources[i].budget && s.unallocated[i] >= 0;
            }
            if (out.changed && action.kind != ActionKind::NoOp) {
                auto probe = s;
                const auto inverse = action.kind == ActionKind::Add ? Action::remove(action.demand) : Action::add(action.demand);
                ok = ok && apply_action(probe, inverse, c);
                probe.step = before.step;
                ok = ok && probe == before;
            }
            if (!ok) {
                ++violations;
            }
            ++steps;
        }
    }
    return { violations == 0, fmt("%zu steps over %zu configs, %zu violations", steps, configs, violations) };
}

std::pair<bool, std::string> das_dennis_cardinality()
{
    int mismatches = 0;
    int cases = 0;
    for (std::size_t n = 2; n <= 6; ++n) {
        for (std::size_t h = 1; h <= 12; ++h) {
            ++cases;
            if (das_dennis(n, h).size() != binomial(h + n - 1, n - 1)) {
                ++mismatches;
            }
        }
    }
    return { mismatches == 0, fmt("%d (N, H) pairs with 2 <= N <= 6, 1 <= H <= 12, %d mismatches", cases, mismatches) };
}

std::pair<bool, std::string> baseline_separation()
{
    const auto config = load_problem("0");
    const auto front = std::make_shared<IdealFront>(ideal_front(config));
    const auto planner = exhaustive_planner(front);
    const auto greedy = greedy_policy({}, Normalizer::from_ideal(front->ideal_point));
    double sum_p = 0.0;
    double sum_g = 0.0;
    double sum_r = 0.0;
    bool per_seed = true;
    std::ostringstream detail;
    detail.precision(4);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        EvaluationParams params;
        params.seed = seed;
        const double p = *evaluate_policy(*planner, config, params, front.get()).hv_ratio;
        const double g = *evaluate_policy(*greedy, config, params, front.get()).hv_ratio;
        const double r = *evaluate_policy(*random_policy(seed), config, params, front.get()).hv_ratio;
        per_seed = per_seed && g > r;
        sum_p += p;
        sum_g += g;
        sum_r += r;
        detail << "s" << seed << " p/g/r=" << p << "/" << g << "/" << r << " ";
    }
    const bool ok = per_seed && sum_p >= sum_g && sum_g >= sum_r;
    detail << "| mean p/g/r=" << sum_p / 5 << "/" << sum_g / 5 << "/" << sum_r / 5;
    return { ok, detail.str() };
}

std::pair<bool, std::string> closed_form_fidelity()
{
    Rng rng(5005);
    double worst = 0.0;
    for (const char* id : { "0", "1a", "1b", "1c" }) {
        const auto config = load_problem(id);
        for (int k = 0; k < 50; ++k) {
            const ProductionVector p { rng.uniform_int(0, config.horizon), rng.uniform_int(0, config.horizon) };
            const auto got = evaluate_objectives(config, p);
            const auto want = closed_form::evaluate(id, static_cast<double>(p[0]), static_cast<double>(p[1]));
            for (std::size_t i = 0; i < 2; ++i) {
                worst = std::max(worst, std::abs(got[i] - want[i]));
            }
        }
    }
    return { worst <= 1e-9, fmt("4 problems x 50 vectors, max abs err %.3g (tol 1e-9)", worst) };
}

} // namespace

int main()
{
    std::printf("SKIP  learned-policy results               training a learned graph policy is outside this library; the property checks below stand in\n");
    check("hv-oracle-equivalence", hv_oracle_equivalence);
    check("worked-hv-values", worked_hv);
    check("oracle-planner-closure", oracle_planner_closure);
    check("ordering-score-calibration", ordering_calibration);
    check("scalarizer-sandwich", scalarizer_sandwich);
    check("environment-invariants", environment_invariants);
    check("das-dennis-cardinality", das_dennis_cardinality);
    check("baseline-separation", baseline_separation);
    check("encoded-objective-fidelity", closed_form_fidelity);
    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
