#include "graphalloc/harness.hpp"
#include "graphalloc/problems.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace graphalloc;

namespace {

struct ProblemZero : ::testing::Test {
    ProblemConfig config = load_problem("0");
    std::shared_ptr<const IdealFront> front = std::make_shared<IdealFront>(ideal_front(config));
};

EvaluationParams params_with_seed(std::uint64_t seed)
{
    EvaluationParams p;
    p.seed = seed;
    return p;
}

} // namespace

TEST_F(ProblemZero, PlannerReport)
{
    const auto r = evaluate_policy(*exhaustive_planner(front), config, {}, front.get());
    EXPECT_EQ(r.lattice_count, 100u);
    EXPECT_EQ(r.divisions, 99u);
    ASSERT_TRUE(r.hv_ratio);
    EXPECT_NEAR(*r.hv_ratio, 1.0, 1e-9);
    EXPECT_EQ(r.pnds, 1.0);
    EXPECT_EQ(r.ordering_score, 1.0);
    EXPECT_EQ(r.feasible_count, front->feasible_count);
    ASSERT_TRUE(r.resource_utilization);
    EXPECT_EQ(*r.resource_utilization, 1.0);
}

TEST_F(ProblemZero, RandomBelowPlannerAcrossSeeds)
{
    const auto planner = evaluate_policy(*exhaustive_planner(front), config, {}, front.get());
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto r = evaluate_policy(*random_policy(seed), config, params_with_seed(seed), front.get());
        EXPECT_LT(*r.hv_ratio, *planner.hv_ratio) << seed;
    }
}

TEST_F(ProblemZero, ReportJsonRoundTrip)
{
    const auto r = evaluate_policy(*random_policy(3), config, params_with_seed(3), front.get());
    const auto doc = to_json(r);
    const auto back = report_from_json(nlohmann::json::parse(doc.dump()));
    EXPECT_EQ(to_json(back).dump(), doc.dump());
    EXPECT_EQ(doc["schema_version"], 1);
    EXPECT_EQ(doc["records"].size(), 100u);
    EXPECT_TRUE(doc.contains("wall_time_seconds"));
    EXPECT_FALSE(to_json(r, false).contains("wall_time_seconds"));
}

TEST_F(ProblemZero, IdenticalInputsGiveIdenticalReports)
{
    const auto a = evaluate_policy(*random_policy(9), config, params_with_seed(9), front.get());
    const auto b = evaluate_policy(*random_policy(9), config, params_with_seed(9), front.get());
    EXPECT_EQ(to_json(a, false).dump(), to_json(b, false).dump());
}

TEST_F(ProblemZero, ExportOrderingFlagsAndRoundTrip)
{
    const auto r = evaluate_policy(*random_policy(1), config, params_with_seed(1), front.get());
    const auto csv = export_front(r);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "w0,w1,J0,J1,dominated");
    const auto rows = parse_front_csv(csv);
    ASSERT_EQ(rows.size(), r.records.size());
    for (std::size_t k = 1; k < rows.size(); ++k) {
        EXPECT_LE(rows[k - 1].preference[0], rows[k].preference[0]);
    }
    std::vector<ObjectiveVector> pts;
    for (const auto& row : rows) {
        pts.push_back(row.objectives);
    }
    const auto flags = dominated_flags(pts);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        EXPECT_EQ(rows[k].dominated, flags[k]);
    }
    EXPECT_EQ(pnds(pts), r.pnds);
    EXPECT_EQ(hypervolume(pts), *r.hv);
}

TEST_F(ProblemZero, ExplicitDivisions)
{
    EvaluationParams p;
    p.divisions = 4;
    const auto r = evaluate_policy(*random_policy(0), config, p, front.get());
    EXPECT_EQ(r.lattice_count, 5u);
    EXPECT_EQ(r.records.front().preference.vector(), (std::vector<double> { 0.0, 1.0 }));
}

TEST_F(ProblemZero, DeterminismProbe)
{
    const PreferenceVector w { { 0.5, 0.5 } };
    EXPECT_TRUE(probe_determinism(*random_policy(0), config, w));
    auto counter = std::make_shared<std::size_t>(0);
    const auto flaky = callable_policy("flaky", [counter](const Observation&, const PreferenceVector&) -> std::size_t { return (*counter)++ % 3; });
    EXPECT_FALSE(probe_determinism(*flaky, config, w));
}

TEST(Harness, LargeGraphReportsRawHvOnly)
{
    const auto c = load_problem("6a");
    EvaluationParams p;
    p.divisions = 2;
    p.ordering.n_samp = 1;
    p.ordering.n_step = 3;
    const auto r = evaluate_policy(*random_policy(0), c, p, nullptr);
    EXPECT_TRUE(r.hv.has_value());
    EXPECT_FALSE(r.hv_ratio.has_value());
    EXPECT_TRUE(to_json(r)["hv_ratio"].is_null());
}

TEST(Harness, OsSensitivityRows)
{
    const auto c = load_problem("0");
    const std::vector<double> alphas { 0.2, 1.0, 5.0 };
    const std::vector<std::uint64_t> seeds { 0, 1, 2 };
    const auto rows = os_sensitivity(*random_policy(2), c, alphas, seeds, 2, 5);
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& row : rows) {
        EXPECT_EQ(row.scores.size(), 3u);
        EXPECT_EQ(row.scores, rows.front().scores); // N = 2: alpha has no effect
    }
}

TEST(Harness, MonotoneSyntheticFiveObjectivesScoresOneForEveryAlpha)
{
    for (double alpha : { 0.2, 1.0, 5.0 }) {
        for (std::uint64_t seed : { 0u, 1u, 2u }) {
            Rng rng(mix_seed(seed, kOrderingScoreStream));
            const auto r = ordering_score([](const PreferenceVector& w) { return w.vector(); }, 5, { 5, 11, alpha }, rng);
            EXPECT_EQ(r.score, 1.0) << alpha;
        }
    }
}

TEST(Harness, ConstantPolicyHasUnitOrderingScore)
{
    const auto c = load_problem("1c");
    const auto r = evaluate_policy(*constant_policy(1), c, {}, nullptr);
    EXPECT_EQ(r.ordering_score, 1.0);
    EXPECT_EQ(r.nondominated_count, r.records.size());
}

TEST(Harness, FrontFileExport)
{
    const auto f = ideal_front(load_problem("1c"));
    const auto csv = export_front(f);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "P0,P1,J0,J1,dominated");
    const auto rows = parse_front_csv(csv);
    ASSERT_EQ(rows.size(), f.points.size());
    std::vector<ObjectiveVector> pts;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        EXPECT_FALSE(rows[k].dominated);
        EXPECT_TRUE(rows[k].preference.empty());
        if (k > 0) {
            EXPECT_LE(rows[k - 1].objectives, rows[k].objectives);
        }
        pts.push_back(rows[k].objectives);
    }
    EXPECT_EQ(hypervolume(pts), f.hv);
}

TEST(Harness, CsvParseErrors)
{
    EXPECT_THROW((void)parse_front_csv(""), Error);
    EXPECT_THROW((void)parse_front_csv("w0,w1,J0,J1,dominated\n0.5,0.5,1\n"), Error);
    EXPECT_THROW((void)parse_front_csv("w0,w1,J0,J1,dominated\n0.5,0.5,x,1,0\n"), Error);
}
