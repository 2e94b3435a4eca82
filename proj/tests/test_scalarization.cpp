#include "graphalloc/preferences.hpp"
#include "graphalloc/scalarization.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace graphalloc;

namespace {

ScalarizerSpec spec(ScalarizerMethod m, double mu = 0.1, double theta = 5.0)
{
    ScalarizerSpec s;
    s.method = m;
    s.mu = mu;
    s.theta = theta;
    return s;
}

std::vector<double> random_point(Rng& rng, std::size_t n)
{
    std::vector<double> p(n);
    for (auto& x : p) {
        x = rng.uniform01();
    }
    return p;
}

} // namespace

TEST(Normalizer, KeepsIdealWhenCovered)
{
    auto n = Normalizer::from_ideal(std::vector<double> { 10, 10 });
    EXPECT_EQ(n.normalize(std::vector<double> { 5, 10 }), (ObjectiveVector { 0.5, 1.0 }));
    EXPECT_EQ(n.ideal(), (std::vector<double> { 10, 10 }));
}

TEST(Normalizer, RaisesIdeal)
{
    auto n = Normalizer::from_ideal(std::vector<double> { 10, 10 });
    EXPECT_EQ(n.normalize(std::vector<double> { 20, 5 }), (ObjectiveVector { 1.0, 0.5 }));
    EXPECT_EQ(n.ideal(), (std::vector<double> { 20, 10 }));
}

TEST(Normalizer, ZeroAtFreshNormalizer)
{
    Normalizer n(2);
    EXPECT_EQ(n.normalize(std::vector<double> { 0, 0 }), (ObjectiveVector { 0, 0 }));
}

TEST(Normalizer, RejectsNegativeAndWrongSize)
{
    Normalizer n(2);
    try {
        (void)n.normalize(std::vector<double> { -1, 0 });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NegativeObjective);
    }
    try {
        (void)n.normalize(std::vector<double> { 1, 0, 2 });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(Normalizer, MergeIsComponentwiseMax)
{
    const auto a = Normalizer::from_ideal(std::vector<double> { 10, 5 });
    const auto b = Normalizer::from_ideal(std::vector<double> { 7, 9 });
    EXPECT_EQ(merge_normalizers(a, b).ideal(), (std::vector<double> { 10, 9 }));
    EXPECT_EQ(merge_normalizers(a, a).ideal(), a.ideal());
}

TEST(Normalizer, MergeLaws)
{
    Rng rng(6);
    for (int k = 0; k < 200; ++k) {
        const auto a = Normalizer::from_ideal(random_point(rng, 3));
        const auto b = Normalizer::from_ideal(random_point(rng, 3));
        const auto c = Normalizer::from_ideal(random_point(rng, 3));
        EXPECT_EQ(merge_normalizers(a, b).ideal(), merge_normalizers(b, a).ideal());
        EXPECT_EQ(merge_normalizers(merge_normalizers(a, b), c).ideal(), merge_normalizers(a, merge_normalizers(b, c)).ideal());
    }
}

TEST(Normalizer, IdealNeverDecreases)
{
    Rng rng(12);
    Normalizer n(3);
    auto prev = n.ideal();
    for (int k = 0; k < 500; ++k) {
        auto p = random_point(rng, 3);
        for (auto& x : p) {
            x *= 10;
        }
        const auto out = n.normalize(p);
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_GE(n.ideal()[i], prev[i]);
            EXPECT_LE(out[i], 1.0);
        }
        prev = n.ideal();
    }
}

TEST(Scalarize, Examples)
{
    const PreferenceVector half { { 0.5, 0.5 } };
    EXPECT_DOUBLE_EQ(scalarize(std::vector<double> { 1, 1 }, half, spec(ScalarizerMethod::SmoothTchebycheff, 0.1)), -0.1 * std::log(2.0));
    EXPECT_DOUBLE_EQ(scalarize(std::vector<double> { 1, 0 }, half, spec(ScalarizerMethod::Tchebycheff)), -0.5);
    EXPECT_DOUBLE_EQ(scalarize(std::vector<double> { 0.6, 0.4 }, half, spec(ScalarizerMethod::WeightedSum)), 0.5);
}

TEST(Scalarize, PbiAtIdealDirection)
{
    // point on the preference ray: d2 = 0, d1 = distance along the ray from z*
    const PreferenceVector w { { 0.5, 0.5 } };
    const double v = scalarize(std::vector<double> { 0.5, 0.5 }, w, spec(ScalarizerMethod::PBI, 0.1, 5.0));
    EXPECT_NEAR(v, -std::sqrt(0.5), 1e-12);
    const double off = scalarize(std::vector<double> { 1.0, 0.0 }, w, spec(ScalarizerMethod::PBI, 0.1, 5.0));
    EXPECT_LT(off, v + 1e-12);
}

TEST(Scalarize, NonPositiveMu)
{
    try {
        (void)scalarize(std::vector<double> { 1, 1 }, PreferenceVector({ 0.5, 0.5 }), spec(ScalarizerMethod::SmoothTchebycheff, 0.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonPositiveMu);
    }
}

TEST(Scalarize, SmoothTchebycheffSandwich)
{
    Rng rng(21);
    for (double mu : { 1.0, 0.1, 0.01 }) {
        for (int k = 0; k < 1000; ++k) {
            const auto n = static_cast<std::size_t>(rng.uniform_int(2, 6));
            const auto j = random_point(rng, n);
            const auto w = sample_dirichlet(n, 1.0, rng);
            const double tch = scalarize(j, w, spec(ScalarizerMethod::Tchebycheff));
            const double stch = scalarize(j, w, spec(ScalarizerMethod::SmoothTchebycheff, mu));
            EXPECT_LE(stch, tch + 1e-12);
            EXPECT_LE(tch - stch, mu * std::log(static_cast<double>(n)) + 1e-12);
        }
    }
}

TEST(Scalarize, AllMethodsMaximizedAtIdeal)
{
    Rng rng(23);
    for (auto m : { ScalarizerMethod::WeightedSum, ScalarizerMethod::Tchebycheff, ScalarizerMethod::SmoothTchebycheff, ScalarizerMethod::PBI }) {
        for (int k = 0; k < 300; ++k) {
            const auto w = sample_dirichlet(3, 1.0, rng);
            const auto at_ideal = scalarize(std::vector<double> { 1, 1, 1 }, w, spec(m));
            EXPECT_LE(scalarize(random_point(rng, 3), w, spec(m)), at_ideal + 1e-12) << to_string(m);
        }
    }
}

TEST(Scalarize, MonotoneInEachComponent)
{
    Rng rng(29);
    for (auto m : { ScalarizerMethod::WeightedSum, ScalarizerMethod::Tchebycheff, ScalarizerMethod::SmoothTchebycheff }) {
        for (int k = 0; k < 300; ++k) {
            const auto w = sample_dirichlet(3, 1.0, rng);
            auto a = random_point(rng, 3);
            auto b = a;
            b[static_cast<std::size_t>(rng.uniform_int(0, 2))] += 0.1;
            EXPECT_LE(scalarize(a, w, spec(m)), scalarize(b, w, spec(m)) + 1e-12);
        }
    }
}

TEST(Scalarize, MethodNamesRoundTrip)
{
    for (auto m : { ScalarizerMethod::WeightedSum, ScalarizerMethod::Tchebycheff, ScalarizerMethod::SmoothTchebycheff, ScalarizerMethod::PBI }) {
        EXPECT_EQ(parse_scalarizer_method(to_string(m)), m);
    }
    EXPECT_THROW((void)parse_scalarizer_method("chebyshev-ish"), Error);
}
