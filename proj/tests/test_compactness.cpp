#include "gerrytopo/compactness.hpp"
#include "gerrytopo/error.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <numbers>
#include <random>

using namespace gerrytopo;

namespace {

constexpr double kPi = std::numbers::pi;

PolygonSet rectangle(double w, double h) { return make_polygon({{0, 0}, {w, 0}, {w, h}, {0, h}}); }

PolygonSet regular_polygon(int n, double r = 1.0, Point2 c = {0, 0}) {
    std::vector<Point2> v;
    for (int i = 0; i < n; ++i) {
        const double a = 2 * kPi * i / n;
        v.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
    }
    return make_polygon(v);
}

PolygonSet moved(const PolygonSet& g, double theta, Point2 shift, double s) {
    std::vector<Point2> v;
    for (const auto& p : g.parts()[0].outer.vertices()) {
        v.push_back({s * (p.x * std::cos(theta) - p.y * std::sin(theta)) + shift.x,
                     s * (p.x * std::sin(theta) + p.y * std::cos(theta)) + shift.y});
    }
    return make_polygon(v);
}

}  // namespace

TEST(PolsbyPopper, Examples) {
    EXPECT_NEAR(polsby_popper(rectangle(1, 1)), kPi / 4, 1e-15);
    EXPECT_NEAR(polsby_popper(rectangle(10, 1)), 40 * kPi / 484, 1e-15);
    EXPECT_NEAR(polsby_popper(regular_polygon(360)), 1.0, 1e-4);
}

TEST(PolsbyPopper, MultiPartSumsAreaAndPerimeter) {
    PolygonSet two({Polygon{Ring({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), {}}, Polygon{Ring({{3, 0}, {4, 0}, {4, 1}, {3, 1}}), {}}});
    EXPECT_NEAR(polsby_popper(two), 4 * kPi * 2 / 64, 1e-15);
}

TEST(MinEnclosingCircle, SinglePoint) {
    const std::vector<Point2> p{{3, 4}};
    const auto c = min_enclosing_circle(p);
    EXPECT_EQ(c.radius, 0.0);
    EXPECT_EQ(c.center, (Point2{3, 4}));
}

TEST(MinEnclosingCircle, SquareCorners) {
    const std::vector<Point2> p{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto c = min_enclosing_circle(p);
    EXPECT_NEAR(c.center.x, 0.5, 1e-15);
    EXPECT_NEAR(c.center.y, 0.5, 1e-15);
    EXPECT_NEAR(c.radius, std::sqrt(2.0) / 2, 1e-15);
}

TEST(MinEnclosingCircle, Collinear) {
    const std::vector<Point2> p{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    const auto c = min_enclosing_circle(p);
    EXPECT_NEAR(c.radius, 1.5 * std::sqrt(2.0), 1e-12);
}

TEST(MinEnclosingCircle, Empty) { EXPECT_THROW(min_enclosing_circle(std::span<const Point2>{}), ParameterError); }

TEST(MinEnclosingCircle, MatchesBruteForce) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Point2> pts(trial % 2 ? 50 : 1 + trial % 12);
        for (auto& p : pts) p = {u(rng), u(rng)};
        const auto ref = oracle::brute_force_mec(pts);
        for (std::uint64_t seed : {0u, 1u, 99u}) {
            const auto c = min_enclosing_circle(pts, seed);
            EXPECT_NEAR(c.radius, ref.radius, 1e-9);
            EXPECT_TRUE(oracle::circle_contains_all(c, pts, 1e-9));
        }
    }
}

TEST(Reock, Examples) {
    EXPECT_NEAR(reock(rectangle(1, 1)), 2 / kPi, 1e-12);
    EXPECT_NEAR(reock(rectangle(10, 1)), 10 / (kPi * 101 / 4), 1e-12);
    EXPECT_NEAR(reock(regular_polygon(360)), 1.0, 1e-3);
}

TEST(CompactnessProperties, SimilarityInvariance) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> angle(0, 2 * kPi), shift(-1e3, 1e3), scale(0.01, 100);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = regular_polygon(3 + trial % 17, 1.0 + trial % 5);
        const auto h = moved(g, angle(rng), {shift(rng), shift(rng)}, scale(rng));
        EXPECT_NEAR(polsby_popper(h), polsby_popper(g), 1e-12 * polsby_popper(g));
        EXPECT_NEAR(reock(h), reock(g), 1e-12 * reock(g));
    }
}

TEST(CompactnessProperties, ScoresBoundedByOne) {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Point2> tri{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
        PolygonSet g;
        try {
            g = make_polygon(tri);
        } catch (const GeometryError&) {
            continue;
        }
        EXPECT_GT(polsby_popper(g), 0.0);
        EXPECT_LT(polsby_popper(g), 1.0);
        EXPECT_GT(reock(g), 0.0);
        EXPECT_LT(reock(g), 1.0);
    }
}

TEST(CompactnessCsv, RoundTrip) {
    const std::vector<CompactnessRow> rows{{"D1", 0.25, 0.5}, {"D2", 0.1 + 0.2, 1.0 / 3.0}};
    const auto text = compactness_csv(rows);
    EXPECT_EQ(text.substr(0, text.find('\n')), "district_id,polsby_popper,reock");
    const auto back = parse_compactness_csv(text);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].district_id, "D2");
    EXPECT_EQ(back[1].polsby_popper, rows[1].polsby_popper);
    EXPECT_EQ(back[1].reock, rows[1].reock);
    EXPECT_THROW(parse_compactness_csv("wrong,header\n"), ParameterError);
}

TEST(CompactnessScores, PerDistrict) {
    std::vector<VotingUnit> units{{"SQ", rectangle(1, 1), 0, 0, UnitKind::district},
                                  {"STRIP", moved(rectangle(10, 1), 0, {5, 5}, 1), 0, 0, UnitKind::district}};
    const auto rows = compactness_scores(UnitCollection(units));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1].district_id, "STRIP");
    EXPECT_NEAR(rows[0].reock, 2 / kPi, 1e-12);
    EXPECT_NEAR(rows[1].polsby_popper, 40 * kPi / 484, 1e-12);
}

TEST(IncompleteBeta, KnownValues) {
    EXPECT_EQ(incomplete_beta(2, 3, 0), 0.0);
    EXPECT_EQ(incomplete_beta(2, 3, 1), 1.0);
    // I_x(1, 1) = x; I_x(a, 1) = x^a
    EXPECT_NEAR(incomplete_beta(1, 1, 0.3), 0.3, 1e-14);
    EXPECT_NEAR(incomplete_beta(2.5, 1, 0.6), std::pow(0.6, 2.5), 1e-14);
    // symmetry I_x(a, b) = 1 - I_{1-x}(b, a)
    EXPECT_NEAR(incomplete_beta(3, 7, 0.2), 1 - incomplete_beta(7, 3, 0.8), 1e-14);
    EXPECT_THROW(incomplete_beta(0, 1, 0.5), ParameterError);
    EXPECT_THROW(incomplete_beta(1, 1, 1.5), ParameterError);
}

TEST(StudentT, CauchyClosedForm) {
    // df = 1: p = 1 - 2 atan(t) / pi
    for (double t : {0.25, 1.0, 3.0, 12.0}) EXPECT_NEAR(student_t_two_tailed(t, 1), 1 - 2 * std::atan(t) / kPi, 1e-13);
}

TEST(StudentT, QuadratureGrid) {
    for (double t : {0.5, 1.0, 2.0, 3.0}) {
        for (double df : {1.0, 4.0, 10.0, 30.0}) {
            EXPECT_NEAR(student_t_two_tailed(t, df), oracle::t_two_tailed_quadrature(t, df), 1e-8) << t << " " << df;
            EXPECT_EQ(student_t_two_tailed(-t, df), student_t_two_tailed(t, df));
        }
    }
}

TEST(PairedTTest, ZeroMeanDifferences) {
    const std::vector<double> a{1, 0, 1, 0}, b{0, 1, 0, 1};
    const auto r = paired_t_test(a, b);
    EXPECT_EQ(r.t_statistic, 0.0);
    EXPECT_EQ(r.degrees_of_freedom, 3u);
    EXPECT_NEAR(r.p_value, 1.0, 1e-15);
}

TEST(PairedTTest, OneToFive) {
    const std::vector<double> a{1, 2, 3, 4, 5}, b{0, 0, 0, 0, 0};
    const auto r = paired_t_test(a, b);
    EXPECT_NEAR(r.t_statistic, 3 * std::sqrt(2.0), 1e-12);
    EXPECT_EQ(r.degrees_of_freedom, 4u);
    EXPECT_NEAR(r.p_value, 0.01324, 1e-4);
    EXPECT_NEAR(r.p_value, oracle::t_two_tailed_quadrature(r.t_statistic, 4), 1e-8);
}

TEST(PairedTTest, Degenerate) {
    const std::vector<double> a{3, 4, 5}, b{1, 2, 3};
    EXPECT_THROW(paired_t_test(a, b), DegenerateSampleError);
}

TEST(PairedTTest, Preconditions) {
    const std::vector<double> one{1}, two{1, 2};
    EXPECT_THROW(paired_t_test(one, one), ParameterError);
    EXPECT_THROW(paired_t_test(one, two), ParameterError);
}

TEST(PairedTTest, SwapSymmetry) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n(0.5, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(2 + trial % 20), b(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = n(rng), b[i] = n(rng);
        const auto ab = paired_t_test(a, b), ba = paired_t_test(b, a);
        EXPECT_EQ(ab.t_statistic, -ba.t_statistic);
        EXPECT_EQ(ab.p_value, ba.p_value);
        EXPECT_GE(ab.p_value, 0.0);
        EXPECT_LE(ab.p_value, 1.0);
    }
}

TEST(PairedTTest, JsonReport) {
    const auto doc = nlohmann::json::parse(ttest_json("reock", {4.5, 4, 0.01}));
    EXPECT_EQ(doc["metric"], "reock");
    EXPECT_EQ(doc["t"], 4.5);
    EXPECT_EQ(doc["df"], 4);
    EXPECT_EQ(doc["p"], 0.01);
}
