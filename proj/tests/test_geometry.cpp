#include "gerrytopo/error.hpp"
#include "gerrytopo/geometry.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace gerrytopo;

namespace {

std::vector<Point2> unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }
std::vector<Point2> centered_hole() { return {{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}}; }

std::vector<Point2> random_convex(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    std::uniform_real_distribution<double> radius(0.5, 2.0);
    std::vector<double> angles(n);
    for (auto& a : angles) a = angle(rng);
    std::sort(angles.begin(), angles.end());
    // Points on an ellipse are in convex position.
    const double rx = radius(rng), ry = radius(rng);
    std::vector<Point2> pts;
    for (double a : angles) pts.push_back({rx * std::cos(a), ry * std::sin(a)});
    return pts;
}

PolygonSet transform(const PolygonSet& g, double theta, Point2 shift, double scale) {
    std::vector<Polygon> parts;
    auto map = [&](const Ring& r) {
        std::vector<Point2> v;
        for (const auto& p : r.vertices()) {
            v.push_back({scale * (p.x * std::cos(theta) - p.y * std::sin(theta)) + shift.x,
                         scale * (p.x * std::sin(theta) + p.y * std::cos(theta)) + shift.y});
        }
        return Ring(std::move(v));
    };
    for (const auto& part : g.parts()) {
        Polygon out{map(part.outer), {}};
        for (const auto& h : part.holes) out.holes.push_back(map(h));
        parts.push_back(std::move(out));
    }
    return PolygonSet(std::move(parts));
}

}  // namespace

TEST(PolygonArea, UnitSquare) { EXPECT_DOUBLE_EQ(polygon_area(make_polygon(unit_square())), 1.0); }

TEST(PolygonArea, Triangle) { EXPECT_DOUBLE_EQ(polygon_area(make_polygon({{0, 0}, {1, 0}, {0, 1}})), 0.5); }

TEST(PolygonArea, SquareWithHole) {
    EXPECT_DOUBLE_EQ(polygon_area(make_polygon(unit_square(), {centered_hole()})), 0.75);
}

TEST(PolygonArea, OrientationIndependent) {
    auto cw = unit_square();
    std::reverse(cw.begin(), cw.end());
    EXPECT_DOUBLE_EQ(polygon_area(make_polygon(cw)), 1.0);
}

TEST(PolygonArea, DegenerateRingRejected) {
    EXPECT_THROW(make_polygon({{0, 0}, {1, 0}}), GeometryError);
    EXPECT_THROW(make_polygon({{0, 0}, {1, 0}, {2, 0}}), GeometryError);
    EXPECT_THROW(make_polygon({{0, 0}, {NAN, 0}, {0, 1}}), GeometryError);
}

TEST(PolygonSet, HoleOutsideOuterRejected) {
    EXPECT_THROW(make_polygon(unit_square(), {{{5, 5}, {6, 5}, {6, 6}}}), GeometryError);
}

TEST(PolygonPerimeter, UnitSquare) { EXPECT_DOUBLE_EQ(polygon_perimeter(make_polygon(unit_square())), 4.0); }

TEST(PolygonPerimeter, Triangle) {
    EXPECT_NEAR(polygon_perimeter(make_polygon({{0, 0}, {1, 0}, {0, 1}})), 2 + std::sqrt(2.0), 1e-12);
}

TEST(PolygonPerimeter, TwoDisjointSquares) {
    std::vector<Point2> shifted = {{3, 0}, {4, 0}, {4, 1}, {3, 1}};
    PolygonSet g({Polygon{Ring(unit_square()), {}}, Polygon{Ring(shifted), {}}});
    EXPECT_DOUBLE_EQ(polygon_perimeter(g), 8.0);
    EXPECT_DOUBLE_EQ(polygon_area(g), 2.0);
}

TEST(PolygonPerimeter, HolesExcludedByDefault) {
    const auto g = make_polygon(unit_square(), {centered_hole()});
    EXPECT_DOUBLE_EQ(polygon_perimeter(g), 4.0);
    EXPECT_DOUBLE_EQ(polygon_perimeter(g, PerimeterMode::include_holes), 6.0);
}

TEST(PointInPolygon, Examples) {
    EXPECT_TRUE(point_in_polygon({0.5, 0.5}, make_polygon(unit_square())));
    EXPECT_FALSE(point_in_polygon({2, 2}, make_polygon(unit_square())));
    EXPECT_FALSE(point_in_polygon({0.5, 0.5}, make_polygon(unit_square(), {centered_hole()})));
    EXPECT_TRUE(point_in_polygon({0.1, 0.5}, make_polygon(unit_square(), {centered_hole()})));
}

TEST(PointInPolygon, SharedEdgeClaimedOnce) {
    const auto left = make_polygon(unit_square());
    const auto right = make_polygon({{1, 0}, {2, 0}, {2, 1}, {1, 1}});
    const auto below = make_polygon({{0, -1}, {1, -1}, {1, 0}, {0, 0}});
    for (double t : {0.1, 0.25, 0.5, 0.9}) {
        // vertical shared edge x = 1
        EXPECT_EQ(int(point_in_polygon({1.0, t}, left)) + int(point_in_polygon({1.0, t}, right)), 1) << t;
        // horizontal shared edge y = 0
        EXPECT_EQ(int(point_in_polygon({t, 0.0}, left)) + int(point_in_polygon({t, 0.0}, below)), 1) << t;
    }
}

TEST(PointInPolygon, LeftAndTopEdgesInside) {
    const auto sq = make_polygon(unit_square());
    EXPECT_TRUE(point_in_polygon({0.0, 0.5}, sq));
    EXPECT_FALSE(point_in_polygon({1.0, 0.5}, sq));
    EXPECT_TRUE(point_in_polygon({0.5, 1.0}, sq));
    EXPECT_FALSE(point_in_polygon({0.5, 0.0}, sq));
}

TEST(GeometryProperties, AreaInvariantUnderRigidMotion) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi), shift(-1e4, 1e4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = make_polygon(random_convex(rng, 3 + trial % 20));
        const double area = polygon_area(g);
        const auto moved = transform(g, angle(rng), {shift(rng), shift(rng)}, 1.0);
        EXPECT_NEAR(polygon_area(moved), area, 1e-9 * area);
        EXPECT_NEAR(polygon_perimeter(moved), polygon_perimeter(g), 1e-9 * polygon_perimeter(g));
    }
}

TEST(GeometryProperties, ScalingLaws) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = make_polygon(random_convex(rng, 3 + trial % 15), {});
        const double s = scale(rng);
        const auto scaled = transform(g, 0.0, {0, 0}, s);
        EXPECT_NEAR(polygon_area(scaled), s * s * polygon_area(g), 1e-9 * s * s * polygon_area(g));
        EXPECT_NEAR(polygon_perimeter(scaled), s * polygon_perimeter(g), 1e-9 * s * polygon_perimeter(g));
    }
}

TEST(GeometryProperties, ScalingWithHoles) {
    const auto g = make_polygon(unit_square(), {centered_hole()});
    const auto scaled = transform(g, 0.3, {5, -2}, 3.0);
    EXPECT_NEAR(polygon_area(scaled), 9 * 0.75, 1e-12);
    EXPECT_NEAR(polygon_perimeter(scaled), 12.0, 1e-12);
}

TEST(GeometryProperties, ConvexPointInPolygonMatchesHalfPlanes) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> q(-2.5, 2.5);
    for (int shape = 0; shape < 20; ++shape) {
        const auto ring = random_convex(rng, 3 + shape);
        const auto g = make_polygon(ring);
        for (int i = 0; i < 1000; ++i) {
            const Point2 p{q(rng), q(rng)};
            ASSERT_EQ(point_in_polygon(p, g), oracle::inside_convex(ring, p)) << p.x << "," << p.y;
        }
    }
}

TEST(UnitCollection, RejectsDuplicateIds) {
    std::vector<VotingUnit> units{{"A", make_polygon(unit_square()), 1, 1, UnitKind::precinct},
                                  {"A", make_polygon(unit_square()), 1, 1, UnitKind::precinct}};
    EXPECT_THROW(UnitCollection{units}, GeometryError);
}

TEST(UnitCollection, BoundsAndLookup) {
    std::vector<VotingUnit> units{{"A", make_polygon(unit_square()), 1, 1, UnitKind::precinct},
                                  {"B", make_polygon({{1, 0}, {3, 0}, {3, 2}, {1, 2}}), 1, 1, UnitKind::precinct}};
    UnitCollection c(units);
    EXPECT_EQ(c.bounds().min, (Point2{0, 0}));
    EXPECT_EQ(c.bounds().max, (Point2{3, 2}));
    EXPECT_EQ(c.find("B"), 1u);
    EXPECT_EQ(c.find("Z"), UnitCollection::npos);
    EXPECT_NEAR(c.snap_tolerance(), 1e-9 * std::sqrt(13.0), 1e-20);
}
