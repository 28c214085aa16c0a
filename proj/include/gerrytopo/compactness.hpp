#pragma once

#include "gerrytopo/geometry.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gerrytopo {

struct Circle {
    Point2 center;
    double radius = 0.0;
};

struct CompactnessRow {
    std::string district_id;
    double polsby_popper = 0.0;
    double reock = 0.0;
};

struct TTestResult {
    double t_statistic = 0.0;
    std::size_t degrees_of_freedom = 0;
    double p_value = 1.0;
};

// 4 * pi * area / perimeter^2, perimeter over outer rings.
double polsby_popper(const PolygonSet& g);

// Smallest circle enclosing every point (Welzl, randomized by `seed`).
Circle min_enclosing_circle(std::span<const Point2> points, std::uint64_t seed = 0);

// area / area of the minimum enclosing circle of all ring vertices.
double reock(const PolygonSet& g, std::uint64_t seed = 0);

std::vector<CompactnessRow> compactness_scores(const UnitCollection& districts, std::uint64_t seed = 0);

// `district_id,polsby_popper,reock`
std::string compactness_csv(const std::vector<CompactnessRow>& rows);
std::vector<CompactnessRow> parse_compactness_csv(const std::string& document);

// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_tailed(double t, double df);

// Two-tailed paired t-test on the differences a - b.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

// {"metric": ..., "t": ..., "df": ..., "p": ...}
std::string ttest_json(const std::string& metric, const TTestResult& result);

}  // namespace gerrytopo
