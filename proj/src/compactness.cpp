#include "gerrytopo/compactness.hpp"

#include "gerrytopo/compare.hpp"
#include "gerrytopo/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

namespace gerrytopo {

double polsby_popper(const PolygonSet& g) {
    const double perimeter = polygon_perimeter(g);
    if (!(perimeter > 0.0)) throw GeometryError("Polsby-Popper needs a positive perimeter");
    return 4.0 * std::numbers::pi * polygon_area(g) / (perimeter * perimeter);
}

namespace {

Circle circle_from(const Point2& a, const Point2& b) {
    const Point2 c{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
    return {c, std::hypot(a.x - c.x, a.y - c.y)};
}

// Circumcircle; falls back to the widest pair for (near-)collinear points.
Circle circle_from(const Point2& a, const Point2& b, const Point2& c) {
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double d = 2.0 * (bx * cy - by * cx);
    if (d == 0.0) {
        Circle best = circle_from(a, b);
        for (const Circle& alt : {circle_from(a, c), circle_from(b, c)}) {
            if (alt.radius > best.radius) best = alt;
        }
        return best;
    }
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    const double ux = (cy * b2 - by * c2) / d;
    const double uy = (bx * c2 - cx * b2) / d;
    return {{a.x + ux, a.y + uy}, std::hypot(ux, uy)};
}

bool covers(const Circle& c, const Point2& p) {
    return std::hypot(p.x - c.center.x, p.y - c.center.y) <= c.radius * (1.0 + 1e-12) + 1e-300;
}

}  // namespace

Circle min_enclosing_circle(std::span<const Point2> points, std::uint64_t seed) {
    if (points.empty()) throw ParameterError("minimum enclosing circle of an empty point set");
    std::vector<Point2> pts(points.begin(), points.end());
    std::mt19937_64 rng(seed);
    std::shuffle(pts.begin(), pts.end(), rng);

    // Iterative form of Welzl's move-to-front recursion.
    Circle c{pts[0], 0.0};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (covers(c, pts[i])) continue;
        c = {pts[i], 0.0};
        for (std::size_t j = 0; j < i; ++j) {
            if (covers(c, pts[j])) continue;
            c = circle_from(pts[i], pts[j]);
            for (std::size_t k = 0; k < j; ++k) {
                if (!covers(c, pts[k])) c = circle_from(pts[i], pts[j], pts[k]);
            }
        }
    }
    return c;
}

double reock(const PolygonSet& g, std::uint64_t seed) {
    std::vector<Point2> pts;
    for (const Ring* ring : g.rings()) pts.insert(pts.end(), ring->vertices().begin(), ring->vertices().end());
    const Circle c = min_enclosing_circle(pts, seed);
    if (!(c.radius > 0.0)) throw GeometryError("Reock needs a positive enclosing radius");
    return polygon_area(g) / (std::numbers::pi * c.radius * c.radius);
}

std::vector<CompactnessRow> compactness_scores(const UnitCollection& districts, std::uint64_t seed) {
    std::vector<CompactnessRow> rows;
    rows.reserve(districts.size());
    for (const auto& d : districts.units()) {
        rows.push_back({d.id, polsby_popper(d.geometry), reock(d.geometry, seed)});
    }
    return rows;
}

std::string compactness_csv(const std::vector<CompactnessRow>& rows) {
    std::ostringstream out;
    out << "district_id,polsby_popper,reock\n";
    for (const auto& r : rows) {
        out << r.district_id << ',' << format_real(r.polsby_popper) << ',' << format_real(r.reock) << '\n';
    }
    return out.str();
}

std::vector<CompactnessRow> parse_compactness_csv(const std::string& document) {
    std::istringstream in(document);
    std::string line;
    std::vector<CompactnessRow> rows;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header) {
            if (line != "district_id,polsby_popper,reock") {
                throw ParameterError("row 1: expected header district_id,polsby_popper,reock");
            }
            header = true;
            continue;
        }
        std::istringstream fields(line);
        CompactnessRow row;
        std::string pp, rk;
        if (!std::getline(fields, row.district_id, ',') || !std::getline(fields, pp, ',') ||
            !std::getline(fields, rk)) {
            throw ParameterError("row " + std::to_string(line_no) + ": expected 3 fields");
        }
        try {
            row.polsby_popper = std::stod(pp);
            row.reock = std::stod(rk);
        } catch (const std::exception&) {
            throw ParameterError("row " + std::to_string(line_no) + ": non-numeric score");
        }
        rows.push_back(std::move(row));
    }
    if (!header) throw ParameterError("empty scores file");
    return rows;
}

namespace {

// Continued fraction for I_x(a, b) (modified Lentz), valid for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
    constexpr double kTiny = 1e-300;
    constexpr double kTolerance = 1e-12;
    constexpr int kMaxIterations = 10000;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + num * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + num / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + num * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + num / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kTolerance) return h;
    }
    throw Error("incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw ParameterError("incomplete beta needs 0 <= x <= 1");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                             b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double df) {
    if (!(df > 0.0)) throw ParameterError("degrees of freedom must be positive");
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    return std::clamp(incomplete_beta(df / 2.0, 0.5, x), 0.0, 1.0);
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ParameterError("paired t-test needs equal-length samples");
    const std::size_t n = a.size();
    if (n < 2) throw ParameterError("paired t-test needs at least 2 pairs");
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    double mean = 0.0;
    for (double x : d) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : d) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw DegenerateSampleError("paired differences have zero variance");

    TTestResult r;
    r.t_statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
    r.degrees_of_freedom = n - 1;
    r.p_value = student_t_two_tailed(r.t_statistic, static_cast<double>(r.degrees_of_freedom));
    return r;
}

std::string ttest_json(const std::string& metric, const TTestResult& result) {
    nlohmann::json doc = {{"metric", metric},
                          {"t", result.t_statistic},
                          {"df", result.degrees_of_freedom},
                          {"p", result.p_value}};
    return doc.dump(2) + "\n";
}

}  // namespace gerrytopo
