#include "gerrytopo/geometry.hpp"

#include "gerrytopo/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace gerrytopo {

double BoundingBox::diagonal() const {
    if (is_empty()) return 0.0;
    return std::hypot(width(), height());
}

bool BoundingBox::contains(const Point2& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
}

void BoundingBox::expand(const Point2& p) {
    min.x = std::min(min.x, p.x);
    min.y = std::min(min.y, p.y);
    max.x = std::max(max.x, p.x);
    max.y = std::max(max.y, p.y);
}

void BoundingBox::expand(const BoundingBox& other) {
    if (other.is_empty()) return;
    expand(other.min);
    expand(other.max);
}

BoundingBox BoundingBox::empty() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return BoundingBox{{inf, inf}, {-inf, -inf}};
}

Ring::Ring(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) {
        throw GeometryError("degenerate ring: " + std::to_string(vertices_.size()) +
                            " vertices (need at least 3)");
    }
    for (const auto& p : vertices_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw GeometryError("ring vertex has a non-finite coordinate");
        }
    }
    if (signed_area() == 0.0) {
        throw GeometryError("degenerate ring: zero area");
    }
}

double Ring::signed_area() const {
    // Shift by the first vertex to keep the cross products small.
    const Point2 o = vertices_.front();
    double twice = 0.0;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = vertices_[i];
        const Point2& b = vertices_[(i + 1) % n];
        twice += (a.x - o.x) * (b.y - o.y) - (b.x - o.x) * (a.y - o.y);
    }
    return 0.5 * twice;
}

double Ring::perimeter() const {
    double total = 0.0;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = vertices_[i];
        const Point2& b = vertices_[(i + 1) % n];
        total += std::hypot(b.x - a.x, b.y - a.y);
    }
    return total;
}

Point2 Ring::centroid() const {
    const Point2 o = vertices_.front();
    double cx = 0.0;
    double cy = 0.0;
    double twice = 0.0;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double ax = vertices_[i].x - o.x;
        const double ay = vertices_[i].y - o.y;
        const double bx = vertices_[(i + 1) % n].x - o.x;
        const double by = vertices_[(i + 1) % n].y - o.y;
        const double cross = ax * by - bx * ay;
        twice += cross;
        cx += (ax + bx) * cross;
        cy += (ay + by) * cross;
    }
    return Point2{o.x + cx / (3.0 * twice), o.y + cy / (3.0 * twice)};
}

BoundingBox Ring::bounds() const {
    BoundingBox box = BoundingBox::empty();
    for (const auto& p : vertices_) box.expand(p);
    return box;
}

namespace {

bool point_in_ring_set(const Point2& p, std::span<const Ring* const> rings) {
    bool inside = false;
    for (const Ring* ring : rings) {
        const auto& v = ring->vertices();
        const std::size_t n = v.size();
        for (std::size_t i = 0; i < n; ++i) {
            double x = 0.0;
            if (edge_crossing_x(v[i], v[(i + 1) % n], p.y, x) && p.x < x) inside = !inside;
        }
    }
    return inside;
}

}  // namespace

PolygonSet::PolygonSet(std::vector<Polygon> parts) : parts_(std::move(parts)) {
    for (const auto& part : parts_) {
        const Ring* outer[] = {&part.outer};
        for (const auto& hole : part.holes) {
            if (!point_in_ring_set(hole.centroid(), outer)) {
                throw GeometryError("hole does not lie inside its outer ring");
            }
        }
    }
}

BoundingBox PolygonSet::bounds() const {
    BoundingBox box = BoundingBox::empty();
    for (const auto& part : parts_) box.expand(part.outer.bounds());
    return box;
}

std::vector<const Ring*> PolygonSet::rings() const {
    std::vector<const Ring*> out;
    for (const auto& part : parts_) {
        out.push_back(&part.outer);
        for (const auto& hole : part.holes) out.push_back(&hole);
    }
    return out;
}

PolygonSet make_polygon(std::vector<Point2> outer, std::vector<std::vector<Point2>> holes) {
    Polygon part{Ring(std::move(outer)), {}};
    for (auto& h : holes) part.holes.emplace_back(std::move(h));
    std::vector<Polygon> parts;
    parts.push_back(std::move(part));
    return PolygonSet(std::move(parts));
}

double polygon_area(const PolygonSet& g) {
    double area = 0.0;
    for (const auto& part : g.parts()) {
        area += std::abs(part.outer.signed_area());
        for (const auto& hole : part.holes) area -= std::abs(hole.signed_area());
    }
    return std::max(area, 0.0);
}

double polygon_perimeter(const PolygonSet& g, PerimeterMode mode) {
    double total = 0.0;
    for (const auto& part : g.parts()) {
        total += part.outer.perimeter();
        if (mode == PerimeterMode::include_holes) {
            for (const auto& hole : part.holes) total += hole.perimeter();
        }
    }
    return total;
}

bool edge_crossing_x(const Point2& a, const Point2& b, double y, double& x_out) {
    if ((a.y < y) == (b.y < y)) return false;
    // Orient low-to-high so both polygons sharing this edge compute the same x.
    const Point2& lo = a.y < b.y ? a : b;
    const Point2& hi = a.y < b.y ? b : a;
    x_out = lo.x + (y - lo.y) * (hi.x - lo.x) / (hi.y - lo.y);
    return true;
}

bool point_in_polygon(const Point2& p, const PolygonSet& g) {
    const auto rings = g.rings();
    return point_in_ring_set(p, rings);
}

std::string to_string(UnitKind kind) {
    return kind == UnitKind::precinct ? "precinct" : "district";
}

UnitCollection::UnitCollection(std::vector<VotingUnit> units) : units_(std::move(units)) {
    std::unordered_set<std::string> seen;
    for (const auto& u : units_) {
        if (!seen.insert(u.id).second) throw GeometryError("duplicate unit id '" + u.id + "'");
        if (polygon_area(u.geometry) <= 0.0) {
            throw GeometryError("unit '" + u.id + "' has non-positive area");
        }
        bounds_.expand(u.geometry.bounds());
    }
}

std::size_t UnitCollection::find(const std::string& id) const {
    for (std::size_t i = 0; i < units_.size(); ++i) {
        if (units_[i].id == id) return i;
    }
    return npos;
}

}  // namespace gerrytopo
