#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gerrytopo {

// Planar point in a projected CRS (meters or abstract units).
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

struct BoundingBox {
    Point2 min{0.0, 0.0};
    Point2 max{0.0, 0.0};

    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
    double diagonal() const;
    bool contains(const Point2& p) const;
    void expand(const Point2& p);
    void expand(const BoundingBox& other);

    // Empty box that any expand() overwrites.
    static BoundingBox empty();
    bool is_empty() const { return min.x > max.x || min.y > max.y; }
};

// Closed polygonal chain. The first vertex is not repeated at the end.
// Construction rejects fewer than 3 vertices, non-finite coordinates and
// zero signed area.
class Ring {
public:
    explicit Ring(std::vector<Point2> vertices);

    const std::vector<Point2>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }

    // Shoelace area, positive for counter-clockwise rings.
    double signed_area() const;
    double perimeter() const;
    Point2 centroid() const;
    BoundingBox bounds() const;

private:
    std::vector<Point2> vertices_;
};

struct Polygon {
    Ring outer;
    std::vector<Ring> holes;
};

// One or more polygons with holes; every hole belongs to exactly one outer
// ring and must contain its own centroid inside that ring.
class PolygonSet {
public:
    PolygonSet() = default;
    explicit PolygonSet(std::vector<Polygon> parts);

    const std::vector<Polygon>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    BoundingBox bounds() const;

    // Every ring (outer rings and holes) in a fixed order.
    std::vector<const Ring*> rings() const;

private:
    std::vector<Polygon> parts_;
};

PolygonSet make_polygon(std::vector<Point2> outer, std::vector<std::vector<Point2>> holes = {});

double polygon_area(const PolygonSet& g);

enum class PerimeterMode { outer_only, include_holes };
double polygon_perimeter(const PolygonSet& g, PerimeterMode mode = PerimeterMode::outer_only);

// Even-odd test over all rings. Boundary points follow the top-left rule:
// points on a left or top edge are inside, on a right or bottom edge outside,
// so polygons that share an edge never both claim a point on it.
bool point_in_polygon(const Point2& p, const PolygonSet& g);

// x coordinate where the horizontal line y crosses edge (a, b) under the
// half-open rule, or false if it does not cross. Shared by point_in_polygon
// and the rasterizer so both resolve boundaries identically.
bool edge_crossing_x(const Point2& a, const Point2& b, double y, double& x_out);

enum class UnitKind { precinct, district };

std::string to_string(UnitKind kind);

struct VotingUnit {
    std::string id;
    PolygonSet geometry;
    std::uint64_t dem_votes = 0;
    std::uint64_t rep_votes = 0;
    UnitKind kind = UnitKind::precinct;
};

// Validated list of units with unique ids and a bounding box over every vertex.
class UnitCollection {
public:
    UnitCollection() = default;
    explicit UnitCollection(std::vector<VotingUnit> units);

    const std::vector<VotingUnit>& units() const { return units_; }
    const VotingUnit& operator[](std::size_t i) const { return units_[i]; }
    std::size_t size() const { return units_.size(); }
    bool empty() const { return units_.empty(); }
    const BoundingBox& bounds() const { return bounds_; }

    // Index of the unit with this id, or npos.
    std::size_t find(const std::string& id) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    // Tolerance for treating two vertices as the same point.
    double snap_tolerance() const { return 1e-9 * bounds_.diagonal(); }

private:
    std::vector<VotingUnit> units_;
    BoundingBox bounds_ = BoundingBox::empty();
};

}  // namespace gerrytopo
