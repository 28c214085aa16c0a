#include "gerrytopo/synthetic.hpp"

#include "gerrytopo/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace gerrytopo::synthetic {

namespace {

std::string cell_id(std::size_t r, std::size_t c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "P%02zu_%02zu", r, c);
    return buf;
}

std::vector<Point2> box(double x0, double y0, double x1, double y1) {
    return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

}  // namespace

UnitCollection square_grid(std::size_t rows, std::size_t cols, double cell, const VoteFn& votes) {
    std::vector<VotingUnit> units;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double y0 = static_cast<double>(rows - r - 1) * cell;
            const double x0 = static_cast<double>(c) * cell;
            const auto [dem, rep] = votes(r, c);
            units.push_back({cell_id(r, c), make_polygon(box(x0, y0, x0 + cell, y0 + cell)), dem, rep,
                             UnitKind::precinct});
        }
    }
    return UnitCollection(std::move(units));
}

UnitCollection block_districts(const UnitCollection& precincts, std::size_t rows, double cell,
                               const std::vector<BlockDistrict>& blocks) {
    std::vector<VotingUnit> units;
    for (const auto& b : blocks) {
        VotingUnit d;
        d.id = b.id;
        d.kind = UnitKind::district;
        d.geometry = make_polygon(box(static_cast<double>(b.col0) * cell, static_cast<double>(rows - b.row1) * cell,
                                      static_cast<double>(b.col1) * cell, static_cast<double>(rows - b.row0) * cell));
        for (std::size_t r = b.row0; r < b.row1; ++r) {
            for (std::size_t c = b.col0; c < b.col1; ++c) {
                const std::size_t i = precincts.find(cell_id(r, c));
                if (i == UnitCollection::npos) throw GeometryError("block references a missing precinct");
                d.dem_votes += precincts[i].dem_votes;
                d.rep_votes += precincts[i].rep_votes;
            }
        }
        units.push_back(std::move(d));
    }
    return UnitCollection(std::move(units));
}

UnitCollection island_precincts() {
    return square_grid(10, 10, 1.0, [](std::size_t r, std::size_t c) -> std::pair<std::uint64_t, std::uint64_t> {
        const bool island = r >= 4 && r <= 5 && c >= 4 && c <= 5;
        return island ? std::pair<std::uint64_t, std::uint64_t>{90, 10} : std::pair<std::uint64_t, std::uint64_t>{40, 60};
    });
}

PlanFixture packed_fixture() {
    auto precincts = island_precincts();
    auto districts = block_districts(precincts, 10, 1.0,
                                     {{"NORTH", 0, 0, 4, 10},
                                      {"SOUTH", 6, 0, 10, 10},
                                      {"WEST", 4, 0, 6, 4},
                                      {"EAST", 4, 6, 6, 10},
                                      {"CENTER", 4, 4, 6, 6}});
    return {std::move(precincts), std::move(districts)};
}

PlanFixture cracked_fixture() {
    auto precincts = island_precincts();
    auto districts = block_districts(precincts, 10, 1.0,
                                     {{"NW", 0, 0, 5, 5}, {"NE", 0, 5, 5, 10}, {"SW", 5, 0, 10, 5}, {"SE", 5, 5, 10, 10}});
    return {std::move(precincts), std::move(districts)};
}

namespace {

// Keep the part of `poly` with (p - mid) . normal <= 0.
std::vector<Point2> clip_half_plane(const std::vector<Point2>& poly, const Point2& mid, const Point2& normal) {
    std::vector<Point2> out;
    const std::size_t n = poly.size();
    auto side = [&](const Point2& p) { return (p.x - mid.x) * normal.x + (p.y - mid.y) * normal.y; };
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % n];
        const double sa = side(a);
        const double sb = side(b);
        if (sa <= 0.0) out.push_back(a);
        if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0)) {
            const double t = sa / (sa - sb);
            out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
    return out;
}

std::vector<Point2> drop_near_duplicates(const std::vector<Point2>& poly, double eps) {
    std::vector<Point2> out;
    for (const auto& p : poly) {
        if (!out.empty() && std::hypot(p.x - out.back().x, p.y - out.back().y) <= eps) continue;
        out.push_back(p);
    }
    while (out.size() > 1 && std::hypot(out.front().x - out.back().x, out.front().y - out.back().y) <= eps) {
        out.pop_back();
    }
    return out;
}

}  // namespace

std::vector<std::vector<Point2>> voronoi_cells(const std::vector<Point2>& sites, double width, double height) {
    const std::size_t n = sites.size();
    const double bucket = std::sqrt(width * height / static_cast<double>(std::max<std::size_t>(n, 1)));
    const auto bx = static_cast<std::size_t>(std::ceil(width / bucket));
    const auto by = static_cast<std::size_t>(std::ceil(height / bucket));
    std::vector<std::vector<std::size_t>> buckets(bx * by);
    auto bucket_of = [&](const Point2& p) {
        const auto cx = std::min(bx - 1, static_cast<std::size_t>(std::max(0.0, p.x / bucket)));
        const auto cy = std::min(by - 1, static_cast<std::size_t>(std::max(0.0, p.y / bucket)));
        return std::pair{cx, cy};
    };
    for (std::size_t i = 0; i < n; ++i) {
        const auto [cx, cy] = bucket_of(sites[i]);
        buckets[cy * bx + cx].push_back(i);
    }

    std::vector<std::vector<Point2>> cells(n);
    const double eps = 1e-12 * std::hypot(width, height);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 s = sites[i];
        std::vector<Point2> poly = box(0.0, 0.0, width, height);
        const auto [cx, cy] = bucket_of(s);
        for (std::size_t ring = 0;; ++ring) {
            // Clip by every site in the Chebyshev ring `ring` of buckets.
            const auto lo_x = static_cast<long>(cx) - static_cast<long>(ring);
            const auto hi_x = static_cast<long>(cx) + static_cast<long>(ring);
            const auto lo_y = static_cast<long>(cy) - static_cast<long>(ring);
            const auto hi_y = static_cast<long>(cy) + static_cast<long>(ring);
            bool any_bucket = false;
            for (long y = lo_y; y <= hi_y; ++y) {
                for (long x = lo_x; x <= hi_x; ++x) {
                    if (y != lo_y && y != hi_y && x != lo_x && x != hi_x) continue;
                    if (x < 0 || y < 0 || x >= static_cast<long>(bx) || y >= static_cast<long>(by)) continue;
                    any_bucket = true;
                    for (auto j : buckets[static_cast<std::size_t>(y) * bx + static_cast<std::size_t>(x)]) {
                        if (j == i) continue;
                        const Point2 t = sites[j];
                        poly = clip_half_plane(poly, {(s.x + t.x) / 2.0, (s.y + t.y) / 2.0}, {t.x - s.x, t.y - s.y});
                    }
                }
            }
            // Sites beyond twice the farthest cell vertex cannot cut the cell.
            double reach = 0.0;
            for (const auto& p : poly) reach = std::max(reach, std::hypot(p.x - s.x, p.y - s.y));
            if (!any_bucket || static_cast<double>(ring) * bucket >= 2.0 * reach) break;
        }
        cells[i] = drop_near_duplicates(poly, eps);
    }
    return cells;
}

namespace {

struct City {
    double x;
    double y;
    double radius;
};

// Democratic share at a relative position in the unit square.
double democratic_share(double u, double v) {
    static constexpr City kCities[] = {
        {0.30, 0.40, 0.06}, {0.62, 0.55, 0.05}, {0.80, 0.30, 0.04}, {0.15, 0.75, 0.035}, {0.55, 0.85, 0.03},
    };
    double share = 0.36;
    for (const auto& c : kCities) {
        const double d2 = ((u - c.x) * (u - c.x) + (v - c.y) * (v - c.y)) / (c.radius * c.radius);
        share += 0.55 * std::exp(-d2);
    }
    return std::min(share, 0.97);
}

}  // namespace

UnitCollection voronoi_precincts(std::size_t count, std::uint64_t seed, double width, double height) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, width);
    std::uniform_real_distribution<double> uy(0.0, height);
    std::uniform_int_distribution<std::uint64_t> turnout(200, 2000);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    std::vector<Point2> sites(count);
    for (auto& s : sites) s = {ux(rng), uy(rng)};
    const auto cells = voronoi_cells(sites, width, height);

    std::vector<VotingUnit> units;
    units.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double share = std::clamp(democratic_share(sites[i].x / width, sites[i].y / height) + noise(rng), 0.02, 0.98);
        const std::uint64_t total = turnout(rng);
        const auto dem = static_cast<std::uint64_t>(std::llround(share * static_cast<double>(total)));
        char id[32];
        std::snprintf(id, sizeof id, "P%04zu", i);
        units.push_back({id, make_polygon(cells[i]), dem, total - dem, UnitKind::precinct});
    }
    return UnitCollection(std::move(units));
}

UnitCollection voronoi_districts(std::size_t count, std::uint64_t seed, const UnitCollection& precincts,
                                 double width, double height) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> ux(0.0, width);
    std::uniform_real_distribution<double> uy(0.0, height);
    std::vector<Point2> sites(count);
    for (auto& s : sites) s = {ux(rng), uy(rng)};
    const auto cells = voronoi_cells(sites, width, height);

    std::vector<VotingUnit> units;
    for (std::size_t k = 0; k < count; ++k) {
        char id[32];
        std::snprintf(id, sizeof id, "D%02zu", k + 1);
        units.push_back({id, make_polygon(cells[k]), 0, 0, UnitKind::district});
    }
    for (const auto& p : precincts.units()) {
        const Point2 c = p.geometry.parts().front().outer.centroid();
        for (auto& d : units) {
            if (point_in_polygon(c, d.geometry)) {
                d.dem_votes += p.dem_votes;
                d.rep_votes += p.rep_votes;
                break;
            }
        }
    }
    return UnitCollection(std::move(units));
}

}  // namespace gerrytopo::synthetic
