#pragma once

#include "gerrytopo/geometry.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

// Synthetic maps for demos, tests and the scale benchmark.
namespace gerrytopo::synthetic {

using VoteFn = std::function<std::pair<std::uint64_t, std::uint64_t>(std::size_t row, std::size_t col)>;

// rows x cols unit-sized square precincts, row 0 at the top. Ids are
// "P<row>_<col>" with two-digit padding.
UnitCollection square_grid(std::size_t rows, std::size_t cols, double cell, const VoteFn& votes);

// Axis-aligned block of precinct cells [row0, row1) x [col0, col1).
struct BlockDistrict {
    std::string id;
    std::size_t row0 = 0;
    std::size_t col0 = 0;
    std::size_t row1 = 0;
    std::size_t col1 = 0;
};

// District polygons from blocks, votes summed over the covered precincts of
// a square_grid built with the same `rows` and `cell`.
UnitCollection block_districts(const UnitCollection& precincts, std::size_t rows, double cell,
                               const std::vector<BlockDistrict>& blocks);

struct PlanFixture {
    UnitCollection precincts;
    UnitCollection districts;
};

// 10x10 precincts, Republican sea (margin -0.2) around a 2x2 Democratic
// island (margin 0.8) at rows/cols 4-5.
inline constexpr double kIslandMargin = 0.8;
UnitCollection island_precincts();

// The island is one district of its own.
PlanFixture packed_fixture();
// The island is split across four Republican-majority quadrant districts.
PlanFixture cracked_fixture();

// Voronoi tessellation of `count` random sites in [0, width] x [0, height]
// with votes drawn from a few Democratic urban centres in a Republican
// countryside.
UnitCollection voronoi_precincts(std::size_t count, std::uint64_t seed, double width, double height);

// Voronoi districts over the same rectangle; each district's votes are the
// sum over precincts whose centroid falls inside it.
UnitCollection voronoi_districts(std::size_t count, std::uint64_t seed, const UnitCollection& precincts,
                                 double width, double height);

// Voronoi cells of `sites` clipped to the rectangle, in site order.
std::vector<std::vector<Point2>> voronoi_cells(const std::vector<Point2>& sites, double width, double height);

}  // namespace gerrytopo::synthetic
