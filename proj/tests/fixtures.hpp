#pragma once

// Small hand-built complexes with known homology.

#include "gerrytopo/complex.hpp"

#include <cstdint>
#include <vector>

namespace fixtures {

using gerrytopo::Cell;
using gerrytopo::FilteredComplex;

// Periodic n x n cubical torus, every cell at level 1.
inline FilteredComplex cubical_torus(std::uint32_t n) {
    std::vector<Cell> cells;
    auto v = [n](std::uint32_t r, std::uint32_t c) { return (r % n) * n + (c % n); };
    for (std::uint32_t i = 0; i < n * n; ++i) cells.push_back({0, 1, {}});
    const std::uint32_t h0 = n * n;          // horizontal edge (r,c)-(r,c+1)
    const std::uint32_t v0 = h0 + n * n;     // vertical edge (r,c)-(r+1,c)
    for (std::uint32_t r = 0; r < n; ++r)
        for (std::uint32_t c = 0; c < n; ++c) cells.push_back({1, 1, {v(r, c), v(r, c + 1)}});
    for (std::uint32_t r = 0; r < n; ++r)
        for (std::uint32_t c = 0; c < n; ++c) cells.push_back({1, 1, {v(r, c), v(r + 1, c)}});
    for (std::uint32_t r = 0; r < n; ++r) {
        for (std::uint32_t c = 0; c < n; ++c) {
            cells.push_back({2, 1, {h0 + v(r, c), h0 + v(r + 1, c), v0 + v(r, c), v0 + v(r, c + 1)}});
        }
    }
    return FilteredComplex::from_cells(cells, 2);
}

inline FilteredComplex hollow_tetrahedron() {
    std::vector<Cell> cells;
    for (int i = 0; i < 4; ++i) cells.push_back({0, 1, {}});
    // edges 4..9: 01 02 03 12 13 23
    const std::uint32_t e01 = 4, e02 = 5, e03 = 6, e12 = 7, e13 = 8, e23 = 9;
    cells.push_back({1, 1, {0, 1}});
    cells.push_back({1, 1, {0, 2}});
    cells.push_back({1, 1, {0, 3}});
    cells.push_back({1, 1, {1, 2}});
    cells.push_back({1, 1, {1, 3}});
    cells.push_back({1, 1, {2, 3}});
    cells.push_back({2, 1, {e01, e02, e12}});
    cells.push_back({2, 1, {e01, e03, e13}});
    cells.push_back({2, 1, {e02, e03, e23}});
    cells.push_back({2, 1, {e12, e13, e23}});
    return FilteredComplex::from_cells(cells, 2);
}

inline FilteredComplex triangle_boundary() {
    return FilteredComplex::from_cells({{0, 1, {}}, {0, 1, {}}, {0, 1, {}}, {1, 1, {0, 1}}, {1, 1, {1, 2}}, {1, 1, {0, 2}}},
                                       2);
}

}  // namespace fixtures
