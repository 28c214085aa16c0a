#pragma once

#include "gerrytopo/geometry.hpp"
#include "gerrytopo/raster.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gerrytopo {

// Increasing thresholds tau_1 < ... < tau_L in (0, 1], L >= 2.
class LevelSchedule {
public:
    explicit LevelSchedule(std::vector<double> thresholds);

    const std::vector<double>& thresholds() const { return thresholds_; }
    int num_levels() const { return static_cast<int>(thresholds_.size()); }
    // tau_i for 1 <= i <= L; level 0 maps to 0.
    double threshold(int level) const;

    // Level at which a pixel with (island-oriented) margin v enters the
    // level-set filtration: 1 for v <= 0, the smallest i with tau_i >= v
    // otherwise. The last threshold is exclusive: v >= tau_L gives L + 1
    // (never enters), so the strongest islands persist to the end.
    int entry_level(double v) const;

private:
    std::vector<double> thresholds_;
};

// tau_i = i * max_margin / L.
LevelSchedule uniform_schedule(int levels, double max_margin);

// Which party's strongholds appear as holes in the filtration.
enum class IslandParty { democratic, republican };

std::string to_string(IslandParty party);
IslandParty parse_island_party(const std::string& text);

// Input cell for FilteredComplex::from_cells; boundary holds indices into the
// same input vector.
struct Cell {
    int dim = 0;
    int level = 0;
    std::vector<std::uint32_t> boundary;
};

// Cells in filtration order (level, dim, input order). Cell ids are positions
// in that order and boundaries refer to those ids, so every face precedes
// its cofaces. Immutable once built.
class FilteredComplex {
public:
    FilteredComplex() = default;

    // Sorts, remaps boundary ids and validates closure and level
    // monotonicity. Throws StructureError on malformed input.
    static FilteredComplex from_cells(const std::vector<Cell>& cells, int num_levels);

    // Same as from_cells but over a flat (CSR) description, for large builds.
    static FilteredComplex from_flat(std::vector<std::uint8_t> dims, std::vector<std::int32_t> levels,
                                     std::vector<std::uint64_t> offsets, std::vector<std::uint32_t> faces,
                                     int num_levels);

    std::size_t size() const { return dims_.size(); }
    bool empty() const { return dims_.empty(); }
    int num_levels() const { return num_levels_; }
    int dim(std::size_t id) const { return dims_[id]; }
    int level(std::size_t id) const { return levels_[id]; }
    std::span<const std::uint32_t> boundary(std::size_t id) const {
        return {faces_.data() + offsets_[id], faces_.data() + offsets_[id + 1]};
    }
    int max_dim() const;

    // Number of cells of each dimension (0..2) with level <= `level`.
    std::vector<std::size_t> count_active(int level) const;

    // Debug text: `cell <id> dim <d> level <l> boundary <ids...>` per line.
    std::string dump() const;

private:
    std::vector<std::uint8_t> dims_;
    std::vector<std::int32_t> levels_;
    std::vector<std::uint64_t> offsets_{0};
    std::vector<std::uint32_t> faces_;
    int num_levels_ = 0;
};

// Lower-star cubical filtration over the pixel grid: vertices are
// non-background pixels, edges join 4-neighbours, squares fill 2x2 blocks.
// Pixels that never enter (level L + 1) are left out entirely.
FilteredComplex build_levelset_filtration(const MarginField& field, const LevelSchedule& schedule,
                                          IslandParty islands = IslandParty::democratic);

// Level of every pixel under the rule above (L + 1 = never; background = 0).
std::vector<std::int32_t> pixel_levels(const MarginField& field, const LevelSchedule& schedule,
                                       IslandParty islands = IslandParty::democratic);

enum class AdjacencyKind { queen, rook };

std::string to_string(AdjacencyKind kind);
AdjacencyKind parse_adjacency_kind(const std::string& text);

struct AdjacencyGraph {
    std::vector<std::vector<std::size_t>> neighbors;  // sorted, no self loops

    bool adjacent(std::size_t a, std::size_t b) const;
    std::size_t edge_count() const;
};

// Queen: units touch in at least one point. Rook: units share a boundary
// segment of positive length. Vertex identity uses the collection's snap
// tolerance.
AdjacencyGraph detect_adjacency(const UnitCollection& units, AdjacencyKind kind);

// Descending margin sweep over units won by the non-island party: at step i
// a unit with margin >= tau_{L-i+1} enters. Edges and triangles of the flag
// complex enter with their last vertex.
FilteredComplex build_adjacency_filtration(const UnitCollection& units, AdjacencyKind kind,
                                           const LevelSchedule& schedule,
                                           IslandParty islands = IslandParty::democratic);
FilteredComplex build_adjacency_filtration(const UnitCollection& units, const AdjacencyGraph& graph,
                                           const LevelSchedule& schedule,
                                           IslandParty islands = IslandParty::democratic);

}  // namespace gerrytopo
