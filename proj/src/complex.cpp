#include "gerrytopo/complex.hpp"

#include "gerrytopo/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace gerrytopo {

LevelSchedule::LevelSchedule(std::vector<double> thresholds) : thresholds_(std::move(thresholds)) {
    if (thresholds_.size() < 2) throw ParameterError("level schedule needs at least 2 thresholds");
    for (std::size_t i = 0; i < thresholds_.size(); ++i) {
        const double t = thresholds_[i];
        if (!(t > 0.0 && t <= 1.0)) throw ParameterError("thresholds must lie in (0, 1]");
        if (i > 0 && !(t > thresholds_[i - 1])) {
            throw ParameterError("thresholds must be strictly increasing");
        }
    }
}

double LevelSchedule::threshold(int level) const {
    if (level == 0) return 0.0;
    if (level < 0 || level > num_levels()) {
        throw ParameterError("level " + std::to_string(level) + " outside 0.." + std::to_string(num_levels()));
    }
    return thresholds_[static_cast<std::size_t>(level - 1)];
}

int LevelSchedule::entry_level(double v) const {
    if (v <= 0.0) return 1;
    // Margins and thresholds are both ratios; absorb rounding at exact ties.
    constexpr double kTie = 1e-12;
    if (v >= thresholds_.back() - kTie) return num_levels() + 1;
    const auto it = std::lower_bound(thresholds_.begin(), thresholds_.end(), v - kTie);
    return static_cast<int>(it - thresholds_.begin()) + 1;
}

LevelSchedule uniform_schedule(int levels, double max_margin) {
    if (levels < 2) throw ParameterError("level count must be at least 2");
    if (!(max_margin > 0.0 && max_margin <= 1.0)) throw ParameterError("max margin must lie in (0, 1]");
    std::vector<double> t(static_cast<std::size_t>(levels));
    for (int i = 1; i <= levels; ++i) {
        t[static_cast<std::size_t>(i - 1)] = static_cast<double>(i) * max_margin / static_cast<double>(levels);
    }
    return LevelSchedule(std::move(t));
}

std::string to_string(IslandParty party) {
    return party == IslandParty::democratic ? "democratic" : "republican";
}

IslandParty parse_island_party(const std::string& text) {
    if (text == "democratic") return IslandParty::democratic;
    if (text == "republican") return IslandParty::republican;
    throw ParameterError("unknown island party '" + text + "' (expected democratic|republican)");
}

FilteredComplex FilteredComplex::from_cells(const std::vector<Cell>& cells, int num_levels) {
    std::vector<std::uint8_t> dims;
    std::vector<std::int32_t> levels;
    std::vector<std::uint64_t> offsets{0};
    std::vector<std::uint32_t> faces;
    dims.reserve(cells.size());
    levels.reserve(cells.size());
    for (const auto& c : cells) {
        if (c.dim < 0 || c.dim > 2) throw StructureError("cell dimension must be 0, 1 or 2");
        dims.push_back(static_cast<std::uint8_t>(c.dim));
        levels.push_back(c.level);
        for (auto f : c.boundary) {
            if (f >= cells.size()) throw StructureError("boundary references a missing cell");
            faces.push_back(f);
        }
        offsets.push_back(faces.size());
    }
    return from_flat(std::move(dims), std::move(levels), std::move(offsets), std::move(faces), num_levels);
}

FilteredComplex FilteredComplex::from_flat(std::vector<std::uint8_t> dims, std::vector<std::int32_t> levels,
                                           std::vector<std::uint64_t> offsets,
                                           std::vector<std::uint32_t> faces, int num_levels) {
    const std::size_t n = dims.size();
    if (levels.size() != n || offsets.size() != n + 1) throw StructureError("inconsistent cell arrays");
    if (num_levels < 0) throw StructureError("negative level count");

    // Stable counting sort on (level, dim).
    const std::size_t key_count = (static_cast<std::size_t>(num_levels) + 1) * 3;
    std::vector<std::size_t> bucket(key_count + 1, 0);
    auto key = [&](std::size_t i) {
        return static_cast<std::size_t>(levels[i]) * 3 + dims[i];
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (levels[i] < 0 || levels[i] > num_levels) {
            throw StructureError("cell level " + std::to_string(levels[i]) + " outside 0.." +
                                 std::to_string(num_levels));
        }
        if (dims[i] > 2) throw StructureError("cell dimension must be 0, 1 or 2");
        ++bucket[key(i) + 1];
    }
    std::partial_sum(bucket.begin(), bucket.end(), bucket.begin());
    std::vector<std::uint32_t> position(n);
    std::vector<std::uint32_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = static_cast<std::uint32_t>(bucket[key(i)]++);
        position[i] = p;
        order[p] = static_cast<std::uint32_t>(i);
    }

    FilteredComplex out;
    out.num_levels_ = num_levels;
    out.dims_.resize(n);
    out.levels_.resize(n);
    out.offsets_.assign(1, 0);
    out.offsets_.reserve(n + 1);
    out.faces_.reserve(faces.size());
    for (std::size_t p = 0; p < n; ++p) {
        const std::size_t old = order[p];
        out.dims_[p] = dims[old];
        out.levels_[p] = levels[old];
        const auto begin = out.faces_.size();
        for (std::uint64_t k = offsets[old]; k < offsets[old + 1]; ++k) {
            if (faces[k] >= n) throw StructureError("boundary references a missing cell");
            out.faces_.push_back(position[faces[k]]);
        }
        std::sort(out.faces_.begin() + static_cast<std::ptrdiff_t>(begin), out.faces_.end());
        out.offsets_.push_back(out.faces_.size());
    }

    for (std::size_t id = 0; id < n; ++id) {
        const auto bd = out.boundary(id);
        const int d = out.dims_[id];
        const bool size_ok = (d == 0 && bd.empty()) || (d == 1 && bd.size() == 2) ||
                             (d == 2 && (bd.size() == 3 || bd.size() == 4));
        if (!size_ok) {
            throw StructureError("cell " + std::to_string(id) + " of dim " + std::to_string(d) + " has " +
                                 std::to_string(bd.size()) + " faces");
        }
        for (std::size_t k = 0; k < bd.size(); ++k) {
            const auto f = bd[k];
            if (k > 0 && bd[k - 1] == f) throw StructureError("repeated face in cell " + std::to_string(id));
            if (out.dims_[f] + 1 != d) throw StructureError("face dimension mismatch in cell " + std::to_string(id));
            if (out.levels_[f] > out.levels_[id]) {
                throw StructureError("face enters after cell " + std::to_string(id));
            }
        }
    }
    return out;
}

int FilteredComplex::max_dim() const {
    int d = -1;
    for (auto x : dims_) d = std::max(d, static_cast<int>(x));
    return d;
}

std::vector<std::size_t> FilteredComplex::count_active(int level) const {
    std::vector<std::size_t> counts(3, 0);
    for (std::size_t i = 0; i < size(); ++i) {
        if (levels_[i] <= level) ++counts[dims_[i]];
    }
    return counts;
}

std::string FilteredComplex::dump() const {
    std::ostringstream out;
    for (std::size_t id = 0; id < size(); ++id) {
        out << "cell " << id << " dim " << dim(id) << " level " << level(id) << " boundary";
        for (auto f : boundary(id)) out << ' ' << f;
        out << '\n';
    }
    return out.str();
}

std::vector<std::int32_t> pixel_levels(const MarginField& field, const LevelSchedule& schedule,
                                       IslandParty islands) {
    const double sign = islands == IslandParty::democratic ? 1.0 : -1.0;
    std::vector<std::int32_t> levels(field.values.size(), 0);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!field.is_background(i)) levels[i] = schedule.entry_level(sign * field.values[i]);
    }
    return levels;
}

FilteredComplex build_levelset_filtration(const MarginField& field, const LevelSchedule& schedule,
                                          IslandParty islands) {
    const std::size_t w = field.grid.width;
    const std::size_t h = field.grid.height;
    const int top = schedule.num_levels();
    const auto levels = pixel_levels(field, schedule, islands);

    // Provisional id of each active pixel's vertex.
    constexpr std::uint32_t kAbsent = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> vertex_id(w * h, kAbsent);
    std::vector<std::uint8_t> dims;
    std::vector<std::int32_t> cell_levels;
    std::vector<std::uint64_t> offsets{0};
    std::vector<std::uint32_t> faces;
    auto active = [&](std::size_t i) { return !field.is_background(i) && levels[i] <= top; };

    for (std::size_t i = 0; i < w * h; ++i) {
        if (!active(i)) continue;
        vertex_id[i] = static_cast<std::uint32_t>(dims.size());
        dims.push_back(0);
        cell_levels.push_back(levels[i]);
        offsets.push_back(faces.size());
    }
    if (dims.empty()) throw EmptyComplexError("margin field has no pixel that enters the filtration");

    // Edges keyed by their later pixel: vertical edge (up, p) and
    // horizontal edge (left, p).
    std::vector<std::uint32_t> vertical_id(w * h, kAbsent);
    std::vector<std::uint32_t> horizontal_id(w * h, kAbsent);
    auto add_edge = [&](std::size_t a, std::size_t b) {
        const auto id = static_cast<std::uint32_t>(dims.size());
        dims.push_back(1);
        cell_levels.push_back(std::max(levels[a], levels[b]));
        faces.push_back(vertex_id[a]);
        faces.push_back(vertex_id[b]);
        offsets.push_back(faces.size());
        return id;
    };
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const std::size_t p = r * w + c;
            if (!active(p)) continue;
            if (r > 0 && active(p - w)) vertical_id[p] = add_edge(p - w, p);
            if (c > 0 && active(p - 1)) horizontal_id[p] = add_edge(p - 1, p);
        }
    }
    // Square with bottom-right corner p: edges top (horizontal at p-w),
    // bottom (horizontal at p), left (vertical at p-1), right (vertical at p).
    for (std::size_t r = 1; r < h; ++r) {
        for (std::size_t c = 1; c < w; ++c) {
            const std::size_t p = r * w + c;
            if (!(active(p) && active(p - 1) && active(p - w) && active(p - w - 1))) continue;
            dims.push_back(2);
            cell_levels.push_back(std::max({levels[p], levels[p - 1], levels[p - w], levels[p - w - 1]}));
            faces.push_back(horizontal_id[p - w]);
            faces.push_back(horizontal_id[p]);
            faces.push_back(vertical_id[p - 1]);
            faces.push_back(vertical_id[p]);
            offsets.push_back(faces.size());
        }
    }
    return FilteredComplex::from_flat(std::move(dims), std::move(cell_levels), std::move(offsets),
                                      std::move(faces), top);
}

std::string to_string(AdjacencyKind kind) { return kind == AdjacencyKind::queen ? "queen" : "rook"; }

AdjacencyKind parse_adjacency_kind(const std::string& text) {
    if (text == "queen") return AdjacencyKind::queen;
    if (text == "rook") return AdjacencyKind::rook;
    throw ParameterError("unknown adjacency kind '" + text + "' (expected queen|rook)");
}

bool AdjacencyGraph::adjacent(std::size_t a, std::size_t b) const {
    if (a >= neighbors.size()) return false;
    return std::binary_search(neighbors[a].begin(), neighbors[a].end(), b);
}

std::size_t AdjacencyGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& n : neighbors) total += n.size();
    return total / 2;
}

namespace {

struct Segment {
    Point2 a;
    Point2 b;
};

std::vector<Segment> collect_segments(const PolygonSet& g) {
    std::vector<Segment> out;
    for (const Ring* ring : g.rings()) {
        const auto& v = ring->vertices();
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back({v[i], v[(i + 1) % v.size()]});
    }
    return out;
}

double point_segment_distance(const Point2& p, const Segment& s) {
    const double dx = s.b.x - s.a.x;
    const double dy = s.b.y - s.a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2, 0.0, 1.0);
    return std::hypot(p.x - (s.a.x + t * dx), p.y - (s.a.y + t * dy));
}

bool touches(const std::vector<Segment>& a, const std::vector<Segment>& b, double tol) {
    for (const auto& sa : a) {
        for (const auto& sb : b) {
            if (point_segment_distance(sa.a, sb) <= tol || point_segment_distance(sb.a, sa) <= tol) return true;
        }
    }
    return false;
}

// Collinear segments overlapping in more than `tol` of length.
bool shares_segment(const std::vector<Segment>& a, const std::vector<Segment>& b, double tol) {
    for (const auto& sa : a) {
        const double dx = sa.b.x - sa.a.x;
        const double dy = sa.b.y - sa.a.y;
        const double len = std::hypot(dx, dy);
        if (len <= tol) continue;
        const double ux = dx / len;
        const double uy = dy / len;
        for (const auto& sb : b) {
            const auto off_line = [&](const Point2& p) {
                return std::abs((p.x - sa.a.x) * uy - (p.y - sa.a.y) * ux);
            };
            if (off_line(sb.a) > tol || off_line(sb.b) > tol) continue;
            const double t0 = (sb.a.x - sa.a.x) * ux + (sb.a.y - sa.a.y) * uy;
            const double t1 = (sb.b.x - sa.a.x) * ux + (sb.b.y - sa.a.y) * uy;
            const double lo = std::max(0.0, std::min(t0, t1));
            const double hi = std::min(len, std::max(t0, t1));
            if (hi - lo > tol) return true;
        }
    }
    return false;
}

}  // namespace

AdjacencyGraph detect_adjacency(const UnitCollection& units, AdjacencyKind kind) {
    const std::size_t n = units.size();
    const double tol = units.snap_tolerance();
    std::vector<BoundingBox> boxes(n);
    std::vector<std::vector<Segment>> segments(n);
    for (std::size_t i = 0; i < n; ++i) {
        boxes[i] = units[i].geometry.bounds();
        segments[i] = collect_segments(units[i].geometry);
    }
    std::vector<std::size_t> by_x(n);
    std::iota(by_x.begin(), by_x.end(), 0);
    std::sort(by_x.begin(), by_x.end(), [&](std::size_t a, std::size_t b) {
        return boxes[a].min.x < boxes[b].min.x || (boxes[a].min.x == boxes[b].min.x && a < b);
    });

    AdjacencyGraph graph;
    graph.neighbors.resize(n);
    for (std::size_t ii = 0; ii < n; ++ii) {
        const std::size_t i = by_x[ii];
        for (std::size_t jj = ii + 1; jj < n; ++jj) {
            const std::size_t j = by_x[jj];
            if (boxes[j].min.x > boxes[i].max.x + tol) break;
            if (boxes[j].min.y > boxes[i].max.y + tol || boxes[i].min.y > boxes[j].max.y + tol) continue;
            const bool linked = kind == AdjacencyKind::queen ? touches(segments[i], segments[j], tol)
                                                             : shares_segment(segments[i], segments[j], tol);
            if (linked) {
                graph.neighbors[i].push_back(j);
                graph.neighbors[j].push_back(i);
            }
        }
    }
    for (auto& nb : graph.neighbors) std::sort(nb.begin(), nb.end());
    return graph;
}

FilteredComplex build_adjacency_filtration(const UnitCollection& units, AdjacencyKind kind,
                                           const LevelSchedule& schedule, IslandParty islands) {
    return build_adjacency_filtration(units, detect_adjacency(units, kind), schedule, islands);
}

FilteredComplex build_adjacency_filtration(const UnitCollection& units, const AdjacencyGraph& graph,
                                           const LevelSchedule& schedule, IslandParty islands) {
    const int top = schedule.num_levels();
    const auto& tau = schedule.thresholds();
    std::vector<int> unit_level(units.size(), 0);  // 0 = excluded
    for (std::size_t i = 0; i < units.size(); ++i) {
        const auto& u = units[i];
        const std::uint64_t sea = islands == IslandParty::democratic ? u.rep_votes : u.dem_votes;
        const std::uint64_t isle = islands == IslandParty::democratic ? u.dem_votes : u.rep_votes;
        if (sea + isle == 0) throw MarginError("unit '" + u.id + "': zero total votes");
        if (sea <= isle) continue;
        const double delta = static_cast<double>(sea - isle) / static_cast<double>(sea + isle);
        // Largest j with tau_j <= delta enters at step L - j + 1.
        const auto j = static_cast<int>(std::upper_bound(tau.begin(), tau.end(), delta) - tau.begin());
        if (j == 0) continue;
        unit_level[i] = top - j + 1;
    }

    std::vector<Cell> cells;
    std::vector<std::uint32_t> vertex_cell(units.size(), 0);
    for (std::size_t i = 0; i < units.size(); ++i) {
        if (unit_level[i] == 0) continue;
        vertex_cell[i] = static_cast<std::uint32_t>(cells.size());
        cells.push_back({0, unit_level[i], {}});
    }
    std::unordered_map<std::uint64_t, std::uint32_t> edge_cell;
    auto edge_key = [&](std::size_t a, std::size_t b) {
        return static_cast<std::uint64_t>(std::min(a, b)) * units.size() + std::max(a, b);
    };
    for (std::size_t a = 0; a < units.size(); ++a) {
        if (unit_level[a] == 0) continue;
        for (std::size_t b : graph.neighbors[a]) {
            if (b <= a || unit_level[b] == 0) continue;
            edge_cell[edge_key(a, b)] = static_cast<std::uint32_t>(cells.size());
            cells.push_back({1, std::max(unit_level[a], unit_level[b]), {vertex_cell[a], vertex_cell[b]}});
        }
    }
    for (std::size_t a = 0; a < units.size(); ++a) {
        if (unit_level[a] == 0) continue;
        for (std::size_t b : graph.neighbors[a]) {
            if (b <= a || unit_level[b] == 0) continue;
            for (std::size_t c : graph.neighbors[b]) {
                if (c <= b || unit_level[c] == 0 || !graph.adjacent(a, c)) continue;
                cells.push_back({2,
                                 std::max({unit_level[a], unit_level[b], unit_level[c]}),
                                 {edge_cell.at(edge_key(a, b)), edge_cell.at(edge_key(b, c)),
                                  edge_cell.at(edge_key(a, c))}});
            }
        }
    }
    return FilteredComplex::from_cells(cells, top);
}

}  // namespace gerrytopo
