#include "gerrytopo/raster.hpp"

#include "gerrytopo/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace gerrytopo {

using nlohmann::json;

double Grid::row_center_y(std::size_t row) const {
    return origin.y + (static_cast<double>(height - row) - 0.5) * pixel_size;
}

double Grid::col_center_x(std::size_t col) const {
    return origin.x + (static_cast<double>(col) + 0.5) * pixel_size;
}

Point2 Grid::pixel_center(std::size_t row, std::size_t col) const {
    return {col_center_x(col), row_center_y(row)};
}

Grid make_grid(const BoundingBox& bounds, std::size_t width) {
    if (width == 0) throw RasterError("raster width must be at least 1");
    if (bounds.is_empty() || !(bounds.width() > 0.0)) {
        throw RasterError("bounds have zero width");
    }
    Grid grid;
    grid.width = width;
    grid.origin = bounds.min;
    grid.pixel_size = bounds.width() / static_cast<double>(width);
    const double rows = bounds.height() / grid.pixel_size;
    // Absorb rounding so an exact 1:1 box does not gain a spurious row.
    grid.height = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(rows - 1e-9)));
    return grid;
}

std::string to_string(MarginMode mode) {
    return mode == MarginMode::relative ? "relative" : "density";
}

MarginMode parse_margin_mode(const std::string& text) {
    if (text == "relative") return MarginMode::relative;
    if (text == "density") return MarginMode::density;
    throw ParameterError("unknown margin mode '" + text + "' (expected relative|density)");
}

double unit_margin(const VotingUnit& unit, MarginMode mode) {
    const double dem = static_cast<double>(unit.dem_votes);
    const double rep = static_cast<double>(unit.rep_votes);
    if (mode == MarginMode::relative) {
        if (unit.dem_votes + unit.rep_votes == 0) {
            throw MarginError("unit '" + unit.id + "': zero total votes");
        }
        return (dem - rep) / (dem + rep);
    }
    const double area = polygon_area(unit.geometry);
    if (!(area > 0.0)) throw MarginError("unit '" + unit.id + "': zero area");
    return (dem - rep) / area;
}

namespace {

// Smallest column whose center is >= x.
std::size_t first_col_at_or_after(const Grid& g, double x) {
    const double guess = std::ceil((x - g.origin.x) / g.pixel_size - 0.5);
    std::size_t c = guess <= 0.0 ? 0
                    : guess >= static_cast<double>(g.width) ? g.width
                                                             : static_cast<std::size_t>(guess);
    while (c > 0 && g.col_center_x(c - 1) >= x) --c;
    while (c < g.width && g.col_center_x(c) < x) ++c;
    return c;
}

void rasterize_unit(const Grid& grid, const PolygonSet& geom, std::int32_t label,
                    std::vector<std::int32_t>& labels) {
    const BoundingBox box = geom.bounds();
    // Rows whose center lies in [box.min.y, box.max.y], padded by one.
    const double top = (grid.origin.y + static_cast<double>(grid.height) * grid.pixel_size - box.max.y) /
                       grid.pixel_size;
    const double bottom = (grid.origin.y + static_cast<double>(grid.height) * grid.pixel_size - box.min.y) /
                          grid.pixel_size;
    const auto clamp_row = [&](double r) -> std::size_t {
        if (r <= 0.0) return 0;
        if (r >= static_cast<double>(grid.height)) return grid.height;
        return static_cast<std::size_t>(r);
    };
    const std::size_t r0 = clamp_row(std::floor(top) - 1.0);
    const std::size_t r1 = clamp_row(std::ceil(bottom) + 1.0);
    if (r0 >= r1) return;

    std::vector<std::vector<double>> crossings(r1 - r0);
    for (const Ring* ring : geom.rings()) {
        const auto& v = ring->vertices();
        const std::size_t n = v.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2& a = v[i];
            const Point2& b = v[(i + 1) % n];
            const double lo = std::min(a.y, b.y);
            const double hi = std::max(a.y, b.y);
            const std::size_t er0 = std::max(r0, clamp_row(std::floor(
                (grid.origin.y + static_cast<double>(grid.height) * grid.pixel_size - hi) / grid.pixel_size) - 1.0));
            const std::size_t er1 = std::min(r1, clamp_row(std::ceil(
                (grid.origin.y + static_cast<double>(grid.height) * grid.pixel_size - lo) / grid.pixel_size) + 1.0));
            for (std::size_t r = er0; r < er1; ++r) {
                double x = 0.0;
                if (edge_crossing_x(a, b, grid.row_center_y(r), x)) crossings[r - r0].push_back(x);
            }
        }
    }
    for (std::size_t r = r0; r < r1; ++r) {
        auto& xs = crossings[r - r0];
        std::sort(xs.begin(), xs.end());
        // A center p is inside iff xs[2k] <= p < xs[2k+1] for some k.
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            const std::size_t c0 = first_col_at_or_after(grid, xs[k]);
            const std::size_t c1 = first_col_at_or_after(grid, xs[k + 1]);
            for (std::size_t c = c0; c < c1; ++c) {
                auto& slot = labels[grid.index(r, c)];
                if (slot == kBackground) slot = label;
            }
        }
    }
}

}  // namespace

LabelRaster rasterize(const UnitCollection& units, std::size_t width) {
    if (units.empty()) throw RasterError("cannot rasterize an empty unit collection");
    return rasterize(units, make_grid(units.bounds(), width));
}

LabelRaster rasterize(const UnitCollection& units, const Grid& grid) {
    if (units.empty()) throw RasterError("cannot rasterize an empty unit collection");
    if (grid.width == 0 || grid.height == 0 || !(grid.pixel_size > 0.0)) {
        throw RasterError("invalid grid");
    }
    LabelRaster out{grid, std::vector<std::int32_t>(grid.pixel_count(), kBackground)};
    for (std::size_t i = 0; i < units.size(); ++i) {
        rasterize_unit(grid, units[i].geometry, static_cast<std::int32_t>(i), out.labels);
    }
    return out;
}

MarginField margin_field(const LabelRaster& raster, const UnitCollection& units, MarginMode mode) {
    std::vector<double> per_unit(units.size(), 0.0);
    std::vector<std::uint8_t> present(units.size(), 0);
    for (auto label : raster.labels) {
        if (label == kBackground) continue;
        if (label < 0 || static_cast<std::size_t>(label) >= units.size()) {
            throw RasterError("label " + std::to_string(label) + " does not index a unit");
        }
        present[static_cast<std::size_t>(label)] = 1;
    }
    double max_abs = 0.0;
    for (std::size_t i = 0; i < units.size(); ++i) {
        if (!present[i]) continue;
        per_unit[i] = unit_margin(units[i], mode);
        max_abs = std::max(max_abs, std::abs(per_unit[i]));
    }
    MarginField field;
    field.grid = raster.grid;
    field.mode = mode;
    if (mode == MarginMode::density && max_abs > 0.0) {
        field.normalizer = max_abs;
        for (auto& v : per_unit) v /= max_abs;
    }
    field.values.assign(raster.labels.size(), 0.0);
    field.background.assign(raster.labels.size(), 1);
    for (std::size_t i = 0; i < raster.labels.size(); ++i) {
        const auto label = raster.labels[i];
        if (label == kBackground) continue;
        field.values[i] = std::clamp(per_unit[static_cast<std::size_t>(label)], -1.0, 1.0);
        field.background[i] = 0;
    }
    return field;
}

std::vector<std::uint32_t> run_length_encode(const std::vector<std::uint8_t>& mask) {
    std::vector<std::uint32_t> runs;
    std::uint8_t current = 0;
    std::uint32_t length = 0;
    for (auto m : mask) {
        const std::uint8_t bit = m ? 1 : 0;
        if (bit != current) {
            runs.push_back(length);
            current = bit;
            length = 0;
        }
        ++length;
    }
    runs.push_back(length);
    return runs;
}

std::vector<std::uint8_t> run_length_decode(const std::vector<std::uint32_t>& runs, std::size_t total) {
    std::vector<std::uint8_t> mask;
    mask.reserve(total);
    std::uint8_t bit = 0;
    for (auto run : runs) {
        mask.insert(mask.end(), run, bit);
        bit ^= 1;
    }
    if (mask.size() != total) throw RasterError("background mask length does not match grid");
    return mask;
}

std::string encode_margin_pgm(const MarginField& field) {
    std::ostringstream out;
    out << "P5\n" << field.grid.width << ' ' << field.grid.height << "\n65535\n";
    std::string body;
    body.reserve(field.values.size() * 2);
    for (double v : field.values) {
        const auto q = static_cast<std::uint16_t>(std::lround((std::clamp(v, -1.0, 1.0) + 1.0) / 2.0 * 65535.0));
        body.push_back(static_cast<char>(q >> 8));
        body.push_back(static_cast<char>(q & 0xFF));
    }
    out << body;
    return out.str();
}

std::string encode_margin_sidecar(const MarginField& field) {
    json doc = {
        {"width", field.grid.width},
        {"height", field.grid.height},
        {"origin", {field.grid.origin.x, field.grid.origin.y}},
        {"pixel_size", field.grid.pixel_size},
        {"mode", to_string(field.mode)},
        {"normalizer", field.normalizer},
        {"background_mask", run_length_encode(field.background)},
    };
    return doc.dump(2) + "\n";
}

MarginField decode_margin_raster(const std::string& pgm, const std::string& sidecar) {
    json meta;
    try {
        meta = json::parse(sidecar);
    } catch (const json::parse_error& e) {
        throw RasterError(std::string("malformed raster sidecar: ") + e.what());
    }
    MarginField field;
    try {
        field.grid.width = meta.at("width").get<std::size_t>();
        field.grid.height = meta.at("height").get<std::size_t>();
        field.grid.origin = {meta.at("origin").at(0).get<double>(), meta.at("origin").at(1).get<double>()};
        field.grid.pixel_size = meta.at("pixel_size").get<double>();
        field.mode = parse_margin_mode(meta.at("mode").get<std::string>());
        field.normalizer = meta.value("normalizer", 1.0);
        field.background = run_length_decode(meta.at("background_mask").get<std::vector<std::uint32_t>>(),
                                             field.grid.pixel_count());
    } catch (const json::exception& e) {
        throw RasterError(std::string("invalid raster sidecar: ") + e.what());
    }

    std::istringstream in(pgm);
    std::string magic;
    std::size_t w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (magic != "P5" || w != field.grid.width || h != field.grid.height || maxval != 65535) {
        throw RasterError("PGM header does not match sidecar");
    }
    in.get();
    const std::size_t offset = static_cast<std::size_t>(in.tellg());
    if (pgm.size() < offset + 2 * w * h) throw RasterError("truncated PGM data");
    field.values.resize(w * h);
    for (std::size_t i = 0; i < w * h; ++i) {
        const auto hi = static_cast<unsigned char>(pgm[offset + 2 * i]);
        const auto lo = static_cast<unsigned char>(pgm[offset + 2 * i + 1]);
        const double q = static_cast<double>((hi << 8) | lo);
        field.values[i] = field.background[i] ? 0.0 : q / 65535.0 * 2.0 - 1.0;
    }
    return field;
}

}  // namespace gerrytopo
