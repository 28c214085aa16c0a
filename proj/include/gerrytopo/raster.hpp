#pragma once

#include "gerrytopo/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gerrytopo {

// Regular grid of square pixels. Row 0 is the top (maximum y) row.
struct Grid {
    std::size_t width = 0;
    std::size_t height = 0;
    Point2 origin;  // min-x, min-y of the covered bounds
    double pixel_size = 1.0;

    std::size_t pixel_count() const { return width * height; }
    std::size_t index(std::size_t row, std::size_t col) const { return row * width + col; }
    Point2 pixel_center(std::size_t row, std::size_t col) const;
    double row_center_y(std::size_t row) const;
    double col_center_x(std::size_t col) const;

    friend bool operator==(const Grid&, const Grid&) = default;
};

// Grid covering `bounds` with `width` columns; height follows the aspect ratio.
Grid make_grid(const BoundingBox& bounds, std::size_t width);

inline constexpr std::int32_t kBackground = -1;

struct LabelRaster {
    Grid grid;
    std::vector<std::int32_t> labels;  // unit index or kBackground, row-major
};

enum class MarginMode { relative, density };

std::string to_string(MarginMode mode);
MarginMode parse_margin_mode(const std::string& text);

struct MarginField {
    Grid grid;
    std::vector<double> values;         // in [-1, 1]; 0 on background
    std::vector<std::uint8_t> background;  // 1 where no unit covers the pixel
    MarginMode mode = MarginMode::relative;
    // Divisor applied to raw densities (1 in relative mode).
    double normalizer = 1.0;

    bool is_background(std::size_t i) const { return background[i] != 0; }
};

// Signed margin: (D - R) / (D + R) in relative mode, (D - R) / area in
// density mode (before normalization).
double unit_margin(const VotingUnit& unit, MarginMode mode);

// Label each pixel by the first unit whose polygon contains its center.
LabelRaster rasterize(const UnitCollection& units, std::size_t width);
LabelRaster rasterize(const UnitCollection& units, const Grid& grid);

MarginField margin_field(const LabelRaster& raster, const UnitCollection& units, MarginMode mode);

// 16-bit binary PGM with v mapped to round((v + 1) / 2 * 65535).
std::string encode_margin_pgm(const MarginField& field);
// JSON sidecar with georeferencing, mode, normalizer and the run-length
// encoded background mask (alternating runs, first run is non-background).
std::string encode_margin_sidecar(const MarginField& field);
MarginField decode_margin_raster(const std::string& pgm, const std::string& sidecar);

std::vector<std::uint32_t> run_length_encode(const std::vector<std::uint8_t>& mask);
std::vector<std::uint8_t> run_length_decode(const std::vector<std::uint32_t>& runs, std::size_t total);

}  // namespace gerrytopo
