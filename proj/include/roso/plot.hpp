#pragma once

// Minimal raster heatmaps with a bundled 5x7 bitmap font, encoded as PNG.

#include <string>
#include <vector>

#include "roso/image.hpp"

namespace roso::plot {

// Draws text with its top-left corner at (x, y); 6 px advance per glyph.
// Lowercase letters use the uppercase glyphs.
void draw_text(RgbImage& img, int x, int y, std::string_view text, Rgb color);
// Rotated a quarter turn counter-clockwise, reading bottom to top; (x, y)
// is the bottom-left corner of the first glyph.
void draw_text_vertical(RgbImage& img, int x, int y, std::string_view text, Rgb color);

struct Heatmap {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<double> values; // row-major, clamped to [0,1] for shading
    int cell = 24;
};

// Shade = round(255 * value) on all channels; labels in black on white.
RgbImage render_heatmap(const Heatmap& h);

} // namespace roso::plot
