#include "roso/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "roso/error.hpp"

namespace roso::plot {

namespace {

using Glyph = std::array<std::uint8_t, 7>;

const Glyph& glyph(char c)
{
    static const Glyph letters[26] = {
        {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}, {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E},
        {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}, {0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C},
        {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}, {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10},
        {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}, {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11},
        {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}, {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C},
        {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}, {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F},
        {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}, {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11},
        {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}, {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10},
        {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}, {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11},
        {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}, {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04},
        {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}, {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04},
        {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}, {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11},
        {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}, {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F},
    };
    static const Glyph digits[10] = {
        {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}, {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},
        {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}, {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},
        {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}, {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},
        {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}, {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},
        {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}, {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},
    };
    static const Glyph space{}, dash{0, 0, 0, 0x1F, 0, 0, 0}, dot{0, 0, 0, 0, 0, 0x0C, 0x0C},
        apostrophe{0x04, 0x04, 0x08, 0, 0, 0, 0}, slash{0, 0x01, 0x02, 0x04, 0x08, 0x10, 0},
        amp{0x0C, 0x12, 0x14, 0x08, 0x15, 0x12, 0x0D}, percent{0x18, 0x19, 0x02, 0x04, 0x08, 0x13, 0x03},
        colon{0, 0x0C, 0x0C, 0, 0x0C, 0x0C, 0}, unknown{0x0E, 0x11, 0x01, 0x02, 0x04, 0, 0x04};
    if (c >= 'a' && c <= 'z')
        return letters[c - 'a'];
    if (c >= 'A' && c <= 'Z')
        return letters[c - 'A'];
    if (c >= '0' && c <= '9')
        return digits[c - '0'];
    switch (c) {
    case ' ':
        return space;
    case '-':
        return dash;
    case '.':
        return dot;
    case '\'':
        return apostrophe;
    case '/':
        return slash;
    case '&':
        return amp;
    case '%':
        return percent;
    case ':':
        return colon;
    default:
        return unknown;
    }
}

void put(RgbImage& img, int x, int y, Rgb c)
{
    if (x >= 0 && y >= 0 && x < img.width && y < img.height)
        img.set(x, y, c);
}

std::size_t longest(const std::vector<std::string>& v)
{
    std::size_t n = 0;
    for (const auto& s : v)
        n = std::max(n, s.size());
    return n;
}

} // namespace

void draw_text(RgbImage& img, int x, int y, std::string_view text, Rgb color)
{
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto& g = glyph(text[i]);
        for (int row = 0; row < 7; ++row)
            for (int col = 0; col < 5; ++col)
                if (g[row] & (0x10 >> col))
                    put(img, x + static_cast<int>(i) * 6 + col, y + row, color);
    }
}

void draw_text_vertical(RgbImage& img, int x, int y, std::string_view text, Rgb color)
{
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto& g = glyph(text[i]);
        for (int row = 0; row < 7; ++row)
            for (int col = 0; col < 5; ++col)
                if (g[row] & (0x10 >> col))
                    put(img, x + row, y - static_cast<int>(i) * 6 - col, color);
    }
}

RgbImage render_heatmap(const Heatmap& h)
{
    const std::size_t rows = h.row_labels.size(), cols = h.col_labels.size();
    if (rows == 0 || cols == 0 || h.values.size() != rows * cols)
        throw Error("heatmap: label counts do not match the values");
    if (h.cell < 8)
        throw Error("heatmap: cell size must be at least 8 pixels");
    const int left = static_cast<int>(longest(h.row_labels)) * 6 + 6;
    const int top = static_cast<int>(longest(h.col_labels)) * 6 + 6;
    const int width = left + static_cast<int>(cols) * h.cell + 2;
    const int height = top + static_cast<int>(rows) * h.cell + 2;
    RgbImage img(width, height, Rgb{255, 255, 255});
    const Rgb ink{0, 0, 0};
    const Rgb grid_color{160, 160, 160};
    for (std::size_t r = 0; r < rows; ++r)
        draw_text(img, 2, top + static_cast<int>(r) * h.cell + (h.cell - 7) / 2, h.row_labels[r], ink);
    for (std::size_t c = 0; c < cols; ++c)
        draw_text_vertical(img, left + static_cast<int>(c) * h.cell + (h.cell - 7) / 2, top - 4, h.col_labels[c], ink);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double v = std::clamp(h.values[r * cols + c], 0.0, 1.0);
            const auto shade = static_cast<std::uint8_t>(std::lround(255.0 * v));
            const int x0 = left + static_cast<int>(c) * h.cell, y0 = top + static_cast<int>(r) * h.cell;
            for (int y = 0; y <= h.cell; ++y)
                for (int x = 0; x <= h.cell; ++x) {
                    const bool grid = x == 0 || y == 0 || x == h.cell || y == h.cell;
                    img.set(x0 + x, y0 + y, grid ? grid_color : Rgb{shade, shade, shade});
                }
        }
    }
    return img;
}

} // namespace roso::plot
