#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "roso/color.hpp"

namespace roso {

struct Pixel {
    int u = 0; // column
    int v = 0; // row
    friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Axis-aligned pixel rectangle; x0/y0 inclusive, width/height in pixels.
struct Rect {
    int x0 = 0, y0 = 0, width = 0, height = 0;
    int area() const { return width * height; }
    bool contains(int u, int v) const { return u >= x0 && u < x0 + width && v >= y0 && v < y0 + height; }
    friend bool operator==(const Rect&, const Rect&) = default;
};

/// Interleaved 8-bit RGB.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    RgbImage() = default;
    RgbImage(int w, int h, Rgb fill = {});

    std::size_t size() const { return static_cast<std::size_t>(width) * height; }
    Rgb at(int u, int v) const
    {
        const std::size_t i = 3 * (static_cast<std::size_t>(v) * width + u);
        return {pixels[i], pixels[i + 1], pixels[i + 2]};
    }
    void set(int u, int v, Rgb c)
    {
        const std::size_t i = 3 * (static_cast<std::size_t>(v) * width + u);
        pixels[i] = c.r;
        pixels[i + 1] = c.g;
        pixels[i + 2] = c.b;
    }
    friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Per-pixel height above the table, in table units.
struct DepthMap {
    int width = 0;
    int height = 0;
    std::vector<float> values;

    DepthMap() = default;
    DepthMap(int w, int h, float fill = 0.0f);

    float at(int u, int v) const { return values[static_cast<std::size_t>(v) * width + u]; }
    float& at(int u, int v) { return values[static_cast<std::size_t>(v) * width + u]; }
    friend bool operator==(const DepthMap&, const DepthMap&) = default;
};

struct RgbdImage {
    RgbImage rgb;
    DepthMap depth;

    int width() const { return rgb.width; }
    int height() const { return rgb.height; }
    friend bool operator==(const RgbdImage&, const RgbdImage&) = default;
};

/// Binary pixel mask.
class Mask {
public:
    Mask() = default;
    Mask(int w, int h, bool fill = false);

    int width() const { return width_; }
    int height() const { return height_; }
    bool at(int u, int v) const { return bits_[static_cast<std::size_t>(v) * width_ + u] != 0; }
    void set(int u, int v, bool on = true) { bits_[static_cast<std::size_t>(v) * width_ + u] = on ? 1 : 0; }
    bool at_index(std::size_t i) const { return bits_[i] != 0; }
    void set_index(std::size_t i, bool on = true) { bits_[i] = on ? 1 : 0; }

    std::size_t count() const;
    bool empty() const { return count() == 0; }
    std::size_t size() const { return bits_.size(); }

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

double iou(const Mask& a, const Mask& b);

RgbImage crop(const RgbImage& image, const Rect& r);

// Mean RGB over all pixels.
Rgb mean_color(const RgbImage& image);

} // namespace roso
