#include "roso/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace roso {

RgbImage::RgbImage(int w, int h, Rgb fill) : width(w), height(h), pixels(3 * static_cast<std::size_t>(w) * h)
{
    for (std::size_t i = 0; i < pixels.size(); i += 3) {
        pixels[i] = fill.r;
        pixels[i + 1] = fill.g;
        pixels[i + 2] = fill.b;
    }
}

DepthMap::DepthMap(int w, int h, float fill) : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

Mask::Mask(int w, int h, bool fill) : width_(w), height_(h), bits_(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

std::size_t Mask::count() const
{
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double iou(const Mask& a, const Mask& b)
{
    if (a.width() != b.width() || a.height() != b.height())
        throw std::invalid_argument("iou: mask dimensions differ");
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        inter += a.at_index(i) && b.at_index(i);
        uni += a.at_index(i) || b.at_index(i);
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

RgbImage crop(const RgbImage& image, const Rect& r)
{
    if (r.x0 < 0 || r.y0 < 0 || r.x0 + r.width > image.width || r.y0 + r.height > image.height)
        throw std::out_of_range("crop: rectangle outside image");
    RgbImage out(r.width, r.height);
    for (int v = 0; v < r.height; ++v)
        for (int u = 0; u < r.width; ++u)
            out.set(u, v, image.at(r.x0 + u, r.y0 + v));
    return out;
}

Rgb mean_color(const RgbImage& image)
{
    double s[3] = {0, 0, 0};
    for (std::size_t i = 0; i < image.pixels.size(); ++i)
        s[i % 3] += image.pixels[i];
    const double n = static_cast<double>(std::max<std::size_t>(image.size(), 1));
    return {static_cast<std::uint8_t>(std::lround(s[0] / n)), static_cast<std::uint8_t>(std::lround(s[1] / n)),
            static_cast<std::uint8_t>(std::lround(s[2] / n))};
}

} // namespace roso
