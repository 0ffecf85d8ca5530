#pragma once

#include <cstdint>
#include <string>

namespace roso {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Lab {
    double L = 0.0, a = 0.0, b = 0.0;
};

// sRGB -> CIELAB under D65, reference white (0.95047, 1.0, 1.08883).
Lab srgb_to_lab(Rgb c);

// Inverse of srgb_to_lab, rounded and clamped to the 8-bit gamut.
Rgb lab_to_srgb(const Lab& c);

double delta_e(const Lab& x, const Lab& y);

// Rec.601 luma in [0,1].
inline double luma(Rgb c)
{
    return (0.299 * c.r + 0.587 * c.g + 0.114 * c.b) / 255.0;
}

std::string to_string(Rgb c);

} // namespace roso
