#include "roso/color.hpp"

#include <algorithm>
#include <cmath>

namespace roso {

namespace {

constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.0;
constexpr double kWhiteZ = 1.08883;

constexpr double kEpsilon = 216.0 / 24389.0; // (6/29)^3
constexpr double kKappa = 24389.0 / 27.0;

double srgb_to_linear(double v)
{
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double v)
{
    return v <= 0.0031308 ? v * 12.92 : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

double lab_f(double t)
{
    return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

double lab_f_inv(double f)
{
    const double f3 = f * f * f;
    return f3 > kEpsilon ? f3 : (116.0 * f - 16.0) / kKappa;
}

std::uint8_t to_byte(double v)
{
    return static_cast<std::uint8_t>(std::clamp(std::lround(v * 255.0), 0L, 255L));
}

} // namespace

Lab srgb_to_lab(Rgb c)
{
    const double r = srgb_to_linear(c.r / 255.0);
    const double g = srgb_to_linear(c.g / 255.0);
    const double b = srgb_to_linear(c.b / 255.0);

    const double x = 0.412453 * r + 0.357580 * g + 0.180423 * b;
    const double y = 0.212671 * r + 0.715160 * g + 0.072169 * b;
    const double z = 0.019334 * r + 0.119193 * g + 0.950227 * b;

    const double fx = lab_f(x / kWhiteX);
    const double fy = lab_f(y / kWhiteY);
    const double fz = lab_f(z / kWhiteZ);

    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Rgb lab_to_srgb(const Lab& c)
{
    const double fy = (c.L + 16.0) / 116.0;
    const double fx = fy + c.a / 500.0;
    const double fz = fy - c.b / 200.0;

    const double x = lab_f_inv(fx) * kWhiteX;
    const double y = lab_f_inv(fy) * kWhiteY;
    const double z = lab_f_inv(fz) * kWhiteZ;

    // Inverse of the forward matrix above.
    const double r = 3.2404813432 * x - 1.5371515163 * y - 0.4985363262 * z;
    const double g = -0.9692549500 * x + 1.8759900015 * y + 0.0415559266 * z;
    const double b = 0.0556466391 * x - 0.2040413384 * y + 1.0573110696 * z;

    return {to_byte(linear_to_srgb(std::max(r, 0.0))), to_byte(linear_to_srgb(std::max(g, 0.0))),
            to_byte(linear_to_srgb(std::max(b, 0.0)))};
}

double delta_e(const Lab& x, const Lab& y)
{
    const double dl = x.L - y.L;
    const double da = x.a - y.a;
    const double db = x.b - y.b;
    return std::sqrt(dl * dl + da * da + db * db);
}

std::string to_string(Rgb c)
{
    return std::to_string(c.r) + " " + std::to_string(c.g) + " " + std::to_string(c.b);
}

} // namespace roso
