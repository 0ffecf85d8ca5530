#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "roso/image.hpp"

namespace roso::png {

// Encoders produce byte-stable output: fixed zlib level, filter type 0.
std::vector<std::uint8_t> encode_rgb8(const RgbImage& image);

// Depth in table units scaled by depth_scale and clamped to 16 bits.
std::vector<std::uint8_t> encode_gray16(const DepthMap& depth, double depth_scale);

std::vector<std::uint8_t> encode_mask1(const Mask& mask);

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// Reads 8-bit RGB, non-interlaced PNGs with filter type 0, as written above.
RgbImage decode_rgb8(std::span<const std::uint8_t> bytes);

} // namespace roso::png
