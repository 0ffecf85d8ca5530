#include "roso/png.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include <zlib.h>

#include "roso/error.hpp"

namespace roso::png {

namespace {

constexpr std::array<std::uint8_t, 8> kSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v)
{
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32(const std::uint8_t* p)
{
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | p[3];
}

void put_chunk(std::vector<std::uint8_t>& out, const char* type, std::span<const std::uint8_t> data)
{
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uLong crc = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
    put_u32(out, static_cast<std::uint32_t>(crc));
}

// raw: filtered scanlines (leading filter byte per row).
std::vector<std::uint8_t> assemble(int width, int height, std::uint8_t bit_depth, std::uint8_t color_type,
                                   const std::vector<std::uint8_t>& raw)
{
    std::vector<std::uint8_t> out(kSignature.begin(), kSignature.end());

    std::vector<std::uint8_t> ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(width));
    put_u32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(bit_depth);
    ihdr.push_back(color_type);
    ihdr.push_back(0); // deflate
    ihdr.push_back(0); // adaptive filtering
    ihdr.push_back(0); // no interlace
    put_chunk(out, "IHDR", ihdr);

    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> z(bound);
    if (compress2(z.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw IoError("png: deflate failed");
    z.resize(bound);
    put_chunk(out, "IDAT", z);
    put_chunk(out, "IEND", {});
    return out;
}

} // namespace

std::vector<std::uint8_t> encode_rgb8(const RgbImage& image)
{
    const std::size_t stride = 3 * static_cast<std::size_t>(image.width);
    std::vector<std::uint8_t> raw;
    raw.reserve((stride + 1) * image.height);
    for (int v = 0; v < image.height; ++v) {
        raw.push_back(0);
        const auto* row = image.pixels.data() + v * stride;
        raw.insert(raw.end(), row, row + stride);
    }
    return assemble(image.width, image.height, 8, 2, raw);
}

std::vector<std::uint8_t> encode_gray16(const DepthMap& depth, double depth_scale)
{
    std::vector<std::uint8_t> raw;
    raw.reserve((2 * static_cast<std::size_t>(depth.width) + 1) * depth.height);
    for (int v = 0; v < depth.height; ++v) {
        raw.push_back(0);
        for (int u = 0; u < depth.width; ++u) {
            const double scaled = std::round(static_cast<double>(depth.at(u, v)) * depth_scale);
            const auto q = static_cast<std::uint16_t>(std::clamp(scaled, 0.0, 65535.0));
            raw.push_back(static_cast<std::uint8_t>(q >> 8));
            raw.push_back(static_cast<std::uint8_t>(q & 0xff));
        }
    }
    return assemble(depth.width, depth.height, 16, 0, raw);
}

std::vector<std::uint8_t> encode_mask1(const Mask& mask)
{
    const std::size_t stride = (static_cast<std::size_t>(mask.width()) + 7) / 8;
    std::vector<std::uint8_t> raw;
    raw.reserve((stride + 1) * mask.height());
    for (int v = 0; v < mask.height(); ++v) {
        raw.push_back(0);
        std::vector<std::uint8_t> row(stride, 0);
        for (int u = 0; u < mask.width(); ++u)
            if (mask.at(u, v))
                row[u / 8] |= static_cast<std::uint8_t>(0x80 >> (u % 8));
        raw.insert(raw.end(), row.begin(), row.end());
    }
    return assemble(mask.width(), mask.height(), 1, 0, raw);
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open for writing: " + path.string());
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f)
        throw IoError("write failed: " + path.string());
}

RgbImage decode_rgb8(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < 8 || !std::equal(kSignature.begin(), kSignature.end(), bytes.begin()))
        throw DataError("png: bad signature");
    std::size_t pos = 8;
    int width = 0, height = 0;
    std::vector<std::uint8_t> z;
    while (pos + 12 <= bytes.size()) {
        const std::uint32_t len = get_u32(bytes.data() + pos);
        const std::string type(reinterpret_cast<const char*>(bytes.data() + pos + 4), 4);
        const std::uint8_t* data = bytes.data() + pos + 8;
        if (pos + 12 + len > bytes.size())
            throw DataError("png: truncated chunk");
        if (type == "IHDR") {
            width = static_cast<int>(get_u32(data));
            height = static_cast<int>(get_u32(data + 4));
            if (data[8] != 8 || data[9] != 2 || data[12] != 0)
                throw DataError("png: only 8-bit RGB non-interlaced is supported");
        } else if (type == "IDAT") {
            z.insert(z.end(), data, data + len);
        } else if (type == "IEND") {
            break;
        }
        pos += 12 + len;
    }
    const std::size_t stride = 3 * static_cast<std::size_t>(width);
    std::vector<std::uint8_t> raw((stride + 1) * height);
    uLongf raw_len = static_cast<uLongf>(raw.size());
    if (uncompress(raw.data(), &raw_len, z.data(), static_cast<uLong>(z.size())) != Z_OK || raw_len != raw.size())
        throw DataError("png: inflate failed");
    RgbImage out(width, height);
    for (int v = 0; v < height; ++v) {
        if (raw[v * (stride + 1)] != 0)
            throw DataError("png: unsupported filter type");
        std::memcpy(out.pixels.data() + v * stride, raw.data() + v * (stride + 1) + 1, stride);
    }
    return out;
}

} // namespace roso::png
