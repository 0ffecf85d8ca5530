#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roso/color.hpp"
#include "roso/geometry.hpp"

namespace roso {

enum class Split { Seen, Unseen };

std::string_view to_string(Split s);
Split parse_split(std::string_view s);

enum class ColorRole { Seen, Unseen, Shared, TrainBackground, Background };

struct PaletteEntry {
    std::string name;
    Rgb rgb;
    Lab lab;
    ColorRole role = ColorRole::Seen;

    bool in_split(Split s) const
    {
        return role == ColorRole::Shared || (s == Split::Seen ? role == ColorRole::Seen : role == ColorRole::Unseen);
    }
    bool is_object_color() const
    {
        return role == ColorRole::Seen || role == ColorRole::Unseen || role == ColorRole::Shared;
    }
};

/// Named colors. Entry order in the file is the canonical tie-break order.
class Palette {
public:
    static Palette load(const std::filesystem::path& path);
    static Palette parse(std::string_view text);

    const std::vector<PaletteEntry>& entries() const { return entries_; }
    const PaletteEntry* find(std::string_view name) const;
    const PaletteEntry& at(std::string_view name) const; // throws LookupError

    // Object colors of one split, in palette order (7 each).
    std::vector<std::string> split_colors(Split s) const;
    std::vector<std::string> object_colors() const;
    const PaletteEntry& train_background() const;
    std::vector<std::string> backgrounds() const;

    bool is_seen_color(std::string_view name) const;
    int order(std::string_view name) const; // -1 when absent

private:
    std::vector<PaletteEntry> entries_;
};

enum class TextureKind { Plain, Stripes };

struct Appearance {
    Rgb base;
    TextureKind texture = TextureKind::Plain;
    Rgb stripe;

    // Vertical stripes with a 3-pixel period (base, base, stripe), phased
    // from the given column offset. Any 3-pixel-wide window inside the
    // pattern therefore has the same mean.
    Rgb at_column(int column) const;
    // CIELAB mean over one pattern period.
    Lab mean_lab() const;
    friend bool operator==(const Appearance&, const Appearance&) = default;
};

enum class ObjectClass { Fixture, Seen, Unseen };

struct ObjectKind {
    std::string name;
    ObjectClass cls = ObjectClass::Seen;
    Footprint footprint;
    std::optional<Appearance> appearance; // absent for scene-colored fixtures
    double height = 0.0;
    double alignment = 1.0;
    int variants = 1;
};

/// Object categories: the fixtures (block, bowl, box) and the 56 packing
/// objects split 37 seen / 19 unseen.
class Vocabulary {
public:
    static Vocabulary load(const std::filesystem::path& path);
    static Vocabulary parse(std::string_view text);

    const std::vector<ObjectKind>& kinds() const { return kinds_; }
    const ObjectKind* find(std::string_view name) const;
    const ObjectKind& at(std::string_view name) const; // throws LookupError

    // Packing objects of one split, in file order.
    std::vector<std::string> packing_objects(Split s) const;
    std::vector<std::string> packing_objects() const;

private:
    std::vector<ObjectKind> kinds_;
};

/// Locations of the bundled data files.
std::filesystem::path default_data_dir();

struct Catalog {
    Palette palette;
    Vocabulary vocabulary;

    static Catalog load(const std::filesystem::path& data_dir = default_data_dir());
};

// Rendering scale: pixels per table unit; the table is 1.0 x 0.5 units.
inline constexpr double kPixelsPerUnit = 320.0;
inline constexpr int kImageWidth = 320;
inline constexpr int kImageHeight = 160;
inline constexpr double kTableWidth = 1.0;
inline constexpr double kTableHeight = 0.5;
// Receptacles (bowls, the box) are flat; anything at or below this height
// is treated as flat by perception.
inline constexpr double kFlatHeight = 0.015;

} // namespace roso
