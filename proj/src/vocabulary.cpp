#include "roso/vocabulary.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "roso/error.hpp"
#include "roso/text.hpp"

#ifndef ROSO_DATA_DIR
#define ROSO_DATA_DIR "data"
#endif

namespace roso {

std::string_view to_string(Split s)
{
    return s == Split::Seen ? "seen" : "unseen";
}

Split parse_split(std::string_view s)
{
    if (s == "seen")
        return Split::Seen;
    if (s == "unseen")
        return Split::Unseen;
    throw DataError("unknown split: " + std::string(s));
}

namespace {

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::uint8_t parse_channel(std::string_view s)
{
    const int v = text::parse_int(s);
    if (v < 0 || v > 255)
        throw DataError("color channel out of range: " + std::string(s));
    return static_cast<std::uint8_t>(v);
}

Rgb parse_rgb(const std::vector<std::string>& words, std::size_t first)
{
    if (words.size() < first + 3)
        throw DataError("expected r g b");
    return {parse_channel(words[first]), parse_channel(words[first + 1]), parse_channel(words[first + 2])};
}

ColorRole parse_role(std::string_view s)
{
    if (s == "seen")
        return ColorRole::Seen;
    if (s == "unseen")
        return ColorRole::Unseen;
    if (s == "shared")
        return ColorRole::Shared;
    if (s == "train-background")
        return ColorRole::TrainBackground;
    if (s == "background")
        return ColorRole::Background;
    throw DataError("unknown color role: " + std::string(s));
}

Footprint parse_shape(std::string_view s)
{
    const auto words = text::split_ws(s);
    if (words.empty())
        throw DataError("empty shape");
    if (words[0] == "rect" && words.size() == 3)
        return Footprint(RectShape{text::parse_double(words[1]), text::parse_double(words[2])});
    if (words[0] == "disc" && words.size() == 2)
        return Footprint(DiscShape{text::parse_double(words[1])});
    if (words[0] == "poly") {
        std::vector<Vec2> pts;
        for (std::size_t i = 1; i < words.size(); ++i) {
            const auto comma = words[i].find(',');
            if (comma == std::string::npos)
                throw DataError("polygon vertex must be x,y: " + words[i]);
            pts.push_back({text::parse_double(std::string_view(words[i]).substr(0, comma)),
                           text::parse_double(std::string_view(words[i]).substr(comma + 1))});
        }
        try {
            return Footprint::polygon(std::move(pts));
        } catch (const std::invalid_argument& e) {
            throw DataError(e.what());
        }
    }
    throw DataError("bad shape: " + std::string(s));
}

// Version line must come first among non-comment lines.
void expect_version(const std::vector<std::string>& lines, std::size_t& i)
{
    if (i >= lines.size() || text::split_ws(lines[i]) != std::vector<std::string>{"version", "1"})
        throw DataError("expected 'version 1' header");
    ++i;
}

std::vector<std::string> content_lines(std::string_view text)
{
    std::vector<std::string> out;
    for (auto& line : text::split_lines(text)) {
        const auto t = text::trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        out.emplace_back(t);
    }
    return out;
}

} // namespace

Palette Palette::load(const std::filesystem::path& path)
{
    return parse(read_file(path));
}

Palette Palette::parse(std::string_view text)
{
    Palette p;
    const auto lines = content_lines(text);
    std::size_t i = 0;
    expect_version(lines, i);
    for (; i < lines.size(); ++i) {
        const auto words = text::split_ws(lines[i]);
        if (words.size() != 5)
            throw DataError("palette line needs 5 fields: " + lines[i]);
        if (p.find(words[0]) != nullptr)
            throw DataError("duplicate palette entry: " + words[0]);
        PaletteEntry e;
        e.name = words[0];
        e.rgb = parse_rgb(words, 1);
        e.lab = srgb_to_lab(e.rgb);
        e.role = parse_role(words[4]);
        p.entries_.push_back(std::move(e));
    }
    if (std::count_if(p.entries_.begin(), p.entries_.end(),
                      [](const auto& e) { return e.role == ColorRole::TrainBackground; }) != 1)
        throw DataError("palette needs exactly one train-background entry");
    return p;
}

const PaletteEntry* Palette::find(std::string_view name) const
{
    for (const auto& e : entries_)
        if (e.name == name)
            return &e;
    return nullptr;
}

const PaletteEntry& Palette::at(std::string_view name) const
{
    if (const auto* e = find(name))
        return *e;
    throw LookupError("unknown color: " + std::string(name));
}

std::vector<std::string> Palette::split_colors(Split s) const
{
    std::vector<std::string> out;
    for (const auto& e : entries_)
        if (e.in_split(s))
            out.push_back(e.name);
    return out;
}

std::vector<std::string> Palette::object_colors() const
{
    std::vector<std::string> out;
    for (const auto& e : entries_)
        if (e.is_object_color())
            out.push_back(e.name);
    return out;
}

const PaletteEntry& Palette::train_background() const
{
    for (const auto& e : entries_)
        if (e.role == ColorRole::TrainBackground)
            return e;
    throw LookupError("palette has no train-background entry");
}

std::vector<std::string> Palette::backgrounds() const
{
    std::vector<std::string> out;
    for (const auto& e : entries_)
        if (e.role == ColorRole::Background)
            out.push_back(e.name);
    return out;
}

bool Palette::is_seen_color(std::string_view name) const
{
    const auto* e = find(name);
    return e != nullptr && e->in_split(Split::Seen);
}

int Palette::order(std::string_view name) const
{
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].name == name)
            return static_cast<int>(i);
    return -1;
}

Rgb Appearance::at_column(int column) const
{
    if (texture == TextureKind::Plain)
        return base;
    const int phase = ((column % 3) + 3) % 3;
    return phase == 2 ? stripe : base;
}

Lab Appearance::mean_lab() const
{
    const Lab b = srgb_to_lab(base);
    if (texture == TextureKind::Plain)
        return b;
    const Lab s = srgb_to_lab(stripe);
    return {(2.0 * b.L + s.L) / 3.0, (2.0 * b.a + s.a) / 3.0, (2.0 * b.b + s.b) / 3.0};
}

Vocabulary Vocabulary::load(const std::filesystem::path& path)
{
    return parse(read_file(path));
}

Vocabulary Vocabulary::parse(std::string_view text)
{
    Vocabulary v;
    const auto lines = content_lines(text);
    std::size_t i = 0;
    expect_version(lines, i);
    for (; i < lines.size(); ++i) {
        auto fields = text::split(lines[i], '|');
        if (fields.size() != 8)
            throw DataError("vocabulary line needs 8 fields: " + lines[i]);
        for (auto& f : fields)
            f = std::string(text::trim(f));
        ObjectKind k;
        k.name = fields[0];
        if (k.name.empty() || v.find(k.name) != nullptr)
            throw DataError("missing or duplicate object name: " + lines[i]);
        if (fields[1] == "seen")
            k.cls = ObjectClass::Seen;
        else if (fields[1] == "unseen")
            k.cls = ObjectClass::Unseen;
        else if (fields[1] == "fixture")
            k.cls = ObjectClass::Fixture;
        else
            throw DataError("unknown object split: " + fields[1]);
        k.footprint = parse_shape(fields[2]);
        if (fields[3] != "-") {
            Appearance a;
            a.base = parse_rgb(text::split_ws(fields[3]), 0);
            const auto tex = text::split_ws(fields[4]);
            if (!tex.empty() && tex[0] == "stripes") {
                a.texture = TextureKind::Stripes;
                a.stripe = parse_rgb(tex, 1);
            } else if (tex.size() != 1 || tex[0] != "plain") {
                throw DataError("bad texture: " + fields[4]);
            }
            k.appearance = a;
        } else if (k.cls != ObjectClass::Fixture) {
            throw DataError("packing objects need a color: " + k.name);
        }
        k.height = text::parse_double(fields[5]);
        k.alignment = text::parse_double(fields[6]);
        k.variants = text::parse_int(fields[7]);
        if (k.height <= 0.0 || k.alignment < 0.0 || k.alignment > 1.0 || k.variants < 1)
            throw DataError("bad height/alignment/variants for " + k.name);
        v.kinds_.push_back(std::move(k));
    }
    for (const char* fixture : {"block", "bowl", "box"})
        if (v.find(fixture) == nullptr)
            throw DataError(std::string("vocabulary lacks fixture: ") + fixture);
    return v;
}

const ObjectKind* Vocabulary::find(std::string_view name) const
{
    for (const auto& k : kinds_)
        if (k.name == name)
            return &k;
    return nullptr;
}

const ObjectKind& Vocabulary::at(std::string_view name) const
{
    if (const auto* k = find(name))
        return *k;
    throw LookupError("unknown object category: " + std::string(name));
}

std::vector<std::string> Vocabulary::packing_objects(Split s) const
{
    const ObjectClass want = s == Split::Seen ? ObjectClass::Seen : ObjectClass::Unseen;
    std::vector<std::string> out;
    for (const auto& k : kinds_)
        if (k.cls == want)
            out.push_back(k.name);
    return out;
}

std::vector<std::string> Vocabulary::packing_objects() const
{
    std::vector<std::string> out;
    for (const auto& k : kinds_)
        if (k.cls != ObjectClass::Fixture)
            out.push_back(k.name);
    return out;
}

std::filesystem::path default_data_dir()
{
    if (const char* env = std::getenv("ROSO_DATA_DIR"))
        return env;
    return ROSO_DATA_DIR;
}

Catalog Catalog::load(const std::filesystem::path& data_dir)
{
    return {Palette::load(data_dir / "palette.txt"), Vocabulary::load(data_dir / "objects.txt")};
}

} // namespace roso
