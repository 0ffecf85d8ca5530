#pragma once

// Instruction rewriting: colormap lookup for colors, nearest seen
// instruction under a text encoder for objects, and edit-quality ranking.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "roso/episode.hpp"
#include "roso/instruction.hpp"

namespace roso {

/// Pick-color x place-color success rates. Rows are kept in palette order,
/// which is also the tie-break order of map_color.
struct ColorMap {
    std::vector<std::string> picks;
    std::vector<std::string> places;
    std::vector<double> success; // row-major, picks.size() x places.size()
    int trials = 0;

    int row(std::string_view pick) const;   // -1 when absent
    int col(std::string_view place) const;  // -1 when absent
    double at(int r, int c) const { return success[static_cast<std::size_t>(r) * places.size() + c]; }
    double& at(int r, int c) { return success[static_cast<std::size_t>(r) * places.size() + c]; }
};

ColorMap build_colormap(const PolicyModel& policy, const Environment& env, const std::vector<std::string>& seen_picks,
                        const std::vector<std::string>& all_places, int trials, std::uint64_t seed);
// Seen pick colors x all object colors.
ColorMap build_colormap(const PolicyModel& policy, const Environment& env, int trials, std::uint64_t seed);

// First header cell "pick\place", rates in shortest round-trip form.
std::string colormap_csv(const ColorMap& cm);
ColorMap parse_colormap_csv(std::string_view text);

// Best pick row for the place column. Throws LookupError when the place
// color has no column.
std::string map_color(const ColorMap& cm, std::string_view pick, std::string_view place);

struct ColorPair {
    std::string pick;
    std::string place;
};

// Remaps only colors outside the seen split. An unseen place color is
// mapped first (best seen column for the pick row, or for the mean over
// rows when the pick has none); an unseen pick is then mapped against the
// resulting place column.
ColorPair map_color_pair(const ColorMap& cm, std::string_view pick, std::string_view place, const Palette& palette);

class TextEncoder {
public:
    virtual ~TextEncoder() = default;
    virtual int dimension() const = 0;
    // Unit L2 norm. Throws EncodingError on empty or unknown text.
    virtual std::vector<double> embed(std::string_view text) const = 0;
};

/// Character trigrams of " text ", FNV-hashed into buckets.
class TrigramEncoder : public TextEncoder {
public:
    explicit TrigramEncoder(int dimension = 256);
    int dimension() const override { return dimension_; }
    std::vector<double> embed(std::string_view text) const override;

private:
    int dimension_;
};

/// First line: dimension. Then one record per line: text<TAB>f1 f2 ... fd.
class TableEncoder : public TextEncoder {
public:
    static TableEncoder load(const std::filesystem::path& path);
    static TableEncoder parse(std::string_view text);
    int dimension() const override { return dimension_; }
    std::vector<double> embed(std::string_view text) const override;

private:
    int dimension_ = 0;
    std::map<std::string, std::vector<double>, std::less<>> entries_;
};

double inner_product(const std::vector<double>& x, const std::vector<double>& y);

// Argmax of the inner product; ties go to the lexicographically smallest raw text.
Instruction map_semantic(const TextEncoder& encoder, const Instruction& instruction,
                         const std::vector<Instruction>& seen_instructions);

// "pick the <object> in a brown box" for every seen packing object.
std::vector<Instruction> seen_packing_instructions(const Catalog& catalog);

// Highest declared alignment; ties keep the earlier candidate.
std::string rank_edit_quality(const std::vector<std::string>& candidates, const Vocabulary& vocabulary);

struct EditQuality {
    std::string category;
    double mse = 0.0;
    double ssim = 0.0;
    double fid_lite = 0.0;
};

// Compares `samples` training renders of the category against inpainted
// renders of the same masks, on frame crops.
EditQuality measure_edit_quality(const std::string& category, const Catalog& catalog, int samples,
                                 std::uint64_t seed);

// Lowest measured fid_lite; ties keep the earlier candidate.
std::string rank_edit_quality_measured(const std::vector<std::string>& candidates, const Catalog& catalog,
                                       int samples, std::uint64_t seed);

} // namespace roso
