#pragma once

#include <string>
#include <string_view>

#include "roso/tabletop.hpp"

namespace roso {

enum class Template { BlockInBowl, PackObject };

/// Templated language instruction with two slots.
///   BlockInBowl: "pick the <pick> block in a <place> bowl"  (slots are colors)
///   PackObject:  "pick the <pick> in a <place>"             (place is "brown box")
struct Instruction {
    Template tmpl = Template::BlockInBowl;
    std::string pick_slot;
    std::string place_slot;
    std::string raw;

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

enum class Slot { Pick, Place };

std::string render_instruction(Template t, std::string_view pick, std::string_view place);
Instruction make_instruction(Template t, std::string pick, std::string place);
// Throws InferenceError when the text matches no template.
Instruction parse_instruction(std::string_view raw);
Instruction instruction_for(const Scene& scene);

Descriptor pick_descriptor(const Instruction& instr);
Descriptor place_descriptor(const Instruction& instr);

Instruction rewrite_instruction(const Instruction& instr, Slot slot, std::string replacement);

} // namespace roso
