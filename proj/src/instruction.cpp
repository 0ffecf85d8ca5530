#include "roso/instruction.hpp"

#include "roso/error.hpp"

namespace roso {

namespace {

constexpr std::string_view kPrefix = "pick the ";
constexpr std::string_view kBlockMid = " block in a ";
constexpr std::string_view kBowlSuffix = " bowl";
constexpr std::string_view kPackMid = " in a ";

bool ends_with(std::string_view s, std::string_view suffix)
{
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

Descriptor split_colored(std::string_view slot, std::string_view category)
{
    return {std::string(slot), std::string(category)};
}

} // namespace

std::string render_instruction(Template t, std::string_view pick, std::string_view place)
{
    std::string s(kPrefix);
    s += pick;
    if (t == Template::BlockInBowl) {
        s += kBlockMid;
        s += place;
        s += kBowlSuffix;
    } else {
        s += kPackMid;
        s += place;
    }
    return s;
}

Instruction make_instruction(Template t, std::string pick, std::string place)
{
    Instruction i{t, std::move(pick), std::move(place), {}};
    i.raw = render_instruction(t, i.pick_slot, i.place_slot);
    return i;
}

Instruction parse_instruction(std::string_view raw)
{
    if (raw.substr(0, kPrefix.size()) != kPrefix)
        throw InferenceError("unparseable instruction: " + std::string(raw));
    const std::string_view body = raw.substr(kPrefix.size());
    if (ends_with(body, kBowlSuffix)) {
        const auto mid = body.find(kBlockMid);
        if (mid != std::string_view::npos && mid > 0) {
            const auto place = body.substr(mid + kBlockMid.size(),
                                           body.size() - mid - kBlockMid.size() - kBowlSuffix.size());
            if (!place.empty() && place.find(' ') == std::string_view::npos)
                return make_instruction(Template::BlockInBowl, std::string(body.substr(0, mid)), std::string(place));
        }
    }
    const auto mid = body.rfind(kPackMid);
    if (mid != std::string_view::npos && mid > 0 && mid + kPackMid.size() < body.size())
        return make_instruction(Template::PackObject, std::string(body.substr(0, mid)),
                                std::string(body.substr(mid + kPackMid.size())));
    throw InferenceError("unparseable instruction: " + std::string(raw));
}

Instruction instruction_for(const Scene& scene)
{
    if (scene.task == TaskKind::PutBlockInBowl)
        return make_instruction(Template::BlockInBowl, scene.goal.pick.color.value_or(""),
                                scene.goal.place.color.value_or(""));
    return make_instruction(Template::PackObject, scene.goal.pick.category,
                            scene.goal.place.color.value_or("brown") + " " + scene.goal.place.category);
}

Descriptor pick_descriptor(const Instruction& instr)
{
    if (instr.tmpl == Template::BlockInBowl)
        return split_colored(instr.pick_slot, "block");
    return {std::nullopt, instr.pick_slot};
}

Descriptor place_descriptor(const Instruction& instr)
{
    if (instr.tmpl == Template::BlockInBowl)
        return split_colored(instr.place_slot, "bowl");
    const auto sp = instr.place_slot.find(' ');
    if (sp == std::string::npos)
        return {std::nullopt, instr.place_slot};
    return {instr.place_slot.substr(0, sp), instr.place_slot.substr(sp + 1)};
}

Instruction rewrite_instruction(const Instruction& instr, Slot slot, std::string replacement)
{
    Instruction out = instr;
    (slot == Slot::Pick ? out.pick_slot : out.place_slot) = std::move(replacement);
    out.raw = render_instruction(out.tmpl, out.pick_slot, out.place_slot);
    return out;
}

} // namespace roso
