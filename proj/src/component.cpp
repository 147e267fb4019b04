#include "surveyscope/component.hpp"

#include "surveyscope/errors.hpp"
#include "surveyscope/text_util.hpp"

namespace surveyscope {

std::string_view component_name(Component c) {
    switch (c) {
        case Component::Outline: return "Outline";
        case Component::Content: return "Content";
        case Component::Reference: return "Reference";
    }
    return "Outline";
}

std::string_view component_lower_name(Component c) {
    switch (c) {
        case Component::Outline: return "outline";
        case Component::Content: return "content";
        case Component::Reference: return "reference";
    }
    return "outline";
}

Component component_from_string(std::string_view name) {
    auto lower = to_lower_ascii(name);
    if (lower == "outline") return Component::Outline;
    if (lower == "content") return Component::Content;
    if (lower == "reference" || lower == "references")
        return Component::Reference;
    throw DataError("unknown component: " + std::string(name));
}

}  // namespace surveyscope
