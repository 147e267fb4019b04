#pragma once

#include <array>
#include <string_view>

namespace surveyscope {

/// The three survey components everything is evaluated against.
enum class Component { Outline, Content, Reference };

inline constexpr std::array<Component, 3> kAllComponents{
    Component::Outline, Component::Content, Component::Reference};

std::string_view component_name(Component c);       // "Outline"
std::string_view component_lower_name(Component c); // "outline"
Component component_from_string(std::string_view name);

}  // namespace surveyscope
