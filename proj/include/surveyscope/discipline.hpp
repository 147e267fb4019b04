#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace surveyscope {

/// The ten research disciplines covered by the corpus. Closed set.
enum class Discipline {
    Biology,
    Business,
    ComputerScience,
    Education,
    Engineering,
    EnvironmentalScience,
    Medicine,
    Physics,
    Psychology,
    Sociology,
};

inline constexpr std::size_t kDisciplineCount = 10;

const std::array<Discipline, kDisciplineCount>& all_disciplines();

std::string_view discipline_name(Discipline d);
std::optional<Discipline> parse_discipline(std::string_view name);

/// Throwing variant used by file loaders; raises DataError on unknown labels.
Discipline discipline_from_string(std::string_view name);

/// Field-of-study label used by the scholarly-metadata API.
std::string_view discipline_field_of_study(Discipline d);

}  // namespace surveyscope
