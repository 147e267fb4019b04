#include "surveyscope/discipline.hpp"

#include "surveyscope/errors.hpp"

namespace surveyscope {

namespace {

struct Entry {
    Discipline value;
    std::string_view name;
    std::string_view field_of_study;
};

constexpr std::array<Entry, kDisciplineCount> kEntries{{
    {Discipline::Biology, "Biology", "Biology"},
    {Discipline::Business, "Business", "Business"},
    {Discipline::ComputerScience, "ComputerScience", "Computer Science"},
    {Discipline::Education, "Education", "Education"},
    {Discipline::Engineering, "Engineering", "Engineering"},
    {Discipline::EnvironmentalScience, "EnvironmentalScience",
     "Environmental Science"},
    {Discipline::Medicine, "Medicine", "Medicine"},
    {Discipline::Physics, "Physics", "Physics"},
    {Discipline::Psychology, "Psychology", "Psychology"},
    {Discipline::Sociology, "Sociology", "Sociology"},
}};

}  // namespace

const std::array<Discipline, kDisciplineCount>& all_disciplines() {
    static const std::array<Discipline, kDisciplineCount> values = [] {
        std::array<Discipline, kDisciplineCount> out{};
        for (std::size_t i = 0; i < kEntries.size(); ++i)
            out[i] = kEntries[i].value;
        return out;
    }();
    return values;
}

std::string_view discipline_name(Discipline d) {
    return kEntries[static_cast<std::size_t>(d)].name;
}

std::optional<Discipline> parse_discipline(std::string_view name) {
    for (const auto& e : kEntries)
        if (e.name == name) return e.value;
    return std::nullopt;
}

Discipline discipline_from_string(std::string_view name) {
    auto parsed = parse_discipline(name);
    if (!parsed)
        throw DataError("unknown discipline label: " + std::string(name));
    return *parsed;
}

std::string_view discipline_field_of_study(Discipline d) {
    return kEntries[static_cast<std::size_t>(d)].field_of_study;
}

}  // namespace surveyscope
