#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace xcoref {

enum class BaseType { kPerson, kGroup, kCountry, kMisc };

// One of the eight (base, NE / non-NE) concept types. Written as e.g.
// "PERSON_NE" or "GROUP_NN" in matrix files and reports.
struct ConceptType {
  BaseType base = BaseType::kMisc;
  bool is_ne = false;

  auto operator<=>(const ConceptType &) const = default;
};

std::string_view base_type_name(BaseType base);
std::optional<BaseType> parse_base_type(std::string_view name);

std::string to_string(ConceptType type);
std::optional<ConceptType> parse_concept_type(std::string_view name);

// Canonical enumeration order: PERSON, GROUP, COUNTRY, MISC, each NE first.
std::array<ConceptType, 8> all_concept_types();

}  // namespace xcoref
