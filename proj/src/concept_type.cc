#include "xcoref/concept_type.h"

namespace xcoref {

std::string_view base_type_name(BaseType base) {
  switch (base) {
    case BaseType::kPerson: return "PERSON";
    case BaseType::kGroup: return "GROUP";
    case BaseType::kCountry: return "COUNTRY";
    case BaseType::kMisc: return "MISC";
  }
  return "MISC";
}

std::optional<BaseType> parse_base_type(std::string_view name) {
  if (name == "PERSON") return BaseType::kPerson;
  if (name == "GROUP") return BaseType::kGroup;
  if (name == "COUNTRY") return BaseType::kCountry;
  if (name == "MISC") return BaseType::kMisc;
  return std::nullopt;
}

std::string to_string(ConceptType type) {
  std::string name(base_type_name(type.base));
  name += type.is_ne ? "_NE" : "_NN";
  return name;
}

std::optional<ConceptType> parse_concept_type(std::string_view name) {
  auto sep = name.rfind('_');
  if (sep == std::string_view::npos) return std::nullopt;
  auto base = parse_base_type(name.substr(0, sep));
  if (!base) return std::nullopt;
  std::string_view variant = name.substr(sep + 1);
  if (variant == "NE") return ConceptType{*base, true};
  if (variant == "NN") return ConceptType{*base, false};
  return std::nullopt;
}

std::array<ConceptType, 8> all_concept_types() {
  std::array<ConceptType, 8> types;
  std::size_t i = 0;
  for (BaseType base : {BaseType::kPerson, BaseType::kGroup,
                        BaseType::kCountry, BaseType::kMisc}) {
    types[i++] = ConceptType{base, true};
    types[i++] = ConceptType{base, false};
  }
  return types;
}

}  // namespace xcoref
