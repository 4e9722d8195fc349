#include <sstream>

#include "doctest.h"
#include "generators.h"
#include "xcoref/errors.h"
#include "xcoref/type_scoring.h"

using namespace xcoref;

namespace {

Mention with_senses(std::vector<SenseRank> senses, std::optional<std::string> ne = std::nullopt) {
  Mention m;
  m.sense_ranks = std::move(senses);
  m.ne_type = std::move(ne);
  return m;
}

TypeScore score_of(const std::vector<Mention> &ms) {
  std::vector<const Mention *> ptrs;
  for (const Mention &m : ms) ptrs.push_back(&m);
  return score_types(ptrs);
}

ConceptType type_of(const TypeScore &s, const std::vector<Mention> &ms,
                    const CategoryMap &categories = CategoryMap::defaults()) {
  std::vector<const Mention *> ptrs;
  for (const Mention &m : ms) ptrs.push_back(&m);
  return assign_type(s, ptrs, categories);
}

ConceptType ct(const char *name) { return *parse_concept_type(name); }

}  // namespace

TEST_CASE("concept type names round-trip") {
  const auto all = all_concept_types();
  CHECK(all.size() == 8);
  for (ConceptType t : all) CHECK(parse_concept_type(to_string(t)) == t);
  CHECK(to_string(ConceptType{BaseType::kGroup, false}) == "GROUP_NN");
  CHECK_FALSE(parse_concept_type("ANIMAL_NE").has_value());
}

TEST_CASE("score_types weights senses by 1/rank") {
  CHECK(sense_weight(1) == 1.0);
  CHECK(sense_weight(3) == doctest::Approx(0.3333).epsilon(1e-4));

  const TypeScore one = score_of({with_senses({{"noun.person", 1}})});
  CHECK(one.weights == std::map<std::string, double>{{"noun.person", 1.0}});

  const TypeScore two = score_of({with_senses({{"noun.person", 1}, {"noun.artifact", 3}})});
  CHECK(two.weights.at("noun.person") == 1.0);
  CHECK(two.weights.at("noun.artifact") == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const TypeScore pair = score_of({with_senses({{"noun.group", 2}}), with_senses({{"noun.group", 2}})});
  CHECK(pair.weights.at("noun.group") == doctest::Approx(1.0));

  CHECK(score_of({with_senses({})}).empty());
}

TEST_CASE("rank weight never increases with rank") {
  for (int r = 1; r < 50; ++r) CHECK(sense_weight(r + 1) < sense_weight(r));
}

TEST_CASE("assign_type") {
  SUBCASE("arg-max with NE majority") {
    TypeScore s;
    s.weights = {{"noun.person", 2.0}, {"noun.group", 0.5}};
    const std::vector<Mention> ne = {with_senses({}, "PERSON"), with_senses({}, "PERSON")};
    CHECK(type_of(s, ne) == ct("PERSON_NE"));
  }
  SUBCASE("empty score without NE mentions") {
    const std::vector<Mention> ms = {with_senses({})};
    CHECK(type_of(TypeScore{}, ms) == ct("MISC_NN"));
  }
  SUBCASE("ties go to the earlier category") {
    TypeScore s;
    s.weights = {{"noun.person", 1.0}, {"noun.group", 1.0}};
    const std::vector<Mention> ms = {with_senses({})};
    // noun.group precedes noun.person in the shipped table.
    CHECK(type_of(s, ms) == ct("GROUP_NN"));
    std::stringstream reordered("noun.person PERSON\nnoun.group GROUP\n");
    CHECK(type_of(s, ms, CategoryMap::parse(reordered)) == ct("PERSON_NN"));
  }
  SUBCASE("COUNTRY needs a GPE mention") {
    TypeScore s;
    s.weights = {{"noun.location", 1.0}};
    CHECK(type_of(s, {with_senses({}, "GPE")}) == ct("COUNTRY_NE"));
    CHECK(type_of(s, {with_senses({}, "ORG")}) == ct("MISC_NE"));
  }
  SUBCASE("half the mentions labeled is enough for NE") {
    const std::vector<Mention> half = {with_senses({}, "ORG"), with_senses({})};
    CHECK(type_of(TypeScore{}, half).is_ne);
    const std::vector<Mention> third = {with_senses({}, "ORG"), with_senses({}), with_senses({})};
    CHECK_FALSE(type_of(TypeScore{}, third).is_ne);
  }
}

TEST_CASE("assign_type is stable under scaling and repetition") {
  testing::Rng rng(21);
  const char *cats[] = {"noun.person", "noun.group", "noun.location", "noun.act", "noun.artifact"};
  for (int trial = 0; trial < 200; ++trial) {
    TypeScore s;
    for (const char *c : cats) {
      if (std::bernoulli_distribution(0.6)(rng)) {
        s.weights[c] = static_cast<double>(std::uniform_int_distribution<int>(1, 4)(rng));
      }
    }
    const std::vector<Mention> ms = {with_senses({}, "GPE"), with_senses({})};
    const ConceptType base = type_of(s, ms);
    CHECK(type_of(s, ms) == base);
    TypeScore scaled = s;
    for (auto &[c, w] : scaled.weights) w *= 3.5;
    CHECK(type_of(scaled, ms) == base);
  }
}

TEST_CASE("default comparison matrices") {
  const ComparisonMatrix &cm2 = ComparisonMatrix::defaults(2);
  CHECK(comparable(cm2, ct("PERSON_NE"), ct("PERSON_NE")));
  CHECK_FALSE(comparable(cm2, ct("PERSON_NE"), ct("MISC_NN")));
  for (int id = 1; id <= 5; ++id) {
    const ComparisonMatrix &cm = ComparisonMatrix::defaults(id);
    CHECK(cm.sieve_id() == id);
    for (ConceptType x : all_concept_types()) {
      for (ConceptType y : all_concept_types()) {
        CHECK(cm.has_entry(x, y));
        CHECK(cm.allows(x, y) == cm.allows(y, x));
      }
    }
  }
  const ComparisonMatrix &cm4 = ComparisonMatrix::defaults(4);
  CHECK(comparable(cm4, ct("COUNTRY_NE"), ct("GROUP_NN")));
  CHECK_FALSE(comparable(cm4, ct("PERSON_NE"), ct("GROUP_NN")));
}

TEST_CASE("matrix files") {
  std::stringstream asym(
      "type PERSON_NE GROUP_NE\n"
      "PERSON_NE 1 1\n"
      "GROUP_NE 0 1\n");
  CHECK_THROWS_AS(ComparisonMatrix::parse(asym, 2), FormatError);

  std::stringstream partial(
      "# two types only\n"
      "type PERSON_NE GROUP_NE\n"
      "PERSON_NE 1 0\n"
      "GROUP_NE 0 2\n");
  const ComparisonMatrix cm = ComparisonMatrix::parse(partial, 3);
  CHECK(cm.allows(ct("GROUP_NE"), ct("GROUP_NE")));
  CHECK_FALSE(cm.allows(ct("PERSON_NE"), ct("GROUP_NE")));
  CHECK_THROWS_AS(cm.allows(ct("MISC_NN"), ct("MISC_NN")), MissingEntry);

  std::stringstream negative("type PERSON_NE\nPERSON_NE -1\n");
  CHECK_THROWS_AS(ComparisonMatrix::parse(negative, 1), FormatError);
}

TEST_CASE("category map") {
  const CategoryMap &m = CategoryMap::defaults();
  CHECK(m.base_of("noun.person") == BaseType::kPerson);
  CHECK(m.base_of("noun.group") == BaseType::kGroup);
  CHECK(m.base_of("verb.social") == BaseType::kMisc);
  CHECK(m.base_of("noun.unknown") == BaseType::kMisc);
  CHECK(m.order_of("noun.act") < m.order_of("noun.person"));
  CHECK(m.order_of("noun.unknown") >= m.size());
  CHECK(m.size() >= 26);
}
