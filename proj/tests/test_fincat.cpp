#include "doctest.h"

#include <memory>

#include "sitelab/catalogue.hpp"
#include "sitelab/coverage.hpp"
#include "sitelab/fincat.hpp"

using namespace sitelab;

namespace {

CategoryPtr chain3() {
  return std::make_shared<const FiniteCategory>(
      FiniteCategory::from_poset(Poset({"0", "1", "2"}, std::vector<std::pair<std::string, std::string>>{{"0", "1"}, {"1", "2"}})));
}

std::vector<MorId> ids(const FiniteCategory& c, std::initializer_list<const char*> names) {
  std::vector<MorId> out;
  for (auto n : names) out.push_back(c.morphism_id(n));
  return out;
}

Bits bits_of(const FiniteCategory& c, std::initializer_list<const char*> names) {
  Bits b(static_cast<std::size_t>(c.morphism_count()));
  for (auto n : names) b.set(static_cast<std::size_t>(c.morphism_id(n)));
  return b;
}

/// The monoid {1, e} with e∘e = e on a single object.
FiniteCategory idempotent() {
  return FiniteCategory({"*"}, {{"1", 0, 0}, {"e", 0, 0}}, {0}, {{1, 1, 1}});
}

}  // namespace

TEST_CASE("validate_category: trivial and hand-built examples") {
  FiniteCategory one({"x"}, {{"id", 0, 0}}, {0}, {});
  CHECK(validate_category(one).ok);

  auto c = chain3();
  CHECK(validate_category(*c).ok);
  CHECK(c->morphism_count() == 6);
  CHECK(c->compose_checked(c->morphism_id("1<=2"), c->morphism_id("0<=1")) == c->morphism_id("0<=2"));

  CHECK(validate_category(idempotent()).ok);
}

TEST_CASE("validate_category: missing composable pair is reported") {
  // 0 -f-> 1 -g-> 2 with h: 0 -> 2 but g∘f left out of the table.
  FiniteCategory c({"0", "1", "2"},
                   {{"i0", 0, 0}, {"i1", 1, 1}, {"i2", 2, 2}, {"f", 0, 1}, {"g", 1, 2}, {"h", 0, 2}},
                   {0, 1, 2}, {});
  const auto r = validate_category(c);
  CHECK_FALSE(r.ok);
  CHECK(r.axiom == "composition-total");
  CHECK(r.witness == std::vector<std::string>{"g", "f"});
}

TEST_CASE("validate_category: associativity failure") {
  // a∘a = b, a∘b = a, b∘a = b, b∘b = b: (a∘b)∘a = b but a∘(b∘a) = a.
  FiniteCategory m({"*"}, {{"1", 0, 0}, {"a", 0, 0}, {"b", 0, 0}}, {0},
                   {{1, 1, 2}, {1, 2, 1}, {2, 1, 2}, {2, 2, 2}});
  const auto r = validate_category(m);
  CHECK_FALSE(r.ok);
  CHECK(r.axiom == "associativity");
}

TEST_CASE("validate_category: conflicting entries and bad typing") {
  FiniteCategory dup({"*"}, {{"1", 0, 0}, {"e", 0, 0}}, {0}, {{1, 1, 1}, {1, 1, 0}});
  CHECK(validate_category(dup).axiom == "composition-conflict");

  FiniteCategory typing({"a", "b"}, {{"ia", 0, 0}, {"ib", 1, 1}, {"f", 0, 1}}, {0, 1}, {{2, 2, 2}});
  CHECK_FALSE(validate_category(typing).ok);
}

TEST_CASE("sieve_generated examples") {
  auto c = chain3();
  const ObjId two = c->object_id("2");
  {
    const auto fam = ids(*c, {"2<=2"});
    CHECK(sieve_generated(*c, two, fam) == maximal_sieve(*c, two));
  }
  CHECK(sieve_generated(*c, two, std::vector<MorId>{}).members.none());
  {
    const auto fam = ids(*c, {"1<=2"});
    CHECK(sieve_generated(*c, two, fam).members == bits_of(*c, {"1<=2", "0<=2"}));
  }
  {
    const auto fam = ids(*c, {"0<=1"});
    CHECK_THROWS_AS(sieve_generated(*c, two, fam), InputError);
  }
}

TEST_CASE("pullback_sieve examples") {
  auto c = chain3();
  const ObjId two = c->object_id("2");
  const MorId h = c->morphism_id("1<=2");
  CHECK(pullback_sieve(*c, maximal_sieve(*c, two), h) == maximal_sieve(*c, c->object_id("1")));
  CHECK(pullback_sieve(*c, empty_sieve(*c, two), h).members.none());
  const auto fam = ids(*c, {"0<=2"});
  const auto s = sieve_generated(*c, two, fam);
  CHECK(pullback_sieve(*c, s, h).members == bits_of(*c, {"0<=1"}));
}

TEST_CASE("is_codirected_poset") {
  using P = std::vector<std::pair<std::string, std::string>>;
  CHECK(is_codirected_poset(Poset({"a"}, P{})));
  CHECK_FALSE(is_codirected_poset(Poset({"a", "b"}, P{})));
  CHECK(is_codirected_poset(Poset({"l2", "l1", "l0"}, P{{"l2", "l1"}, {"l1", "l0"}})));
  CHECK_FALSE(is_codirected_poset(Poset(std::vector<std::string>{}, P{})));
  // V shape with a bottom is codirected; a W without one is not.
  CHECK(is_codirected_poset(Poset({"b", "x", "y"}, P{{"b", "x"}, {"b", "y"}})));
  CHECK_FALSE(is_codirected_poset(Poset({"x", "y", "t"}, P{{"x", "t"}, {"y", "t"}})));
}

TEST_CASE("poset closure and antisymmetry") {
  using P = std::vector<std::pair<std::string, std::string>>;
  Poset p({"a", "b", "c"}, P{{"a", "b"}, {"b", "c"}});
  CHECK(p.leq(p.index("a"), p.index("c")));
  CHECK_FALSE(p.leq(p.index("c"), p.index("a")));
  CHECK_THROWS_AS(Poset({"a", "b"}, P{{"a", "b"}, {"b", "a"}}), InputError);
  CHECK_THROWS_AS(Poset({"a", "a"}, P{}), InputError);
}

namespace {
std::vector<CategoryPtr> small_categories() {
  std::vector<CategoryPtr> out;
  out.push_back(chain3());
  out.push_back(std::make_shared<const FiniteCategory>(idempotent()));
  for (const auto& ns : space_catalogue()) {
    auto site = zariski_site(ns.space);
    if (site.category().object_count() <= 5) out.push_back(site.site.category);
  }
  return out;
}
}  // namespace

TEST_CASE("pullback_sieve is functorial in the pulled-back morphism") {
  for (const auto& cp : small_categories()) {
    const auto& c = *cp;
    for (ObjId x = 0; x < c.object_count(); ++x)
      for (const auto& bits : all_sieves(c, x)) {
        const Sieve s{x, bits};
        REQUIRE(is_sieve(c, s));
        for (MorId h : c.morphisms_into(x))
          for (MorId k : c.morphisms_into(c.source(h)))
            CHECK(pullback_sieve(c, pullback_sieve(c, s, h), k) ==
                  pullback_sieve(c, s, *c.compose(h, k)));
      }
  }
}

TEST_CASE("sieve_generated is idempotent and generators regenerate") {
  for (const auto& cp : small_categories()) {
    const auto& c = *cp;
    for (ObjId x = 0; x < c.object_count(); ++x)
      for (const auto& bits : all_sieves(c, x)) {
        const Sieve s{x, bits};
        const auto members = sieve_members(s);
        CHECK(sieve_generated(c, x, members) == s);
        const auto gens = sieve_generators(c, s);
        CHECK(sieve_generated(c, x, gens) == s);
      }
  }
}

TEST_CASE("pullback of a generated sieve contains the generated pullback on posets") {
  for (const auto& cp : small_categories()) {
    const auto& c = *cp;
    if (!c.is_poset()) continue;
    for (ObjId x = 0; x < c.object_count(); ++x) {
      const auto into = c.morphisms_into(x);
      for (unsigned mask = 0; mask < (1U << into.size()); ++mask) {
        std::vector<MorId> fam;
        for (std::size_t i = 0; i < into.size(); ++i)
          if (mask >> i & 1U) fam.push_back(into[i]);
        const auto s = sieve_generated(c, x, fam);
        for (MorId h : into) {
          // members f of fam factoring through h: source(f) ≤ source(h)
          std::vector<MorId> pulled;
          for (MorId f : fam) {
            const auto lift = c.hom(c.source(f), c.source(h));
            if (!lift.empty()) pulled.push_back(lift.front());
          }
          const auto lhs = pullback_sieve(c, s, h);
          const auto rhs = sieve_generated(c, c.source(h), pulled);
          CHECK(rhs.members.subset_of(lhs.members));
        }
      }
    }
  }
}

TEST_CASE("all_sieves on the chain counts downsets") {
  auto c = chain3();
  // Sieves on 2 are down-closed subsets of {0,1,2}: ∅, {0}, {0,1}, {0,1,2}.
  CHECK(all_sieves(*c, c->object_id("2")).size() == 4);
  // On the idempotent monoid: ∅, {e}, {1, e}.
  const auto m = idempotent();
  CHECK(all_sieves(m, 0).size() == 3);
}
