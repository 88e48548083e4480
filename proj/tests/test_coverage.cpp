#include "doctest.h"

#include <set>

#include "sitelab/catalogue.hpp"
#include "sitelab/coverage.hpp"

using namespace sitelab;

namespace {

/// Least topology containing the generated sieves, by naive iteration over
/// every sieve: local character is tested against every covering sieve.
std::vector<std::set<Bits>> oracle_saturate(const FiniteCategory& c, const Pretopology& p) {
  const int n = c.object_count();
  std::vector<std::vector<Bits>> sieves;
  for (ObjId x = 0; x < n; ++x) sieves.push_back(all_sieves(c, x));
  std::vector<std::set<Bits>> j(static_cast<std::size_t>(n));
  for (ObjId x = 0; x < n; ++x) j[x].insert(maximal_sieve(c, x).members);
  for (const auto& fam : p.families) j[fam.target].insert(sieve_generated(c, fam.target, fam.members).members);
  bool changed = true;
  while (changed) {
    changed = false;
    for (ObjId x = 0; x < n; ++x)
      for (const auto& s : std::vector<Bits>(j[x].begin(), j[x].end()))
        for (MorId h : c.morphisms_into(x)) {
          const auto pb = pullback_sieve(c, Sieve{x, s}, h);
          changed |= j[pb.target].insert(pb.members).second;
        }
    for (ObjId x = 0; x < n; ++x)
      for (const auto& s : sieves[x]) {
        if (j[x].count(s)) continue;
        for (const auto& r : std::vector<Bits>(j[x].begin(), j[x].end())) {
          bool all = true;
          r.for_each([&](std::size_t f) {
            const auto pb = pullback_sieve(c, Sieve{x, s}, static_cast<MorId>(f));
            all = all && j[pb.target].count(pb.members);
          });
          if (all) {
            j[x].insert(s);
            changed = true;
            break;
          }
        }
      }
  }
  return j;
}

bool same(const Topology& t, const std::vector<std::set<Bits>>& o) {
  for (ObjId x = 0; x < t.category()->object_count(); ++x)
    if (t.covering(x) != o[x]) return false;
  return true;
}

using Pairs = std::vector<std::pair<std::string, std::string>>;

/// All families of opens given as point sets with a common target open.
std::vector<MorId> family_of(const SpaceSite& s, ObjId target, const std::vector<PointSet>& sets) {
  std::vector<MorId> fam;
  for (auto u : sets) fam.push_back(s.category().hom(s.object_of(u), target).front());
  return fam;
}

}  // namespace

TEST_CASE("generate_topology: empty pretopology gives the minimal topology") {
  const auto site = zariski_site(catalogue_space("vee"));
  const auto& cp = site.site.category;
  const auto t = generate_topology(cp, Pretopology{});
  CHECK(t == minimal_topology(cp));
  for (ObjId x = 0; x < cp->object_count(); ++x) {
    REQUIRE(t.covering(x).size() == 1);
    CHECK(*t.covering(x).begin() == maximal_sieve(*cp, x).members);
  }
}

TEST_CASE("generate_topology: the empty family makes every sieve on its target covering") {
  const auto site = zariski_site(catalogue_space("vee"));
  const auto& cp = site.site.category;
  const ObjId e = site.object_of(0);
  const auto t = generate_topology(cp, Pretopology{{{e, {}}}});
  CHECK(t.covering(e).size() == all_sieves(*cp, e).size());
  // The empty open is only the source of the empty open's identity here.
  CHECK(t.covers(empty_sieve(*cp, e)));
}

TEST_CASE("generate_topology: Sierpiński Zariski sieves match the brute-force oracle") {
  const auto site = zariski_site(catalogue_space("sierpinski"));
  const auto o = oracle_saturate(site.category(), site.site.generators);
  CHECK(same(site.topology(), o));
  // Opens ∅ ⊂ {eta} ⊂ whole: the whole space is covered only by sieves containing its identity.
  const ObjId whole = site.whole();
  CHECK(site.topology().covering(whole).size() == 1);
  const ObjId empty = site.object_of(0);
  CHECK(site.topology().covers(empty_sieve(site.category(), empty)));
}

TEST_CASE("generated topologies satisfy the axioms and match the oracle on the catalogue") {
  for (const auto& ns : space_catalogue()) {
    if (ns.space.size() > 4) continue;
    CAPTURE(ns.name);
    for (const auto& site : {zariski_site(ns.space), closed_cover_site(ns.space)}) {
      const auto rep = check_topology_axioms(site.topology());
      CHECK_MESSAGE(rep.ok, rep.axiom << " " << rep.object << " " << rep.sieve);
      CHECK(same(site.topology(), oracle_saturate(site.category(), site.site.generators)));
    }
  }
}

TEST_CASE("generate_topology is monotone") {
  const auto site = zariski_site(catalogue_space("diamond"));
  const auto& gens = site.site.generators.families;
  Pretopology half;
  for (std::size_t i = 0; i < gens.size(); i += 2) half.families.push_back(gens[i]);
  const auto small = generate_topology(site.site.category, half);
  for (ObjId x = 0; x < site.category().object_count(); ++x)
    for (const auto& s : small.covering(x)) CHECK(site.topology().covering(x).count(s) == 1);
}

TEST_CASE("join_topologies: unit, idempotence and the Zariski/closed join") {
  const auto space = catalogue_space("vee");
  const auto open = subset_site(space, SubsetCover::Open);
  const auto closed = subset_site(space, SubsetCover::Closed);
  const auto& t = open.topology();
  CHECK(join_topologies(t, minimal_topology(open.site.category)) == t);
  CHECK(join_topologies(t, t) == t);

  Pretopology both = open.site.generators;
  for (const auto& f : closed.site.generators.families) both.families.push_back(f);
  const auto joined = join_topologies(open.topology(), closed.topology());
  CHECK(same(joined, oracle_saturate(open.category(), both)));
}

TEST_CASE("join_topologies: a cover that needs both open and closed pieces") {
  // a ⤳ x, a ⤳ y, b ⤳ x. The closed pieces cl(a) = {a,x,y}, cl(b) = {b,x}
  // cover the space; cl(a) is a vee, covered by the open traces {a,x}, {a,y}.
  const FiniteSpace space({"a", "b", "x", "y"}, Pairs{{"a", "x"}, {"a", "y"}, {"b", "x"}});
  const auto open = subset_site(space, SubsetCover::Open);
  const auto closed = subset_site(space, SubsetCover::Closed);
  const auto joined = join_topologies(open.topology(), closed.topology());
  auto pts = [&](std::initializer_list<const char*> names) {
    PointSet s = 0;
    for (auto n : names) s |= PointSet{1} << space.index(n);
    return s;
  };
  const ObjId whole = open.whole();
  const auto fam = family_of(open, whole, {pts({"a", "x"}), pts({"b", "x"}), pts({"a", "y"})});
  CHECK_FALSE(is_covering(open.topology(), whole, fam));
  CHECK_FALSE(is_covering(closed.topology(), whole, fam));
  CHECK(is_covering(joined, whole, fam));
}

TEST_CASE("join_topologies rejects different categories") {
  const auto a = zariski_site(catalogue_space("vee"));
  const auto b = zariski_site(catalogue_space("chain3"));
  CHECK_THROWS_AS(join_topologies(a.topology(), b.topology()), InputError);
}

TEST_CASE("is_covering examples") {
  const auto space = catalogue_space("vee");
  const auto site = zariski_site(space);
  const auto& c = site.category();
  const ObjId whole = site.whole();
  CHECK(is_covering(site.topology(), whole, std::vector<MorId>{c.identity(whole)}));
  CHECK_FALSE(is_covering(minimal_topology(site.site.category), whole, std::vector<MorId>{}));
  const int x = space.index("x"), y = space.index("y");
  CHECK(is_covering(site.topology(), whole, family_of(site, whole, {space.minimal_open(x), space.minimal_open(y)})));
  CHECK_FALSE(is_covering(site.topology(), whole, family_of(site, whole, {space.minimal_open(x)})));
}

TEST_CASE("refines examples") {
  const auto space = catalogue_space("vee");
  const auto site = zariski_site(space);
  const auto& c = site.category();
  const ObjId whole = site.whole();
  const PointSet ux = space.minimal_open(space.index("x")), uy = space.minimal_open(space.index("y"));
  const auto ab = family_of(site, whole, {ux, uy});
  CHECK(refines(c, ab, ab));
  CHECK_FALSE(refines(c, std::vector<MorId>{c.identity(whole)}, family_of(site, whole, {ux})));
  CHECK(refines(c, family_of(site, whole, {ux & uy}), ab));
}

TEST_CASE("zariski_site examples") {
  {
    const auto site = zariski_site(catalogue_space("point"));
    CHECK(site.category().object_count() == 2);
    CHECK(is_covering(site.topology(), site.whole(), std::vector<MorId>{site.category().identity(site.whole())}));
  }
  {
    const auto space = catalogue_space("sierpinski");
    const auto site = zariski_site(space);
    CHECK(site.category().object_count() == 3);
    const PointSet eta = space.minimal_open(space.index("eta"));
    CHECK_FALSE(is_covering(site.topology(), site.whole(), family_of(site, site.whole(), {eta})));
  }
}

TEST_CASE("closed_cover_site examples") {
  {
    // Irreducible: a family covers the whole space iff it contains it.
    const auto space = catalogue_space("vee");
    const auto site = closed_cover_site(space);
    const ObjId whole = site.whole();
    const auto into = site.category().morphisms_into(whole);
    for (unsigned mask = 0; mask < (1U << into.size()); ++mask) {
      std::vector<MorId> fam;
      bool has_whole = false;
      for (std::size_t i = 0; i < into.size(); ++i)
        if (mask >> i & 1U) {
          fam.push_back(into[i]);
          has_whole |= site.category().source(into[i]) == whole;
        }
      CHECK(is_covering(site.topology(), whole, fam) == has_whole);
    }
  }
  {
    const auto space = catalogue_space("discrete2");
    const auto site = closed_cover_site(space);
    CHECK(is_covering(site.topology(), site.whole(), family_of(site, site.whole(), {1, 2})));
    CHECK(is_covering(site.topology(), site.object_of(0), std::vector<MorId>{}));
  }
}

TEST_CASE("Zariski covering is joint surjectivity on all spaces with at most 4 points") {
  for (const auto& space : all_small_spaces(4)) {
    const auto site = zariski_site(space);
    const auto& c = site.category();
    REQUIRE(check_topology_axioms(site.topology()).ok);
    for (ObjId x = 0; x < c.object_count(); ++x) {
      const auto into = c.morphisms_into(x);
      if (into.size() > 12) continue;
      for (unsigned mask = 0; mask < (1U << into.size()); ++mask) {
        std::vector<MorId> fam;
        PointSet uni = 0;
        for (std::size_t i = 0; i < into.size(); ++i)
          if (mask >> i & 1U) {
            fam.push_back(into[i]);
            uni |= site.object_points[c.source(into[i])];
          }
        CHECK(is_covering(site.topology(), x, fam) == (uni == site.object_points[x]));
      }
    }
  }
}

TEST_CASE("a covering family refined by another covering family") {
  // if b covers and refines(b, a) then a covers
  for (const auto& ns : space_catalogue()) {
    if (ns.space.size() > 3) continue;
    for (const auto& site : {zariski_site(ns.space), closed_cover_site(ns.space)}) {
      const auto& c = site.category();
      for (ObjId x = 0; x < c.object_count(); ++x) {
        const auto into = c.morphisms_into(x);
        std::vector<std::vector<MorId>> fams;
        for (unsigned mask = 0; mask < (1U << into.size()); ++mask) {
          std::vector<MorId> fam;
          for (std::size_t i = 0; i < into.size(); ++i)
            if (mask >> i & 1U) fam.push_back(into[i]);
          fams.push_back(std::move(fam));
        }
        for (const auto& a : fams)
          for (const auto& b : fams)
            if (is_covering(site.topology(), x, b) && refines(c, b, a))
              CHECK(is_covering(site.topology(), x, a));
      }
    }
  }
}

TEST_CASE("finite spaces: opens, closures, subspaces") {
  const auto s = catalogue_space("vee");
  CHECK(s.opens().size() == 5);  // ∅, {η}, {η,x}, {η,y}, all
  CHECK(s.closed_sets().size() == 5);
  CHECK(s.is_irreducible());
  CHECK_FALSE(catalogue_space("discrete2").is_irreducible());
  const auto op = s.opposite();
  CHECK(op.opens().size() == s.closed_sets().size());
  const auto sub = s.subspace(s.closure(s.index("x")));
  CHECK(sub.size() == 1);
  CHECK(s.set_name(s.minimal_open(s.index("x"))) == "{eta,x}");
  CHECK_THROWS_AS(FiniteSpace({"a", "b"}, Pairs{{"a", "b"}, {"b", "a"}}), InputError);
}

TEST_CASE("posets up to isomorphism") {
  const std::size_t expected[] = {1, 1, 2, 5, 16, 63};
  for (int n = 1; n <= 5; ++n) CHECK(spaces_up_to_iso(n).size() == expected[n]);
  CHECK(all_small_spaces(5).size() == 87);
}
