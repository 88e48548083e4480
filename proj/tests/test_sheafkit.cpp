#include "doctest.h"

#include <map>
#include <set>

#include "sitelab/catalogue.hpp"
#include "sitelab/sheafkit.hpp"
#include "sitelab/stalks.hpp"

using namespace sitelab;

namespace {

PresheafPtr ptr(SetPresheaf f) { return std::make_shared<const SetPresheaf>(std::move(f)); }

bool bijective(const SheafMorphism& m) {
  for (std::size_t x = 0; x < m.components.size(); ++x) {
    std::set<int> img(m.components[x].begin(), m.components[x].end());
    if (img.size() != m.components[x].size() || static_cast<int>(img.size()) != m.target->size(static_cast<ObjId>(x)))
      return false;
  }
  return true;
}

/// Brute-force count of compatible families on a sieve: every assignment
/// of a section to every member, filtered by compatibility.
int count_matching(const SetPresheaf& f, const Sieve& s) {
  const auto& c = *f.category();
  const auto mem = sieve_members(s);
  std::vector<int> pick(mem.size(), 0);
  int count = 0;
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < mem.size() && ok; ++i) {
      if (f.size(c.source(mem[i])) == 0) return 0;
      for (MorId g : c.morphisms_into(c.source(mem[i]))) {
        const MorId fg = *c.compose(mem[i], g);
        const auto j = std::find(mem.begin(), mem.end(), fg) - mem.begin();
        if (pick[j] != f.restrict(g, pick[i])) ok = false;
      }
    }
    if (ok) ++count;
    std::size_t k = 0;
    while (k < mem.size() && ++pick[k] == f.size(c.source(mem[k]))) pick[k++] = 0;
    if (k == mem.size()) break;
  }
  return count;
}

std::vector<MorId> family_of(const SpaceSite& s, ObjId target, const std::vector<PointSet>& sets) {
  std::vector<MorId> fam;
  for (auto u : sets) fam.push_back(s.category().hom(s.object_of(u), target).front());
  return fam;
}

}  // namespace

TEST_CASE("presheaf validation") {
  const auto site = zariski_site(catalogue_space("sierpinski"));
  CHECK(validate_presheaf(constant_presheaf(site.site.category, {"a", "b"})).ok);
  CHECK(validate_presheaf(representable(site.site.category, site.whole())).ok);
  // Shape errors are rejected at construction.
  std::vector<std::vector<std::string>> el(3, {"a"});
  CHECK_THROWS_AS(SetPresheaf(site.site.category, el, {}), InputError);
  // A non-functorial presheaf: {η} swaps under its own identity.
  auto c = site.site.category;
  std::vector<std::vector<std::string>> two(3, {"0", "1"});
  std::vector<std::vector<int>> res(static_cast<std::size_t>(c->morphism_count()), {0, 1});
  res[c->identity(site.object_of(1))] = {1, 0};
  const auto r = validate_presheaf(SetPresheaf(c, two, res));
  CHECK_FALSE(r.ok);
  CHECK(r.axiom == "presheaf-identity");
}

TEST_CASE("matching_families examples") {
  const auto site = zariski_site(catalogue_space("sierpinski"));
  const auto& c = site.category();
  const auto f = constant_presheaf(site.site.category, {"0", "1"});
  const ObjId whole = site.whole();
  const auto max = matching_families(f, maximal_sieve(c, whole));
  CHECK(max.size() == f.size(whole));
  for (int i = 0; i < f.size(whole); ++i) CHECK(max.index.count(restrict_to_sieve(f, max, i)) == 1);
  CHECK(matching_families(f, empty_sieve(c, whole)).size() == 1);
  const PointSet eta = site.space.minimal_open(site.space.index("eta"));
  const auto s = sieve_generated(c, whole, family_of(site, whole, {eta}));
  CHECK(matching_families(f, s).size() == 2);
}

TEST_CASE("matching_families agrees with brute force on the catalogue") {
  for (const char* name : {"sierpinski", "vee", "discrete2", "wedge"}) {
    const auto site = zariski_site(catalogue_space(name));
    const auto& c = site.category();
    for (const auto& np : presheaf_catalogue(site, 7)) {
      for (ObjId x = 0; x < c.object_count(); ++x)
        for (const auto& bits : all_sieves(c, x)) {
          const Sieve s{x, bits};
          CHECK(matching_families(*np.presheaf, s).size() == count_matching(*np.presheaf, s));
        }
    }
  }
}

TEST_CASE("plus construction and sheafification examples") {
  const auto space = catalogue_space("vee");
  const auto site = zariski_site(space);
  const auto& t = site.topology();
  const ObjId whole = site.whole(), empty = site.object_of(0);

  SUBCASE("a sheaf is fixed by the plus construction") {
    const auto f = ptr(sections(constant_stalk_sheaf(space, {"0", "1"}), site));
    REQUIRE(is_sheaf(*f, t).ok);
    CHECK(bijective(plus_construction(f, t).unit));
  }
  SUBCASE("the empty open gets a single section") {
    const auto f = ptr(constant_presheaf(site.site.category, {"0", "1"}));
    CHECK(f->size(empty) == 2);
    const auto s = sheafify(f, t);
    CHECK(s.sheaf->size(empty) == 1);
  }
  SUBCASE("sections over the whole space are pairs agreeing on the overlap") {
    // {0,1} on every open except the whole space, which carries four
    // unrelated values.
    const auto& c = site.category();
    std::vector<std::vector<std::string>> el;
    for (ObjId x = 0; x < c.object_count(); ++x)
      el.push_back(x == whole ? std::vector<std::string>{"p", "q", "r", "s"} : std::vector<std::string>{"0", "1"});
    std::vector<std::vector<int>> res;
    for (MorId m = 0; m < c.morphism_count(); ++m) {
      if (c.target(m) == whole && c.source(m) == whole) res.push_back({0, 1, 2, 3});
      else if (c.target(m) == whole) res.push_back({0, 0, 1, 1});
      else res.push_back({0, 1});
    }
    const auto f = ptr(SetPresheaf(site.site.category, el, res));
    REQUIRE(validate_presheaf(*f).ok);
    CHECK_FALSE(is_sheaf(*f, t).ok);
    const auto s = sheafify(f, t);
    // Oracle: sections over U_x and U_y whose restrictions to {η} agree.
    const int x = space.index("x"), y = space.index("y"), e = space.index("eta");
    const ObjId ux = site.minimal_object(x), uy = site.minimal_object(y), ue = site.minimal_object(e);
    int pairs = 0;
    for (int a = 0; a < f->size(ux); ++a)
      for (int b = 0; b < f->size(uy); ++b)
        if (f->restrict(c.hom(ue, ux).front(), a) == f->restrict(c.hom(ue, uy).front(), b)) ++pairs;
    CHECK(s.sheaf->size(whole) == pairs);
    CHECK(pairs == 2);
    CHECK(is_sheaf(*s.sheaf, t).ok);
  }
}

TEST_CASE("is_sheaf examples") {
  const auto site = zariski_site(catalogue_space("vee"));
  const auto min = minimal_topology(site.site.category);
  for (const auto& np : presheaf_catalogue(site)) CHECK(is_sheaf(*np.presheaf, min).ok);
  for (const auto& np : presheaf_catalogue(site)) {
    CAPTURE(np.name);
    CHECK(is_sheaf(*sheafify(np.presheaf, site.topology()).sheaf, site.topology()).ok);
  }
  for (const auto& np : presheaf_catalogue(site)) {
    if (np.name == "missing-gluings") CHECK(is_sheaf(*np.presheaf, site.topology()).reason == "missing gluings");
    if (np.name == "extra-global-section") CHECK(is_sheaf(*np.presheaf, site.topology()).reason == "not separated");
  }
}

TEST_CASE("sheafification properties on the catalogue") {
  for (const char* name : {"sierpinski", "vee", "wedge", "chain3", "discrete2"}) {
    const auto site = zariski_site(catalogue_space(name));
    const auto& t = site.topology();
    const auto cat = presheaf_catalogue(site, 11);
    for (const auto& np : cat) {
      CAPTURE(name);
      CAPTURE(np.name);
      const auto s = sheafify(np.presheaf, t);
      CHECK(validate_presheaf(*s.sheaf).ok);
      CHECK(validate_morphism(s.unit).ok);
      CHECK(is_sheaf(*s.sheaf, t).ok);
      CHECK(bijective(s.unit) == is_sheaf(*np.presheaf, t).ok);
      const auto again = sheafify(s.sheaf, t);
      CHECK(bijective(again.unit));
    }
    // Binary products: a(F × G) -> aF × aG is a bijection.
    for (std::size_t i = 0; i < cat.size(); i += 3)
      for (std::size_t j = 1; j < cat.size(); j += 4) {
        CAPTURE(cat[i].name);
        CAPTURE(cat[j].name);
        const auto f = cat[i].presheaf, g = cat[j].presheaf;
        const auto fg = ptr(product(*f, *g));
        const auto sf = sheafify(f, t), sg = sheafify(g, t), sfg = sheafify(fg, t);
        const auto p1 = sheafify_morphism(projection(fg, f, 0), sfg, sf);
        const auto p2 = sheafify_morphism(projection(fg, g, 1), sfg, sg);
        for (ObjId x = 0; x < site.category().object_count(); ++x) {
          std::set<std::pair<int, int>> img;
          for (int k = 0; k < sfg.sheaf->size(x); ++k) img.emplace(p1.components[x][k], p2.components[x][k]);
          CHECK(static_cast<int>(img.size()) == sfg.sheaf->size(x));
          CHECK(static_cast<int>(img.size()) == sf.sheaf->size(x) * sg.sheaf->size(x));
        }
      }
  }
}

TEST_CASE("sheafification preserves equalizers") {
  std::mt19937_64 rng(5);
  for (const char* name : {"sierpinski", "vee", "wedge"}) {
    const auto site = zariski_site(catalogue_space(name));
    const auto& t = site.topology();
    for (const auto& np : presheaf_catalogue(site, 3)) {
      const auto f = np.presheaf;
      const auto g = ptr(constant_presheaf(site.site.category, {"0", "1"}));
      // Two natural maps F -> constant{0,1}: the constant 0 and a second
      // map that is 1 exactly on the first section of each open.
      const auto& c = site.category();
      SheafMorphism zero{f, g, {}}, other{f, g, {}};
      for (ObjId x = 0; x < c.object_count(); ++x) {
        zero.components.emplace_back(static_cast<std::size_t>(f->size(x)), 0);
        other.components.emplace_back(static_cast<std::size_t>(f->size(x)), 0);
      }
      // Natural maps into a constant presheaf factor through connected
      // components of the category; use a global choice: every section
      // goes to 1 iff it restricts to the empty open's section 0 and the
      // presheaf over ∅ has at least two elements.
      const ObjId e = site.object_of(0);
      if (f->size(e) >= 2)
        for (ObjId x = 0; x < c.object_count(); ++x) {
          const MorId to_e = c.hom(e, x).front();
          for (int k = 0; k < f->size(x); ++k) other.components[x][k] = f->restrict(to_e, k) == 0 ? 1 : 0;
        }
      REQUIRE(validate_morphism(zero).ok);
      REQUIRE(validate_morphism(other).ok);
      const auto eq = equalizer(zero, other);
      const auto sf = sheafify(f, t), sg = sheafify(g, t), se = sheafify(eq.object, t);
      const auto az = sheafify_morphism(zero, sf, sg), ao = sheafify_morphism(other, sf, sg);
      const auto ai = sheafify_morphism(eq.inclusion, se, sf);
      for (ObjId x = 0; x < c.object_count(); ++x) {
        std::set<int> expect;
        for (int k = 0; k < sf.sheaf->size(x); ++k)
          if (az.components[x][k] == ao.components[x][k]) expect.insert(k);
        std::set<int> got(ai.components[x].begin(), ai.components[x].end());
        CHECK(got == expect);
        CHECK(got.size() == ai.components[x].size());
      }
    }
  }
}

TEST_CASE("epi, mono and iso examples") {
  const auto space = catalogue_space("vee");
  const auto site = zariski_site(space);
  const auto& t = site.topology();
  const auto f = ptr(sections(constant_stalk_sheaf(space, {"0", "1"}), site));
  CHECK(is_iso(identity_morphism(f), t).holds);

  // Subsheaf inclusion: the skyscraper {u} inside the skyscraper {u, v}.
  const int x = space.index("x");
  const auto small = skyscraper(space, x, {"u"});
  const auto big = skyscraper(space, x, {"u", "v"});
  StalkMap phi;
  for (int p = 0; p < space.size(); ++p) phi.push_back(std::vector<int>(static_cast<std::size_t>(small.stalk_size(p)), 0));
  REQUIRE(is_stalk_morphism(small, big, phi));
  const auto fs = ptr(sections(small, site)), gs = ptr(sections(big, site));
  const auto inc = sections_morphism(small, big, phi, site, fs, gs);
  CHECK(is_mono(inc, t).holds);
  CHECK_FALSE(is_epi(inc, t).holds);
  CHECK_FALSE(is_iso(inc, t).holds);

  // Two branches over η that only meet at the stalks: no global section,
  // yet the map to the terminal sheaf is locally surjective.
  StalkSheaf split{space, {}, std::vector<std::vector<std::vector<int>>>(3, std::vector<std::vector<int>>(3))};
  const int e = space.index("eta"), y = space.index("y");
  split.stalks.resize(3);
  split.stalks[e] = {"s", "t"};
  split.stalks[x] = {"s"};
  split.stalks[y] = {"t"};
  split.maps[x][e] = {0};
  split.maps[y][e] = {1};
  REQUIRE(validate_stalk_sheaf(split).ok);
  const auto ss = ptr(sections(split, site));
  CHECK(ss->size(site.whole()) == 0);
  const auto one = ptr(terminal_presheaf(site.site.category));
  SheafMorphism to_one{ss, one, {}};
  for (ObjId o = 0; o < site.category().object_count(); ++o)
    to_one.components.emplace_back(static_cast<std::size_t>(ss->size(o)), 0);
  CHECK(is_epi(to_one, t).holds);
  CHECK_FALSE(is_mono(to_one, t).holds);

  // Non-sheaf inputs are rejected.
  const auto cst = ptr(constant_presheaf(site.site.category, {"0", "1"}));
  CHECK_THROWS_AS(is_mono(identity_morphism(cst), t), InputError);
}

TEST_CASE("continuity examples") {
  const auto space = catalogue_space("vee");
  const auto site = zariski_site(space);
  const auto id = identity_functor(site.site.category);
  CHECK(is_continuous(id, site.topology(), site.topology()).continuous);

  const PointSet z = space.closure(space.index("x"));
  const auto sub = zariski_site(space.subspace(z));
  const auto u = subspace_functor(site, sub, z);
  REQUIRE(validate_functor(u).ok);
  const auto rep = is_continuous(u, site.topology(), sub.topology());
  CHECK(rep.continuous);
  CHECK(rep.pullbacks_preserved);

  // ∅ ⊂ {η} ⊂ X with {η} declared a cover of X, mapped identically into
  // the Sierpiński Zariski site where it is not.
  const auto sier = zariski_site(catalogue_space("sierpinski"));
  const auto& c = sier.site.category;
  const ObjId whole = sier.whole(), eta = sier.object_of(1);
  Pretopology p{{{whole, c->hom(eta, whole)}, {sier.object_of(0), {}}}};
  const auto coarse = generate_topology(c, p);
  const auto bad = is_continuous(identity_functor(c), coarse, sier.topology());
  CHECK_FALSE(bad.continuous);
  CHECK_FALSE(bad.witness.empty());
}

TEST_CASE("almost cocontinuity examples") {
  for (const auto& ns : space_catalogue()) {
    if (ns.space.size() > 4) continue;
    const auto site = zariski_site(ns.space);
    CHECK(is_almost_cocontinuous(identity_functor(site.site.category), site.topology(), site.topology()).holds);
  }
  const auto space = catalogue_space("vee");
  const auto site = zariski_site(space);
  const PointSet z = space.closure(space.index("x"));
  const auto sub = zariski_site(space.subspace(z));
  const auto u = subspace_functor(site, sub, z);
  const auto rep = is_almost_cocontinuous(u, site.topology(), sub.topology());
  CHECK(rep.holds);
  std::set<ObjId> expect;
  for (ObjId o = 0; o < site.category().object_count(); ++o)
    if (site.object_points[o] != 0 && (site.object_points[o] & z) == 0) expect.insert(o);
  CHECK(std::set<ObjId>(rep.empty_clause_objects.begin(), rep.empty_clause_objects.end()) == expect);
  CHECK_FALSE(expect.empty());

  // U -> U ∩ W for the open W = {a, b} of the wedge a, b ⤳ z.
  const auto wedge = catalogue_space("wedge");
  const auto ws = zariski_site(wedge);
  const PointSet w = wedge.all() & ~(PointSet{1} << wedge.index("z"));
  const auto wsub = zariski_site(wedge.subspace(w));
  const auto j = subspace_functor(ws, wsub, w);
  CHECK(is_continuous(j, ws.topology(), wsub.topology()).continuous);
  const auto fail = is_almost_cocontinuous(j, ws.topology(), wsub.topology());
  CHECK_FALSE(fail.holds);
  CHECK(fail.witness.find("{a,b}") != std::string::npos);
}

TEST_CASE("direct image and stalks") {
  const auto space = catalogue_space("vee");
  const auto site = zariski_site(space);
  const auto id = identity_functor(site.site.category);
  const auto f = sections(constant_stalk_sheaf(space, {"0", "1"}), site);
  const auto same = direct_image(id, f, site.topology(), site.topology());
  for (ObjId o = 0; o < site.category().object_count(); ++o) CHECK(same.labels(o) == f.labels(o));

  // Constant sheaf on Z = {x} pushed forward is the skyscraper at x.
  const int x = space.index("x");
  const PointSet z = space.closure(x);
  const auto sub = zariski_site(space.subspace(z));
  const auto u = subspace_functor(site, sub, z);
  const auto on_z = sections(constant_stalk_sheaf(sub.space, {"0", "1", "2"}), sub);
  const auto pushed = direct_image(u, on_z, site.topology(), sub.topology());
  const auto sky = sections(skyscraper(space, x, {"0", "1", "2"}), site);
  for (ObjId o = 0; o < site.category().object_count(); ++o) CHECK(pushed.size(o) == sky.size(o));
  for (int p = 0; p < space.size(); ++p) CHECK(stalk(pushed, site, p).size() == (p == x ? 3U : 1U));
  CHECK(stalk(f, site, space.index("eta")).size() == 2);

  // Sierpiński with F(X) = Z/2, F({η}) = Z/4, restriction 1 -> 2.
  const auto sier = zariski_site(catalogue_space("sierpinski"));
  const auto& c = sier.category();
  const ObjId whole = sier.whole(), eta = sier.object_of(1), empty = sier.object_of(0);
  std::vector<std::vector<int>> orders(3);
  orders[whole] = {2};
  orders[eta] = {4};
  std::vector<IntMatrix> res;
  for (MorId m = 0; m < c.morphism_count(); ++m) {
    const ObjId s = c.source(m), t = c.target(m);
    IntMatrix mat(orders[s].size(), std::vector<long long>(orders[t].size(), 0));
    if (s == t && !orders[s].empty()) mat[0][0] = 1;
    if (s == eta && t == whole) mat[0][0] = 2;
    res.push_back(mat);
  }
  (void)empty;
  const AbPresheaf ab(sier.site.category, orders, res);
  REQUIRE(validate_ab_presheaf(ab).ok);
  const auto set = ab.to_set();
  CHECK(is_sheaf(set, sier.topology()).ok);
  CHECK(stalk(set, sier, sier.space.index("eta")).size() == 4);
  CHECK(stalk(set, sier, sier.space.index("x")).size() == 2);
}

TEST_CASE("abelian presheaf validation") {
  const auto sier = zariski_site(catalogue_space("sierpinski"));
  const auto& c = sier.category();
  std::vector<std::vector<int>> orders(3, std::vector<int>{2});
  orders[sier.object_of(0)] = {};
  std::vector<IntMatrix> res;
  for (MorId m = 0; m < c.morphism_count(); ++m)
    res.push_back(IntMatrix(orders[c.source(m)].size(), std::vector<long long>(orders[c.target(m)].size(), 1)));
  CHECK(validate_ab_presheaf(AbPresheaf(sier.site.category, orders, res)).ok);
  // Z/2 -> Z/4 by 1 -> 1 is not a homomorphism.
  orders[sier.object_of(1)] = {4};
  CHECK(validate_ab_presheaf(AbPresheaf(sier.site.category, orders, res)).axiom == "homomorphism");
}

TEST_CASE("exactness along the identity") {
  const auto space = catalogue_space("vee");
  const auto site = zariski_site(space);
  const auto id = identity_functor(site.site.category);
  const auto g = linear_constant(space, 2, 1);
  const auto k = generated_subsheaf(g, {{space.index("x"), {1}}});
  const auto q = quotient(g, k);
  const auto gs = linear_sections(g, site), qs = linear_sections(q.sheaf, site);
  const auto m = linear_sections_morphism(g, q.sheaf, q.projection, site, gs, qs);
  const auto rep = check_exactness_along(id, {m}, site.topology(), site.topology());
  CHECK(rep.all_preserved);
}
