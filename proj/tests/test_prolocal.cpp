#include "doctest.h"

#include <random>
#include <set>

#include "sitelab/catalogue.hpp"
#include "sitelab/prolocal.hpp"
#include "sitelab/stalks.hpp"

using namespace sitelab;

namespace {

PresheafPtr ptr(SetPresheaf f) { return std::make_shared<const SetPresheaf>(std::move(f)); }

/// An open U is the minimal open of some point when it has a point that
/// every other point of U generizes.
bool is_minimal_open(const FiniteSpace& s, PointSet u) {
  for (int x = 0; x < s.size(); ++x)
    if (s.minimal_open(x) == u) return true;
  return false;
}

std::vector<PresheafPtr> sheaf_samples(const SpaceSite& site) {
  std::vector<PresheafPtr> out;
  for (const auto& np : presheaf_catalogue(site, 5)) out.push_back(np.presheaf);
  return out;
}

std::vector<const FibreFunctorWitness*> pointers(const std::vector<FibreFunctorWitness>& v) {
  std::vector<const FibreFunctorWitness*> out;
  for (const auto& w : v) out.push_back(&w);
  return out;
}

std::vector<std::string> point_names(const FiniteSpace& s) {
  std::vector<std::string> out;
  for (int x = 0; x < s.size(); ++x) out.push_back(s.name(x));
  return out;
}

}  // namespace

TEST_CASE("colimit of a constant pro-object is the hom set") {
  const auto site = zariski_site(catalogue_space("vee"));
  const auto& c = site.category();
  for (ObjId u = 0; u < c.object_count(); ++u) {
    const auto p = ProObject::constant(site.site.category, u);
    CHECK(validate_pro_object(p).ok);
    for (ObjId x = 0; x < c.object_count(); ++x)
      CHECK(hom_pro(p, x).size() == static_cast<int>(c.hom(u, x).size()));
  }
}

TEST_CASE("a two-step tower has the colimit of its deepest stage") {
  const auto space = catalogue_space("diamond");
  const auto site = zariski_site(space);
  const auto& cp = site.site.category;
  const ObjId deep = site.minimal_object(space.index("x"));
  const ObjId shallow = site.whole();
  ProObject p;
  p.category = cp;
  p.index = Poset({"l", "m"}, std::vector<std::pair<int, int>>{{0, 1}});
  p.diagram = {deep, shallow};
  p.transitions[{0, 1}] = cp->hom(deep, shallow).front();
  REQUIRE(validate_pro_object(p).ok);
  for (ObjId x = 0; x < cp->object_count(); ++x)
    CHECK(hom_pro(p, x).size() == static_cast<int>(cp->hom(deep, x).size()));
  CHECK(is_tau_local(p, site.site.generators).local);

  auto bad = p;
  bad.transitions.clear();
  CHECK(validate_pro_object(bad).axiom == "transition-missing");
}

TEST_CASE("locality of constant pro-objects: oracle, generators and saturation agree") {
  for (const auto& space : all_small_spaces(4)) {
    const auto site = zariski_site(space);
    for (ObjId u = 0; u < site.category().object_count(); ++u) {
      const auto p = ProObject::constant(site.site.category, u);
      const bool expected = is_minimal_open(space, site.object_points[u]);
      CHECK(is_tau_local(p, site.site.generators).local == expected);
      CHECK(is_tau_local_saturated(p, site.topology()).local == expected);
    }
  }
}

TEST_CASE("stalk points are fibre functors") {
  for (const auto& ns : space_catalogue()) {
    if (ns.space.size() > 4) continue;
    const auto site = zariski_site(ns.space);
    const auto reps = sheafified_representables(site.site);
    const auto points = stalk_points(site);
    const auto samples = sheaf_samples(site);
    std::vector<std::pair<SheafMorphism, SheafMorphism>> pairs;
    const auto lc = sheafify(samples[5], site.topology()).sheaf;
    const auto swap_values = SheafMorphism{lc, lc, [&] {
                                             std::vector<std::vector<int>> comp;
                                             for (ObjId o = 0; o < site.category().object_count(); ++o) {
                                               std::vector<int> v;
                                               for (const auto& l : lc->labels(o)) {
                                                 std::string t = l;
                                                 for (char& ch : t)
                                                   if (ch == '0' || ch == '1') ch = ch == '0' ? '1' : '0';
                                                 v.push_back(*lc->find(o, t));
                                               }
                                               comp.push_back(v);
                                             }
                                             return comp;
                                           }()};
    REQUIRE(validate_morphism(swap_values).ok);
    pairs.push_back({identity_morphism(lc), swap_values});
    for (int x = 0; x < ns.space.size(); ++x) {
      // Oracle: φ_x(a h_U) is a point when x ∈ U and empty otherwise.
      for (ObjId u = 0; u < site.category().object_count(); ++u)
        CHECK(points[x].evaluate(reps.sheaves[u])->size() == static_cast<int>(site.object_points[u] >> x & 1U));
      const auto r = check_fibre_axioms(points[x], site.site, reps, {samples[0], samples[5], samples[6]}, pairs);
      CHECK_MESSAGE(r.ok(), ns.name << " at " << ns.space.name(x) << ": " << r.witness);
    }
  }
}

TEST_CASE("non-local pro-objects are rejected with a witness") {
  const auto space = catalogue_space("vee");
  const auto site = zariski_site(space);
  const auto& cp = site.site.category;
  const auto reps = sheafified_representables(site.site);
  const auto samples = sheaf_samples(site);

  const auto whole = ProObject::constant(cp, site.whole());
  try {
    FibreFunctorWitness w(whole, site.site.generators);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("does not lift") != std::string::npos);
  }
  const auto global = FibreFunctorWitness::unchecked(whole);
  const auto r = check_fibre_axioms(global, site.site, reps, {samples[0]}, {});
  CHECK(r.terminal);
  CHECK_FALSE(r.covers);

  ProObject split;
  split.category = cp;
  split.index = Poset({"x", "y"}, std::vector<std::pair<int, int>>{});
  split.diagram = {site.minimal_object(space.index("x")), site.minimal_object(space.index("y"))};
  CHECK(validate_pro_object(split).axiom == "codirected");
  CHECK_THROWS_AS(FibreFunctorWitness(split, site.site.generators), InputError);
  const auto two = FibreFunctorWitness::unchecked(split);
  const auto r2 = check_fibre_axioms(two, site.site, reps, {samples[0]}, {});
  CHECK_FALSE(r2.terminal);
  CHECK_FALSE(r2.ok());
}

TEST_CASE("the neighbourhood category of a stalk point recovers it") {
  for (const auto& ns : space_catalogue()) {
    if (ns.space.size() > 4) continue;
    const auto site = zariski_site(ns.space);
    const auto reps = sheafified_representables(site.site);
    const auto points = stalk_points(site);
    std::vector<PresheafPtr> sheaves;
    for (const auto& f : sheaf_samples(site)) sheaves.push_back(sheafify(f, site.topology()).sheaf);
    for (int x = 0; x < ns.space.size(); ++x) {
      const auto n = neighbourhood_category(points[x], site.category(), reps);
      CHECK(n.cofiltered);
      // Objects are exactly the opens containing x.
      CHECK(n.objects.size() == static_cast<std::size_t>(std::count_if(
                                    site.object_points.begin(), site.object_points.end(),
                                    [&](PointSet u) { return (u >> x & 1U) != 0; })));
      const auto p = neighbourhood_pro_object(n, site.site.category);
      REQUIRE(validate_pro_object(p).ok);
      const FibreFunctorWitness w(p, site.site.generators);
      const auto agree = fibre_functors_agree(points[x], w, sheaves, reps.morphisms);
      CHECK_MESSAGE(agree.agree, agree.witness);
    }
  }
}

TEST_CASE("stalk points detect isomorphisms") {
  std::mt19937_64 rng(11);
  for (const auto& ns : space_catalogue()) {
    if (ns.space.size() > 4) continue;
    const auto site = zariski_site(ns.space);
    const auto points = stalk_points(site);
    std::vector<SheafMorphism> ms;
    std::vector<bool> stalk_bijective;
    for (int trial = 0; trial < 12; ++trial) {
      const auto f = random_stalk_sheaf(ns.space, 2, rng);
      const auto g = trial % 3 == 0 ? f : random_stalk_sheaf(ns.space, 2, rng);
      const auto phi = random_stalk_morphism(f, g, rng);
      if (!phi) continue;
      ms.push_back(sections_morphism(f, g, *phi, site, ptr(sections(f, site)), ptr(sections(g, site))));
      bool bij = true;
      for (int x = 0; x < ns.space.size(); ++x)
        bij = bij && std::set<int>((*phi)[x].begin(), (*phi)[x].end()).size() == g.stalks[x].size() &&
              f.stalks[x].size() == g.stalks[x].size();
      stalk_bijective.push_back(bij);
    }
    const auto r = conservativity_check(point_names(ns.space), pointers(points), ms, site.topology());
    CHECK(r.conservative);
    for (std::size_t k = 0; k < ms.size(); ++k) {
      CHECK(r.entries[k].iso == stalk_bijective[k]);
      CHECK(r.entries[k].all_points_bijective == stalk_bijective[k]);
    }
  }
}

TEST_CASE("a proper subset of the points is not conservative") {
  const auto space = catalogue_space("sierpinski");
  const auto site = zariski_site(space);
  const auto points = stalk_points(site);
  const auto sky = ptr(sections(skyscraper(space, space.index("x"), {"u", "v"}), site));
  const auto one = ptr(terminal_presheaf(site.site.category));
  SheafMorphism m{sky, one, {}};
  for (ObjId o = 0; o < site.category().object_count(); ++o)
    m.components.emplace_back(static_cast<std::size_t>(sky->size(o)), 0);
  REQUIRE(validate_morphism(m).ok);
  const auto generic_only = conservativity_check({"eta"}, {&points[space.index("eta")]}, {m}, site.topology());
  CHECK_FALSE(generic_only.conservative);
  const auto all = conservativity_check(point_names(space), pointers(points), {m}, site.topology());
  CHECK(all.conservative);
  CHECK(all.entries[0].failing_point == "x");
}

TEST_CASE("stalk points detect covering families") {
  for (const auto& space : all_small_spaces(3)) {
    const auto site = zariski_site(space);
    const auto& c = site.category();
    const auto reps = sheafified_representables(site.site);
    const auto points = stalk_points(site);
    const auto names = point_names(space);
    for (ObjId x = 0; x < c.object_count(); ++x) {
      std::vector<ObjId> below;
      for (ObjId u = 0; u < c.object_count(); ++u)
        if (!c.hom(u, x).empty()) below.push_back(u);
      for (unsigned mask = 0; mask < (1U << below.size()); ++mask) {
        std::vector<MorId> fam;
        PointSet uni = 0;
        for (std::size_t i = 0; i < below.size(); ++i)
          if (mask >> i & 1U) {
            fam.push_back(c.hom(below[i], x).front());
            uni |= site.object_points[below[i]];
          }
        const auto d = cover_detection(names, pointers(points), reps, c, x, fam);
        CHECK(d.jointly_surjective == is_covering(site.topology(), x, fam));
        CHECK(d.jointly_surjective == (uni == site.object_points[x]));
      }
    }
  }
}
