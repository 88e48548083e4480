#include "doctest.h"

#include <random>
#include <set>

#include "sitelab/catalogue.hpp"
#include "sitelab/modp.hpp"
#include "sitelab/stalks.hpp"

using namespace sitelab;

namespace {

PresheafPtr ptr(SetPresheaf f) { return std::make_shared<const SetPresheaf>(std::move(f)); }

/// Count of F_p-linear sections over an open by brute force over all tuples
/// of stalk vectors.
long long brute_linear_sections(const LinearStalkSheaf& f, PointSet u) {
  std::vector<int> pts;
  int total = 0;
  for (int x = 0; x < f.space.size(); ++x)
    if (u >> x & 1U) {
      pts.push_back(x);
      total += f.dims[x];
    }
  long long count = 0;
  std::vector<int> v(static_cast<std::size_t>(total), 0);
  while (true) {
    std::vector<modp::Vec> blocks;
    int k = 0;
    for (int x : pts) {
      blocks.emplace_back(v.begin() + k, v.begin() + k + f.dims[x]);
      k += f.dims[x];
    }
    bool ok = true;
    for (std::size_t i = 0; i < pts.size() && ok; ++i)
      for (std::size_t j = 0; j < pts.size() && ok; ++j)
        if (i != j && f.space.specializes(pts[j], pts[i]))
          ok = modp::apply(f.maps[pts[i]][pts[j]], blocks[i], f.p) == blocks[j];
    if (ok) ++count;
    int pos = 0;
    while (pos < total && ++v[pos] == f.p) v[pos++] = 0;
    if (pos == total) break;
  }
  return count;
}

}  // namespace

TEST_CASE("mod p linear algebra") {
  using modp::Mat;
  const Mat a{{1, 2, 0}, {2, 4, 1}};
  CHECK(modp::rank(a, 3, 5) == 2);
  const auto k = modp::kernel(a, 3, 5);
  REQUIRE(k.size() == 1);
  CHECK(modp::apply(a, k[0], 5) == modp::Vec{0, 0});
  modp::Vec c;
  CHECK(modp::solve({{1, 0, 1}, {0, 1, 1}}, {1, 1, 0}, 2, c));
  CHECK(c == modp::Vec{1, 1});
  CHECK_FALSE(modp::solve({{1, 0, 1}}, {0, 1, 0}, 2, c));
  const auto q = modp::quotient({{1, 1, 0}}, 3, 2);
  CHECK(q.complement.size() == 2);
  CHECK(modp::apply(q.projection, {1, 1, 0}, 2) == modp::Vec{0, 0});
  CHECK(modp::inverse(3, 7) == 5);
}

TEST_CASE("stalk sheaves give sheaves of sections") {
  std::mt19937_64 rng(1);
  for (const auto& ns : space_catalogue()) {
    if (ns.space.size() > 4) continue;
    const auto site = zariski_site(ns.space);
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = random_stalk_sheaf(ns.space, 3, rng);
      REQUIRE(validate_stalk_sheaf(f).ok);
      const auto s = sections(f, site);
      CHECK(validate_presheaf(s).ok);
      CHECK(is_sheaf(s, site.topology()).ok);
      for (int x = 0; x < ns.space.size(); ++x) CHECK(stalk(s, site, x).size() == f.stalks[x].size());
    }
  }
}

TEST_CASE("broken stalk maps are rejected") {
  const auto space = catalogue_space("chain3");
  auto f = constant_stalk_sheaf(space, {"0", "1"});
  // c ⤳ b ⤳ a is the generization chain; break c -> a only.
  f.maps[space.index("c")][space.index("a")] = {1, 0};
  CHECK(validate_stalk_sheaf(f).axiom == "stalk-composition");
}

TEST_CASE("random stalk morphisms are natural") {
  std::mt19937_64 rng(2);
  const auto space = catalogue_space("diamond");
  const auto site = zariski_site(space);
  int found = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_stalk_sheaf(space, 2, rng), g = random_stalk_sheaf(space, 3, rng);
    const auto phi = random_stalk_morphism(f, g, rng);
    if (!phi) continue;
    ++found;
    CHECK(is_stalk_morphism(f, g, *phi));
    const auto fs = ptr(sections(f, site)), gs = ptr(sections(g, site));
    CHECK(validate_morphism(sections_morphism(f, g, *phi, site, fs, gs)).ok);
  }
  CHECK(found > 0);
}

TEST_CASE("linear sections match brute-force enumeration") {
  std::mt19937_64 rng(3);
  for (const auto& ns : space_catalogue()) {
    if (ns.space.size() > 4) continue;
    const auto site = zariski_site(ns.space);
    for (int p : {2, 3}) {
      const auto f = random_linear_sheaf(ns.space, p, 2, rng);
      REQUIRE(validate_linear_stalk_sheaf(f).ok);
      const auto ls = linear_sections(f, site);
      CHECK(validate_ab_presheaf(*ls.presheaf).ok);
      for (ObjId o = 0; o < site.category().object_count(); ++o)
        CHECK(ls.presheaf->group_order(o) == brute_linear_sections(f, site.object_points[o]));
      CHECK(is_sheaf(ls.presheaf->to_set(), site.topology()).ok);
    }
  }
}

TEST_CASE("quotients, Godement embeddings and direct sums") {
  std::mt19937_64 rng(4);
  const auto space = catalogue_space("diamond");
  const auto site = zariski_site(space);
  const auto f = direct_sum(linear_constant(space, 2, 1), linear_skyscraper(space, 2, space.index("x"), 1));
  REQUIRE(validate_linear_stalk_sheaf(f).ok);
  const auto g = godement(f);
  REQUIRE(validate_linear_stalk_sheaf(g.sheaf).ok);
  CHECK(is_linear_morphism(f, g.sheaf, g.embedding));
  for (int x = 0; x < space.size(); ++x) CHECK(modp::rank(g.embedding.components[x], f.dims[x], 2) == f.dims[x]);

  const auto k = generated_subsheaf(f, {{space.index("z"), {1, 0}}});
  const auto q = quotient(f, k);
  REQUIRE(validate_linear_stalk_sheaf(q.sheaf).ok);
  CHECK(is_linear_morphism(f, q.sheaf, q.projection));
  CHECK(stalkwise_surjective(f, q.sheaf, q.projection));
  for (int x = 0; x < space.size(); ++x) CHECK(q.sheaf.dims[x] == f.dims[x] - static_cast<int>(k[x].size()));

  const auto fs = linear_sections(f, site), qs = linear_sections(q.sheaf, site);
  const auto m = linear_sections_morphism(f, q.sheaf, q.projection, site, fs, qs);
  auto fset = ptr(fs.presheaf->to_set()), qset = ptr(qs.presheaf->to_set());
  const auto sm = to_set_morphism(m, fset, qset);
  CHECK(validate_morphism(sm).ok);
  CHECK(is_epi(sm, site.topology()).holds);
}

TEST_CASE("pushforward along a closed subspace is exact on samples") {
  std::mt19937_64 rng(6);
  for (const auto& ns : space_catalogue()) {
    if (ns.space.size() > 4) continue;
    const auto site = zariski_site(ns.space);
    for (PointSet z : ns.space.closed_sets()) {
      if (z == 0) continue;
      const auto sub = zariski_site(ns.space.subspace(z));
      const auto u = subspace_functor(site, sub, z);
      std::vector<AbMorphism> samples;
      for (int trial = 0; trial < 3; ++trial) {
        const auto g = random_linear_sheaf(sub.space, 2, 1, rng);
        std::vector<std::pair<int, modp::Vec>> seeds;
        for (int x = 0; x < sub.space.size(); ++x)
          if (g.dims[x] && rng() % 2) seeds.push_back({x, modp::Vec(static_cast<std::size_t>(g.dims[x]), 1)});
        const auto q = quotient(g, generated_subsheaf(g, seeds));
        const auto gs = linear_sections(g, sub), qs = linear_sections(q.sheaf, sub);
        samples.push_back(linear_sections_morphism(g, q.sheaf, q.projection, sub, gs, qs));
      }
      const auto rep = check_exactness_along(u, samples, site.topology(), sub.topology());
      CHECK(rep.all_preserved);
    }
  }
}

TEST_CASE("pushforward along an open subspace can fail to be exact") {
  // X = pseudo-circle a, b ⤳ c, d plus a closed point z under c and d;
  // W = X \ {z}. K = constant F_2 on W embeds in its Godement sheaf G and
  // G -> G/K is epi, but over U_z = X its pushforward is G(W) -> (G/K)(W),
  // which misses the class of the nonzero element of H^1(W, F_2).
  const auto space = catalogue_space("suspended-circle");
  const auto site = zariski_site(space);
  const PointSet w = space.all() & ~(PointSet{1} << space.index("z"));
  const auto sub = zariski_site(space.subspace(w));
  const auto j = subspace_functor(site, sub, w);
  CHECK(is_continuous(j, site.topology(), sub.topology()).continuous);

  const auto k = linear_constant(sub.space, 2, 1);
  const auto g = godement(k);
  std::vector<std::pair<int, modp::Vec>> seeds;
  for (int x = 0; x < sub.space.size(); ++x) seeds.push_back({x, modp::apply(g.embedding.components[x], {1}, 2)});
  const auto q = quotient(g.sheaf, generated_subsheaf(g.sheaf, seeds));
  const auto gs = linear_sections(g.sheaf, sub), qs = linear_sections(q.sheaf, sub);
  const auto m = linear_sections_morphism(g.sheaf, q.sheaf, q.projection, sub, gs, qs);
  CHECK(gs.presheaf->group_order(sub.whole()) == 16);
  CHECK(qs.presheaf->group_order(sub.whole()) == 16);

  const auto rep = check_exactness_along(j, {m}, site.topology(), sub.topology());
  CHECK_FALSE(rep.all_preserved);
  REQUIRE(rep.entries.size() == 1);
  CHECK(rep.entries[0].witness.find("{a,b,c,d,z}") != std::string::npos);
}

TEST_CASE("pushforward along an open subspace of a 3-point space is exact") {
  // On every space with at most 3 points, every open subspace and every
  // sampled epi push forward to an epi.
  std::mt19937_64 rng(8);
  for (const auto& space : all_small_spaces(3)) {
    const auto site = zariski_site(space);
    for (PointSet w : space.opens()) {
      if (w == 0) continue;
      const auto sub = zariski_site(space.subspace(w));
      const auto j = subspace_functor(site, sub, w);
      for (int trial = 0; trial < 4; ++trial) {
        const auto g = godement(random_linear_sheaf(sub.space, 2, 1, rng));
        std::vector<std::pair<int, modp::Vec>> seeds;
        for (int x = 0; x < sub.space.size(); ++x)
          if (g.sheaf.dims[x] && rng() % 2) {
            modp::Vec v(static_cast<std::size_t>(g.sheaf.dims[x]), 0);
            v[rng() % v.size()] = 1;
            seeds.push_back({x, v});
          }
        const auto q = quotient(g.sheaf, generated_subsheaf(g.sheaf, seeds));
        const auto gs = linear_sections(g.sheaf, sub), qs = linear_sections(q.sheaf, sub);
        const auto m = linear_sections_morphism(g.sheaf, q.sheaf, q.projection, sub, gs, qs);
        CHECK(check_exactness_along(j, {m}, site.topology(), sub.topology()).all_preserved);
      }
    }
  }
}
