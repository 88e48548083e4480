#include "sitelab/experiments.hpp"

#include <algorithm>
#include <numeric>
#include <functional>
#include <set>

#include "sitelab/prolocal.hpp"

namespace sitelab::experiments {

namespace {

PresheafPtr ptr(SetPresheaf f) { return std::make_shared<const SetPresheaf>(std::move(f)); }

/// Objects of a space site whose points lie inside the target's.
std::vector<ObjId> opens_inside(const SpaceSite& site, ObjId x) {
  std::vector<ObjId> out;
  for (ObjId u = 0; u < site.category().object_count(); ++u)
    if ((site.object_points[u] & ~site.object_points[x]) == 0) out.push_back(u);
  return out;
}

/// Calls f(family) for every subset of `pool` of size at most k.
template <typename F>
void for_each_subset(const std::vector<ObjId>& pool, int k, F&& f) {
  std::vector<ObjId> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    f(chosen);
    if (static_cast<int>(chosen.size()) == k) return;
    for (std::size_t i = start; i < pool.size(); ++i) {
      chosen.push_back(pool[i]);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
}

std::vector<MorId> family_into(const SpaceSite& site, const std::vector<ObjId>& pieces, ObjId x) {
  std::vector<MorId> fam;
  for (ObjId u : pieces) fam.push_back(site.category().hom(u, x).front());
  return fam;
}

std::string family_text(const SpaceSite& site, const std::vector<ObjId>& pieces, ObjId x) {
  std::string s = "{";
  for (std::size_t i = 0; i < pieces.size(); ++i)
    s += (i ? ", " : "") + site.category().object_name(pieces[i]);
  return s + "} -> " + site.category().object_name(x);
}

bool bijective(const std::vector<int>& v, int n) {
  if (static_cast<int>(v.size()) != n) return false;
  std::set<int> s(v.begin(), v.end());
  return static_cast<int>(s.size()) == n;
}

std::string space_text(const FiniteSpace& s) {
  std::string out = "points {";
  for (int x = 0; x < s.size(); ++x) out += (x ? "," : "") + s.name(x);
  out += "} specializations {";
  bool first = true;
  for (const auto& [x, y] : s.specialization_pairs()) {
    out += (first ? "" : ",") + s.name(x) + "~>" + s.name(y);
    first = false;
  }
  return out + "}";
}

}  // namespace

Outcome topology_soundness(int max_points, int max_family) {
  Outcome out;
  for (const auto& space : all_small_spaces(max_points)) {
    const auto site = zariski_site(space);
    const auto ax = check_topology_axioms(site.topology());
    ++out.checked;
    if (!ax.ok) out.fail(space_text(space) + ": axiom " + ax.axiom + " fails at " + ax.object + " " + ax.sieve);
    if (!(generate_topology(site.site.category, site.site.generators) == site.topology()))
      out.fail(space_text(space) + ": regenerated topology differs");
    for (ObjId x = 0; x < site.category().object_count(); ++x) {
      const auto pool = opens_inside(site, x);
      for_each_subset(pool, max_family, [&](const std::vector<ObjId>& pieces) {
        PointSet uni = 0;
        for (ObjId u : pieces) uni |= site.object_points[u];
        const auto fam = family_into(site, pieces, x);
        ++out.checked;
        if (is_covering(site.topology(), x, fam) != (uni == site.object_points[x]))
          out.fail(space_text(space) + ": " + family_text(site, pieces, x));
      });
    }
  }
  return out;
}

Outcome sheafification_suite(const std::vector<FiniteSpace>& spaces, std::uint64_t seed) {
  Outcome out;
  for (const auto& space : spaces) {
    const auto site = zariski_site(space);
    const auto& t = site.topology();
    const auto& c = site.category();
    const auto cat = presheaf_catalogue(site, seed);
    std::vector<Sheafification> sh;
    for (const auto& np : cat) {
      sh.push_back(sheafify(np.presheaf, t));
      ++out.checked;
      const auto& s = sh.back();
      if (!is_sheaf(*s.sheaf, t).ok) out.fail(np.name + ": sheafification is not a sheaf");
      const bool was_sheaf = is_sheaf(*np.presheaf, t).ok;
      bool unit_iso = true;
      for (ObjId x = 0; x < c.object_count(); ++x)
        unit_iso = unit_iso && bijective(s.unit.components[x], s.sheaf->size(x));
      if (unit_iso != was_sheaf) out.fail(np.name + ": unit iso " + std::to_string(unit_iso) + " but sheaf " +
                                          std::to_string(was_sheaf));
    }
    for (std::size_t i = 0; i < cat.size(); ++i)
      for (std::size_t j = i; j < cat.size(); ++j) {
        const auto fg = ptr(product(*cat[i].presheaf, *cat[j].presheaf));
        const auto sfg = sheafify(fg, t);
        const auto p1 = sheafify_morphism(projection(fg, cat[i].presheaf, 0), sfg, sh[i]);
        const auto p2 = sheafify_morphism(projection(fg, cat[j].presheaf, 1), sfg, sh[j]);
        ++out.checked;
        for (ObjId x = 0; x < c.object_count(); ++x) {
          std::set<std::pair<int, int>> img;
          for (int k = 0; k < sfg.sheaf->size(x); ++k) img.emplace(p1.components[x][k], p2.components[x][k]);
          if (static_cast<int>(img.size()) != sfg.sheaf->size(x) ||
              static_cast<int>(img.size()) != sh[i].sheaf->size(x) * sh[j].sheaf->size(x))
            out.fail(cat[i].name + " x " + cat[j].name + ": product not preserved at " + c.object_name(x));
        }
        if (i != j) continue;
        // Equalizer of the two projections F x F -> F: the diagonal.
        const auto p2i = projection(fg, cat[i].presheaf, 1);
        const auto p1i = projection(fg, cat[i].presheaf, 0);
        const auto eq = equalizer(p1i, p2i);
        const auto se = sheafify(eq.object, t);
        const auto a1 = sheafify_morphism(p1i, sfg, sh[i]), a2 = sheafify_morphism(p2i, sfg, sh[i]);
        const auto ai = sheafify_morphism(eq.inclusion, se, sfg);
        ++out.checked;
        for (ObjId x = 0; x < c.object_count(); ++x) {
          std::set<int> expect;
          for (int k = 0; k < sfg.sheaf->size(x); ++k)
            if (a1.components[x][k] == a2.components[x][k]) expect.insert(k);
          const std::set<int> got(ai.components[x].begin(), ai.components[x].end());
          if (got != expect || got.size() != ai.components[x].size())
            out.fail(cat[i].name + ": equalizer not preserved at " + c.object_name(x));
        }
      }
  }
  return out;
}

std::pair<StalkSheaf, StalkMap> permuted_copy(const StalkSheaf& f, std::mt19937_64& rng) {
  const int n = f.space.size();
  StalkMap perm(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    perm[x].resize(f.stalks[x].size());
    std::iota(perm[x].begin(), perm[x].end(), 0);
    std::shuffle(perm[x].begin(), perm[x].end(), rng);
  }
  StalkSheaf g = f;
  for (int x = 0; x < n; ++x)
    for (std::size_t i = 0; i < f.stalks[x].size(); ++i) g.stalks[x][perm[x][i]] = f.stalks[x][i];
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (f.maps[x][y].empty()) continue;
      for (std::size_t i = 0; i < f.maps[x][y].size(); ++i) g.maps[x][y][perm[x][i]] = perm[y][f.maps[x][y][i]];
    }
  return {g, perm};
}

DeligneResult deligne_sample(const FiniteSpace& space, int samples, std::uint64_t seed, int max_sections) {
  DeligneResult r;
  std::mt19937_64 rng(seed);
  const auto site = zariski_site(space);
  const auto points = stalk_points(site);
  std::vector<const FibreFunctorWitness*> pts;
  std::vector<std::string> names;
  for (int x = 0; x < space.size(); ++x) {
    pts.push_back(&points[x]);
    names.push_back(space.name(x));
  }
  auto small = [&](const SetPresheaf& s) {
    for (ObjId o = 0; o < site.category().object_count(); ++o)
      if (s.size(o) > max_sections) return false;
    return true;
  };
  std::vector<SheafMorphism> ms;
  long long attempts = 0;
  while (static_cast<int>(ms.size()) < samples && attempts < 200LL * samples) {
    ++attempts;
    const int kind = static_cast<int>(ms.size() % 3);
    const auto f = random_stalk_sheaf(space, 1 + static_cast<int>(rng() % 3), rng);
    const auto fs = ptr(sections(f, site));
    if (!small(*fs)) continue;
    StalkSheaf g;
    std::optional<StalkMap> phi;
    if (kind == 0) {
      auto [copy, perm] = permuted_copy(f, rng);
      g = std::move(copy);
      phi = std::move(perm);
    } else {
      g = kind == 1 ? f : random_stalk_sheaf(space, 1 + static_cast<int>(rng() % 3), rng);
      phi = random_stalk_morphism(f, g, rng);
    }
    if (!phi) continue;
    const auto gs = ptr(sections(g, site));
    if (!small(*gs)) continue;
    ms.push_back(sections_morphism(f, g, *phi, site, fs, gs));
  }
  const auto rep = conservativity_check(names, pts, ms, site.topology());
  r.outcome.checked = static_cast<long long>(ms.size());
  if (static_cast<int>(ms.size()) < samples)
    r.outcome.fail("only " + std::to_string(ms.size()) + " samples found");
  for (const auto& e : rep.entries) {
    if (e.iso) ++r.isos;
    if (e.iso != e.all_points_bijective) {
      ++r.discrepancies;
      r.outcome.fail("sample " + std::to_string(e.sample) + ": iso " + std::to_string(e.iso) +
                     ", bijective at every point " + std::to_string(e.all_points_bijective));
    }
  }
  return r;
}

Outcome cover_detection_sweep(int max_points, int max_family, int exhaustive_limit) {
  Outcome out;
  for (const auto& space : all_small_spaces(max_points)) {
    const auto site = zariski_site(space);
    const auto& c = site.category();
    const auto reps = sheafified_representables(site.site);
    const auto points = stalk_points(site);
    std::vector<const FibreFunctorWitness*> pts;
    std::vector<std::string> names;
    for (int x = 0; x < space.size(); ++x) {
      pts.push_back(&points[x]);
      names.push_back(space.name(x));
    }
    for (ObjId x = 0; x < c.object_count(); ++x) {
      const auto pool = opens_inside(site, x);
      const int k = static_cast<int>(pool.size()) <= exhaustive_limit ? static_cast<int>(pool.size()) : max_family;
      for_each_subset(pool, k, [&](const std::vector<ObjId>& pieces) {
        const auto fam = family_into(site, pieces, x);
        PointSet uni = 0;
        for (ObjId u : pieces) uni |= site.object_points[u];
        const bool detected = cover_detection(names, pts, reps, c, x, fam).jointly_surjective;
        ++out.checked;
        if (detected != is_covering(site.topology(), x, fam) || detected != (uni == site.object_points[x]))
          out.fail(space_text(space) + ": " + family_text(site, pieces, x));
      });
    }
  }
  return out;
}

std::vector<LocalityEntry> locality_classification(const std::vector<NamedSpace>& spaces) {
  std::vector<LocalityEntry> out;
  for (const auto& ns : spaces) {
    LocalityEntry e;
    e.space = ns.name;
    e.irreducible = ns.space.is_irreducible();
    const auto closed = closed_cover_site(ns.space);
    e.closed_whole_local =
        is_tau_local(ProObject::constant(closed.site.category, closed.whole()), closed.site.generators).local;
    const auto zar = zariski_site(ns.space);
    for (int x = 0; x < ns.space.size(); ++x)
      e.zariski_points_local =
          e.zariski_points_local &&
          is_tau_local(ProObject::constant(zar.site.category, zar.minimal_object(x)), zar.site.generators).local;
    out.push_back(e);
  }
  return out;
}

PushforwardResult closed_pushforward_sweep(const FiniteSpace& space, int samples, std::uint64_t seed,
                                           const std::vector<int>& primes, long long max_order) {
  PushforwardResult r;
  std::mt19937_64 rng(seed);
  const auto site = zariski_site(space);
  std::vector<PointSet> closed;
  for (PointSet z : space.closed_sets())
    if (z != 0) closed.push_back(z);
  r.subspaces = static_cast<long long>(closed.size());
  auto small = [&](const AbPresheaf& a, const SpaceSite& s) {
    for (ObjId o = 0; o < s.category().object_count(); ++o)
      if (a.group_order(o) > max_order) return false;
    return true;
  };
  for (std::size_t zi = 0; zi < closed.size(); ++zi) {
    const PointSet z = closed[zi];
    const auto sub = zariski_site(space.subspace(z));
    const auto u = subspace_functor(site, sub, z);
    const int quota = samples / static_cast<int>(closed.size()) +
                      (static_cast<int>(zi) < samples % static_cast<int>(closed.size()) ? 1 : 0);
    int done = 0;
    long long attempts = 0;
    while (done < quota && attempts < 100LL * quota + 100) {
      ++attempts;
      const int p = primes[rng() % primes.size()];
      const int max_dim = p == 2 ? 2 : 1;
      const auto g = random_linear_sheaf(sub.space, p, max_dim, rng);
      std::vector<std::pair<int, modp::Vec>> seeds;
      for (int x = 0; x < sub.space.size(); ++x)
        if (g.dims[x] && rng() % 2) {
          modp::Vec v(static_cast<std::size_t>(g.dims[x]), 0);
          for (auto& e : v) e = static_cast<int>(rng() % static_cast<unsigned>(p));
          seeds.push_back({x, v});
        }
      const auto q = quotient(g, generated_subsheaf(g, seeds));
      const auto gs = linear_sections(g, sub), qs = linear_sections(q.sheaf, sub);
      if (!small(*gs.presheaf, sub) || !small(*qs.presheaf, sub)) {
        ++r.rejected;
        continue;
      }
      const auto m = linear_sections_morphism(g, q.sheaf, q.projection, sub, gs, qs);
      const auto rep = check_exactness_along(u, {m}, site.topology(), sub.topology());
      ++done;
      ++r.outcome.checked;
      if (!rep.all_preserved)
        r.outcome.fail("closed subspace " + space.set_name(z) + ": " + rep.entries.front().witness);
    }
  }
  return r;
}

OpenCounterexample open_pushforward_counterexample() {
  OpenCounterexample r;
  const auto space = catalogue_space("suspended-circle");
  const auto site = zariski_site(space);
  const PointSet w = space.all() & ~(PointSet{1} << space.index("z"));
  const auto sub = zariski_site(space.subspace(w));
  const auto j = subspace_functor(site, sub, w);
  const auto k = linear_constant(sub.space, 2, 1);
  const auto g = godement(k);
  std::vector<std::pair<int, modp::Vec>> seeds;
  for (int x = 0; x < sub.space.size(); ++x) seeds.push_back({x, modp::apply(g.embedding.components[x], {1}, 2)});
  const auto q = quotient(g.sheaf, generated_subsheaf(g.sheaf, seeds));
  const auto gs = linear_sections(g.sheaf, sub), qs = linear_sections(q.sheaf, sub);
  const auto m = linear_sections_morphism(g.sheaf, q.sheaf, q.projection, sub, gs, qs);
  r.source_order = gs.presheaf->group_order(sub.whole());
  r.target_order = qs.presheaf->group_order(sub.whole());
  const auto rep = check_exactness_along(j, {m}, site.topology(), sub.topology());
  r.failure_found = !rep.all_preserved;
  if (r.failure_found) r.witness = rep.entries.front().witness;
  return r;
}

CocontinuityResult closed_subspace_cocontinuity(const FiniteSpace& space) {
  CocontinuityResult r;
  const auto site = zariski_site(space);
  for (PointSet z : space.closed_sets()) {
    if (z == 0) continue;
    const auto sub = zariski_site(space.subspace(z));
    const auto u = subspace_functor(site, sub, z);
    ++r.outcome.checked;
    const auto cont = is_continuous(u, site.topology(), sub.topology());
    if (!cont.continuous) r.outcome.fail(space.set_name(z) + ": not continuous: " + cont.witness);
    const auto ac = is_almost_cocontinuous(u, site.topology(), sub.topology());
    if (!ac.holds) r.outcome.fail(space.set_name(z) + ": not almost cocontinuous: " + ac.witness);
    r.empty_clause_uses += static_cast<long long>(ac.empty_clause_objects.size());
  }
  return r;
}

int predicted_escape(long long p, long long q, int max_n) {
  const auto centers = valuation::center_sequence(max_n);
  for (int step = 1; step <= max_n; ++step) {
    if (p == q) return step;
    const char letter = q > p ? 'A' : 'B';
    (letter == 'A' ? q : p) -= (letter == 'A' ? p : q);
    if (letter != centers[step].chart) return step;
  }
  return -1;
}

std::vector<EscapeRow> escape_table(int max_pq, int max_n) {
  std::vector<EscapeRow> out;
  for (int p = 1; p <= max_pq; ++p)
    for (int q = 1; q <= max_pq; ++q) {
      const auto r = valuation::lift_dvr_point(valuation::TFunction::t_power(p), valuation::TFunction::t_power(q), max_n);
      out.push_back({p, q, r.escaped ? r.step : -1, predicted_escape(p, q, max_n)});
    }
  return out;
}

GmZeroResult gm_zero_family(int count, std::uint64_t seed) {
  using namespace valuation;
  GmZeroResult r;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < count; ++k) {
    long long num = static_cast<long long>(rng() % 2001) - 1000;
    if (num == 0) num = 1;
    const long long den = 1 + static_cast<long long>(rng() % 1000);
    const TFunction e(TPoly{{Rational(num, den)}}, TPoly{{Rational(1)}});
    ++r.outcome.checked;
    const auto l = unit_or_zero_lift(RingModel::RationalField, e);
    if (l.kind == LiftKind::Gm)
      ++r.gm;
    else
      r.outcome.fail(e.str() + " did not lift through G_m");
  }
  ++r.outcome.checked;
  if (unit_or_zero_lift(RingModel::RationalField, TFunction()).kind == LiftKind::Zero)
    ++r.zero;
  else
    r.outcome.fail("0 did not lift through 0");
  ++r.outcome.checked;
  const auto t = unit_or_zero_lift(RingModel::Dvr, TFunction::t_power(1));
  r.dvr_witness = t.witness;
  if (t.kind != LiftKind::Fail || t.witness != "t") r.outcome.fail("t in V did not fail with witness t");
  return r;
}

}  // namespace sitelab::experiments
