#include "sitelab/prolocal.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace sitelab {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

/// Colimit over Λ^op: sizes[λ] elements at λ, and for λ < μ the map
/// pull(λ, μ, i) sending element i at μ to an element at λ.
ColimitClasses colimit(const Poset& index, const std::vector<int>& sizes,
                       const std::function<int(int, int, int)>& pull) {
  const int n = index.size();
  std::vector<int> offset(static_cast<std::size_t>(n) + 1, 0);
  for (int l = 0; l < n; ++l) offset[l + 1] = offset[l] + sizes[l];
  UnionFind uf(offset[n]);
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      if (l != m && index.leq(l, m))
        for (int i = 0; i < sizes[m]; ++i) uf.unite(offset[m] + i, offset[l] + pull(l, m, i));

  // Depth of λ: number of elements below it. Representatives are chosen at
  // the deepest index so they are stable under refinement.
  std::vector<int> depth(static_cast<std::size_t>(n), 0);
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      if (index.leq(m, l)) ++depth[l];

  ColimitClasses out;
  out.class_of.resize(static_cast<std::size_t>(n));
  std::map<int, int> root_class;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return depth[a] < depth[b]; });
  for (int l = 0; l < n; ++l) out.class_of[l].assign(static_cast<std::size_t>(sizes[l]), -1);
  for (int l : order)
    for (int i = 0; i < sizes[l]; ++i) {
      const int r = uf.find(offset[l] + i);
      auto [it, fresh] = root_class.emplace(r, static_cast<int>(out.representatives.size()));
      if (fresh) out.representatives.emplace_back(l, i);
      out.class_of[l][i] = it->second;
    }
  return out;
}

std::string class_name(const ProObject& p, const ColimitClasses& cl, int k, ObjId x) {
  const auto& c = *p.category;
  const auto [l, i] = cl.representatives[k];
  const auto hom = c.hom(p.diagram[l], x);
  return p.index.name(l) + ":" + c.morphism(hom[i]).name;
}

/// Position of each morphism in hom(a, b).
std::map<MorId, int> hom_positions(const FiniteCategory& c, ObjId a, ObjId b) {
  std::map<MorId, int> pos;
  const auto hom = c.hom(a, b);
  for (int i = 0; i < static_cast<int>(hom.size()); ++i) pos[hom[i]] = i;
  return pos;
}

LocalityReport family_locality(const ProObject& p, ObjId x, const std::vector<MorId>& family) {
  const auto& c = *p.category;
  const auto target = hom_pro(p, x);
  std::vector<char> hit(static_cast<std::size_t>(target.size()), 0);
  for (int l = 0; l < p.index.size(); ++l) {
    const auto pos = hom_positions(c, p.diagram[l], x);
    for (MorId u : family)
      for (MorId g : c.hom(p.diagram[l], c.morphism(u).source))
        hit[target.class_of[l][pos.at(c.compose_checked(u, g))]] = 1;
  }
  for (int k = 0; k < target.size(); ++k)
    if (!hit[k]) {
      LocalityReport r;
      r.local = false;
      r.object = c.object_name(x);
      r.family = describe_family(c, family);
      r.missing = class_name(p, target, k, x);
      return r;
    }
  return {};
}

std::string locality_message(const LocalityReport& r) {
  return "pro-object is not local: class " + r.missing + " in hom(P, " + r.object + ") does not lift along " +
         r.family;
}

bool bijective(const std::vector<int>& map, int target_size) {
  if (static_cast<int>(map.size()) != target_size) return false;
  std::vector<char> seen(static_cast<std::size_t>(target_size), 0);
  for (int v : map) {
    if (seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

}  // namespace

ProObject ProObject::constant(const CategoryPtr& c, ObjId x) {
  ProObject p;
  p.category = c;
  p.index = Poset({c->object_name(x)}, std::vector<std::pair<int, int>>{});
  p.diagram = {x};
  return p;
}

MorId ProObject::transition(int lambda, int mu) const {
  if (lambda == mu) return category->identity(diagram[lambda]);
  const auto it = transitions.find({lambda, mu});
  if (it == transitions.end())
    throw InputError("missing transition " + index.name(lambda) + " -> " + index.name(mu));
  return it->second;
}

ValidationReport validate_pro_object(const ProObject& p) {
  ValidationReport r;
  auto fail = [&](std::string axiom, std::vector<std::string> w) {
    r.ok = false;
    r.axiom = std::move(axiom);
    r.witness = std::move(w);
    return r;
  };
  const auto& c = *p.category;
  const int n = p.index.size();
  if (static_cast<int>(p.diagram.size()) != n) return fail("diagram-shape", {});
  if (!is_codirected_poset(p.index)) return fail("codirected", {});
  for (const auto& [key, m] : p.transitions) {
    const auto [l, mu] = key;
    if (l < 0 || mu < 0 || l >= n || mu >= n || l == mu || !p.index.leq(l, mu))
      return fail("transition-index", {c.morphism(m).name});
  }
  for (int l = 0; l < n; ++l)
    for (int mu = 0; mu < n; ++mu) {
      if (l == mu || !p.index.leq(l, mu)) continue;
      const auto it = p.transitions.find({l, mu});
      if (it == p.transitions.end()) return fail("transition-missing", {p.index.name(l), p.index.name(mu)});
      const auto& m = c.morphism(it->second);
      if (m.source != p.diagram[l] || m.target != p.diagram[mu])
        return fail("transition-typing", {p.index.name(l), p.index.name(mu), m.name});
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        if (a == b || b == d || !p.index.leq(a, b) || !p.index.leq(b, d)) continue;
        if (c.compose_checked(p.transition(b, d), p.transition(a, b)) != p.transition(a, d))
          return fail("transition-composition", {p.index.name(a), p.index.name(b), p.index.name(d)});
      }
  return r;
}

ColimitClasses hom_pro(const ProObject& p, ObjId x) {
  const auto& c = *p.category;
  const int n = p.index.size();
  std::vector<int> sizes(static_cast<std::size_t>(n));
  std::vector<std::vector<MorId>> homs(static_cast<std::size_t>(n));
  std::vector<std::map<MorId, int>> pos(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    homs[l] = c.hom(p.diagram[l], x);
    sizes[l] = static_cast<int>(homs[l].size());
    pos[l] = hom_positions(c, p.diagram[l], x);
  }
  return colimit(p.index, sizes,
                 [&](int l, int m, int i) { return pos[l].at(c.compose_checked(homs[m][i], p.transition(l, m))); });
}

LocalityReport is_tau_local(const ProObject& p, const Pretopology& generators) {
  for (const auto& fam : generators.families) {
    auto r = family_locality(p, fam.target, fam.members);
    if (!r.local) return r;
  }
  return {};
}

LocalityReport is_tau_local_saturated(const ProObject& p, const Topology& t) {
  for (ObjId x = 0; x < p.category->object_count(); ++x)
    for (const auto& s : t.covering_sieves(x)) {
      auto r = family_locality(p, x, sieve_members(s));
      if (!r.local) return r;
    }
  return {};
}

// ------------------------------------------------------------ fibre functor

FibreFunctorWitness::FibreFunctorWitness(ProObject p, const Pretopology& generators) : pro_(std::move(p)) {
  const auto v = validate_pro_object(pro_);
  if (!v.ok) throw InputError("invalid pro-object: " + v.axiom);
  const auto r = is_tau_local(pro_, generators);
  if (!r.local) throw InputError(locality_message(r));
}

FibreFunctorWitness FibreFunctorWitness::unchecked(ProObject p) { return FibreFunctorWitness(std::move(p)); }

std::shared_ptr<const ColimitClasses> FibreFunctorWitness::evaluate(const PresheafPtr& f) const {
  {
    std::lock_guard lock(mutex_);
    const auto it = cache_.find(f.get());
    if (it != cache_.end()) return it->second.second;
  }
  const int n = pro_.index.size();
  std::vector<int> sizes(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) sizes[l] = f->size(pro_.diagram[l]);
  auto cl = std::make_shared<const ColimitClasses>(
      colimit(pro_.index, sizes, [&](int l, int m, int i) { return f->restrict(pro_.transition(l, m), i); }));
  std::lock_guard lock(mutex_);
  cache_.emplace(f.get(), std::make_pair(f, cl));
  return cl;
}

std::vector<int> FibreFunctorWitness::evaluate(const SheafMorphism& m) const {
  const auto src = evaluate(m.source);
  const auto tgt = evaluate(m.target);
  std::vector<int> out;
  for (const auto& [l, i] : src->representatives) out.push_back(tgt->class_of[l][m.components[pro_.diagram[l]][i]]);
  return out;
}

// ------------------------------------------------------------- fibre axioms

SheafifiedRepresentables sheafified_representables(const Site& site) {
  const auto& cp = site.category;
  const auto& c = *cp;
  SheafifiedRepresentables out;
  std::vector<PresheafPtr> reps;
  std::vector<Sheafification> sh;
  for (ObjId x = 0; x < c.object_count(); ++x) {
    reps.push_back(std::make_shared<const SetPresheaf>(representable(cp, x)));
    sh.push_back(sheafify(reps.back(), site.topology));
    out.sheaves.push_back(sh.back().sheaf);
    const int id = *reps.back()->find(x, c.morphism(c.identity(x)).name);
    out.identity_section.push_back(sh.back().unit.components[x][id]);
  }
  for (MorId f = 0; f < c.morphism_count(); ++f) {
    const auto& m = c.morphism(f);
    out.morphisms.push_back(
        sheafify_morphism(representable_morphism(f, reps[m.source], reps[m.target]), sh[m.source], sh[m.target]));
  }
  return out;
}

FibreAxiomReport check_fibre_axioms(const FibreFunctorWitness& w, const Site& site,
                                    const SheafifiedRepresentables& reps, const std::vector<PresheafPtr>& catalogue,
                                    const std::vector<std::pair<SheafMorphism, SheafMorphism>>& parallel_pairs) {
  FibreAxiomReport r;
  const auto& c = *site.category;
  auto note = [&](const std::string& s) {
    if (r.witness.empty()) r.witness = s;
  };

  const auto one = sheafify(std::make_shared<const SetPresheaf>(terminal_presheaf(site.category)), site.topology);
  if (const int n = w.evaluate(one.sheaf)->size(); n != 1) {
    r.terminal = false;
    note("terminal sheaf has fibre of size " + std::to_string(n));
  }

  std::vector<PresheafPtr> sheaves;
  for (const auto& f : catalogue) sheaves.push_back(sheafify(f, site.topology).sheaf);
  for (std::size_t a = 0; a < sheaves.size() && r.products; ++a)
    for (std::size_t b = a; b < sheaves.size() && r.products; ++b) {
      const auto prod = std::make_shared<const SetPresheaf>(product(*sheaves[a], *sheaves[b]));
      const auto pa = w.evaluate(projection(prod, sheaves[a], 0));
      const auto pb = w.evaluate(projection(prod, sheaves[b], 1));
      const int na = w.evaluate(sheaves[a])->size(), nb = w.evaluate(sheaves[b])->size();
      std::vector<int> pair_map;
      for (std::size_t k = 0; k < pa.size(); ++k) pair_map.push_back(pa[k] * nb + pb[k]);
      if (!bijective(pair_map, na * nb)) {
        r.products = false;
        note("product of catalogue sheaves " + std::to_string(a) + " and " + std::to_string(b) +
             " is not preserved");
      }
    }

  for (std::size_t k = 0; k < parallel_pairs.size() && r.equalizers; ++k) {
    const auto& [f, g] = parallel_pairs[k];
    const auto eq = equalizer(f, g);
    const auto inc = w.evaluate(eq.inclusion);
    const auto ff = w.evaluate(f), gg = w.evaluate(g);
    std::set<int> expected;
    for (int i = 0; i < static_cast<int>(ff.size()); ++i)
      if (ff[i] == gg[i]) expected.insert(i);
    const std::set<int> image(inc.begin(), inc.end());
    if (image.size() != inc.size() || image != expected) {
      r.equalizers = false;
      note("equalizer of parallel pair " + std::to_string(k) + " is not preserved");
    }
  }

  for (const auto& fam : site.generators.families) {
    const int n = w.evaluate(reps.sheaves[fam.target])->size();
    std::vector<char> hit(static_cast<std::size_t>(n), 0);
    for (MorId u : fam.members)
      for (int v : w.evaluate(reps.morphisms[u])) hit[v] = 1;
    if (std::find(hit.begin(), hit.end(), 0) != hit.end()) {
      r.covers = false;
      note("covering family " + describe_family(c, fam.members) + " is not jointly surjective");
      break;
    }
  }
  return r;
}

// ------------------------------------------------------ neighbourhoods

NeighbourhoodCategory neighbourhood_category(const FibreFunctorWitness& w, const FiniteCategory& c,
                                             const SheafifiedRepresentables& reps) {
  NeighbourhoodCategory n;
  std::vector<std::vector<int>> index_of(static_cast<std::size_t>(c.object_count()));
  for (ObjId x = 0; x < c.object_count(); ++x) {
    const int k = w.evaluate(reps.sheaves[x])->size();
    for (int s = 0; s < k; ++s) {
      index_of[x].push_back(static_cast<int>(n.objects.size()));
      n.objects.emplace_back(x, s);
    }
  }
  const int m = static_cast<int>(n.objects.size());
  n.arrows.assign(static_cast<std::size_t>(m), std::vector<std::vector<MorId>>(static_cast<std::size_t>(m)));
  for (MorId f = 0; f < c.morphism_count(); ++f) {
    const auto img = w.evaluate(reps.morphisms[f]);
    const auto& mor = c.morphism(f);
    for (int s = 0; s < static_cast<int>(img.size()); ++s)
      n.arrows[index_of[mor.source][s]][index_of[mor.target][img[s]]].push_back(f);
  }

  auto name = [&](int i) {
    return "(" + c.object_name(n.objects[i].first) + "," + std::to_string(n.objects[i].second) + ")";
  };
  auto fail = [&](std::string why) {
    n.cofiltered = false;
    n.witness = std::move(why);
  };
  if (m == 0) {
    fail("no objects");
    return n;
  }
  for (int a = 0; a < m && n.cofiltered; ++a)
    for (int b = a + 1; b < m && n.cofiltered; ++b) {
      bool found = false;
      for (int d = 0; d < m && !found; ++d) found = !n.arrows[d][a].empty() && !n.arrows[d][b].empty();
      if (!found) fail("no common refinement of " + name(a) + " and " + name(b));
    }
  for (int a = 0; a < m && n.cofiltered; ++a)
    for (int b = 0; b < m && n.cofiltered; ++b)
      for (std::size_t i = 0; i < n.arrows[a][b].size() && n.cofiltered; ++i)
        for (std::size_t j = i + 1; j < n.arrows[a][b].size() && n.cofiltered; ++j) {
          const MorId u = n.arrows[a][b][i], v = n.arrows[a][b][j];
          bool found = false;
          for (int d = 0; d < m && !found; ++d)
            for (MorId h : n.arrows[d][a])
              if (c.compose_checked(u, h) == c.compose_checked(v, h)) {
                found = true;
                break;
              }
          if (!found) fail("arrows " + c.morphism(u).name + ", " + c.morphism(v).name + " out of " + name(a) +
                           " are not equalized");
        }
  return n;
}

ProObject neighbourhood_pro_object(const NeighbourhoodCategory& n, const CategoryPtr& c) {
  if (!c->is_poset()) throw InputError("neighbourhood pro-object needs a poset site");
  const int m = static_cast<int>(n.objects.size());
  std::vector<std::string> names;
  for (const auto& [x, s] : n.objects) names.push_back(c->object_name(x) + "#" + std::to_string(s));
  std::vector<std::pair<int, int>> leq;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (a != b && !n.arrows[a][b].empty()) leq.emplace_back(a, b);
  ProObject p;
  p.category = c;
  p.index = Poset(names, leq);
  for (const auto& [x, s] : n.objects) p.diagram.push_back(x);
  for (const auto& [a, b] : leq) p.transitions[{a, b}] = n.arrows[a][b].front();
  return p;
}

AgreementReport fibre_functors_agree(const FibreFunctorWitness& a, const FibreFunctorWitness& b,
                                     const std::vector<PresheafPtr>& catalogue,
                                     const std::vector<SheafMorphism>& morphisms) {
  for (std::size_t k = 0; k < catalogue.size(); ++k) {
    const int na = a.evaluate(catalogue[k])->size(), nb = b.evaluate(catalogue[k])->size();
    if (na != nb)
      return {false, "sheaf " + std::to_string(k) + ": " + std::to_string(na) + " vs " + std::to_string(nb)};
  }
  for (std::size_t k = 0; k < morphisms.size(); ++k) {
    const auto ia = a.evaluate(morphisms[k]), ib = b.evaluate(morphisms[k]);
    const auto na = std::set<int>(ia.begin(), ia.end()).size(), nb = std::set<int>(ib.begin(), ib.end()).size();
    if (na != nb)
      return {false, "morphism " + std::to_string(k) + ": image " + std::to_string(na) + " vs " + std::to_string(nb)};
  }
  return {};
}

ConservativityReport conservativity_check(const std::vector<std::string>& point_names,
                                          const std::vector<const FibreFunctorWitness*>& points,
                                          const std::vector<SheafMorphism>& morphisms, const Topology& t) {
  ConservativityReport r;
  for (std::size_t k = 0; k < morphisms.size(); ++k) {
    ConservativityEntry e;
    e.sample = static_cast<int>(k);
    e.iso = is_iso(morphisms[k], t).holds;
    e.all_points_bijective = true;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (!bijective(points[i]->evaluate(morphisms[k]), points[i]->evaluate(morphisms[k].target)->size())) {
        e.all_points_bijective = false;
        e.failing_point = point_names[i];
        break;
      }
    if (e.iso != e.all_points_bijective) r.conservative = false;
    r.entries.push_back(std::move(e));
  }
  return r;
}

CoverDetection cover_detection(const std::vector<std::string>& point_names,
                               const std::vector<const FibreFunctorWitness*>& points,
                               const SheafifiedRepresentables& reps, const FiniteCategory& c, ObjId x,
                               const std::vector<MorId>& family) {
  for (MorId u : family)
    if (c.morphism(u).target != x) throw InputError("family member " + c.morphism(u).name + " does not target " +
                                                    c.object_name(x));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int n = points[i]->evaluate(reps.sheaves[x])->size();
    std::vector<char> hit(static_cast<std::size_t>(n), 0);
    for (MorId u : family)
      for (int v : points[i]->evaluate(reps.morphisms[u])) hit[v] = 1;
    if (std::find(hit.begin(), hit.end(), 0) != hit.end()) return {false, point_names[i]};
  }
  return {};
}

std::vector<FibreFunctorWitness> stalk_points(const SpaceSite& site) {
  std::vector<FibreFunctorWitness> out;
  out.reserve(static_cast<std::size_t>(site.space.size()));
  for (int x = 0; x < site.space.size(); ++x)
    out.emplace_back(ProObject::constant(site.site.category, site.minimal_object(x)), site.site.generators);
  return out;
}

}  // namespace sitelab
