#include "sitelab/coverage.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace sitelab {

void validate_pretopology(const FiniteCategory& c, const Pretopology& p) {
  for (const auto& fam : p.families) {
    if (fam.target < 0 || fam.target >= c.object_count())
      throw InputError("covering family has an unknown target");
    for (MorId m : fam.members) {
      if (m < 0 || m >= c.morphism_count()) throw InputError("covering family has an unknown member");
      if (c.target(m) != fam.target)
        throw InputError("family member '" + c.morphism(m).name + "' does not land on '" +
                         c.object_name(fam.target) + "'");
    }
  }
}

// ------------------------------------------------------------- Topology

Topology::Topology(CategoryPtr c, std::vector<std::set<Bits>> covering)
    : category_(std::move(c)), covering_(std::move(covering)) {
  const int n = category_->object_count();
  if (static_cast<int>(covering_.size()) != n)
    throw InputError("topology must list covering sieves for every object");
  finest_.reserve(static_cast<std::size_t>(n));
  finest_ok_.assign(static_cast<std::size_t>(n), 0);
  for (ObjId x = 0; x < n; ++x) {
    Sieve s = maximal_sieve(*category_, x);
    for (const auto& cov : covering_[x]) s.members &= cov;
    finest_ok_[x] = covering_[x].count(s.members) != 0;
    finest_.push_back(std::move(s));
  }
}

std::vector<Sieve> Topology::covering_sieves(ObjId x) const {
  std::vector<Sieve> out;
  for (const auto& b : covering_[x]) out.push_back({x, b});
  return out;
}

std::size_t Topology::total_covering() const {
  std::size_t n = 0;
  for (const auto& s : covering_) n += s.size();
  return n;
}

const Sieve& Topology::finest_cover(ObjId x) const {
  if (!finest_ok_[x])
    throw InputError("covering sieves on '" + category_->object_name(x) +
                     "' have no common covering refinement");
  return finest_[x];
}

std::string describe_family(const FiniteCategory& c, std::span<const MorId> family) {
  std::string out = "{";
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (i) out += ", ";
    out += c.morphism(family[i]).name;
  }
  return out + "}";
}

std::string describe_sieve(const FiniteCategory& c, const Sieve& s) {
  const auto m = sieve_members(s);
  return describe_family(c, m);
}

namespace {

std::vector<Bits> minimal_members(const std::set<Bits>& sets) {
  std::vector<Bits> sorted(sets.begin(), sets.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Bits& a, const Bits& b) { return a.count() < b.count(); });
  std::vector<Bits> minimal;
  for (auto& s : sorted) {
    bool above = false;
    for (const auto& m : minimal)
      if (m.subset_of(s)) {
        above = true;
        break;
      }
    if (!above) minimal.push_back(std::move(s));
  }
  return minimal;
}

bool locally_covering(const FiniteCategory& c, const std::vector<std::set<Bits>>& cov,
                      const Sieve& s, const Bits& r) {
  bool ok = true;
  r.for_each([&](std::size_t i) {
    if (!ok) return;
    const MorId f = static_cast<MorId>(i);
    if (s.contains(f)) return;  // pullback is maximal
    ok = cov[c.source(f)].count(pullback_sieve(c, s, f).members) != 0;
  });
  return ok;
}

Topology saturate(const CategoryPtr& cp, std::vector<std::set<Bits>> cov) {
  const auto& c = *cp;
  const int n = c.object_count();
  for (ObjId x = 0; x < n; ++x) cov[x].insert(maximal_sieve(c, x).members);
  std::vector<std::vector<Bits>> sieves(static_cast<std::size_t>(n));
  for (ObjId x = 0; x < n; ++x) sieves[x] = all_sieves(c, x);

  bool changed = true;
  while (changed) {
    changed = false;
    for (ObjId x = 0; x < n; ++x) {
      const std::vector<Bits> snapshot(cov[x].begin(), cov[x].end());
      for (const auto& b : snapshot) {
        const Sieve s{x, b};
        for (MorId h : c.morphisms_into(x))
          if (cov[c.source(h)].insert(pullback_sieve(c, s, h).members).second) changed = true;
      }
    }
    for (ObjId x = 0; x < n; ++x) {
      const auto minimal = minimal_members(cov[x]);
      for (const auto& b : sieves[x]) {
        if (cov[x].count(b)) continue;
        const Sieve s{x, b};
        for (const auto& r : minimal)
          if (locally_covering(c, cov, s, r)) {
            cov[x].insert(b);
            changed = true;
            break;
          }
      }
    }
  }
  return Topology(cp, std::move(cov));
}

}  // namespace

TopologyAxiomReport check_topology_axioms(const Topology& t) {
  const auto& c = *t.category();
  const int n = c.object_count();
  std::vector<std::set<Bits>> cov(static_cast<std::size_t>(n));
  for (ObjId x = 0; x < n; ++x) cov[x] = t.covering(x);

  for (ObjId x = 0; x < n; ++x)
    if (!t.covers(maximal_sieve(c, x)))
      return {false, "maximal", c.object_name(x), describe_sieve(c, maximal_sieve(c, x)), ""};
  for (ObjId x = 0; x < n; ++x)
    for (const auto& b : t.covering(x)) {
      const Sieve s{x, b};
      for (MorId h : c.morphisms_into(x)) {
        if (!t.covers(pullback_sieve(c, s, h)))
          return {false, "stability", c.object_name(x), describe_sieve(c, s),
                  "pullback along " + c.morphism(h).name + " is not covering"};
      }
    }
  for (ObjId x = 0; x < n; ++x) {
    // A covering R that witnesses local character can be shrunk to a
    // minimal covering sieve, so minimal ones suffice.
    const auto minimal = minimal_members(t.covering(x));
    for (const auto& b : all_sieves(c, x)) {
      if (t.covering(x).count(b)) continue;
      const Sieve s{x, b};
      for (const auto& r : minimal)
        if (locally_covering(c, cov, s, r))
          return {false, "local-character", c.object_name(x), describe_sieve(c, s),
                  "locally covering along " + describe_sieve(c, Sieve{x, r})};
    }
  }
  return {};
}

Topology generate_topology(const CategoryPtr& c, const Pretopology& p) {
  validate_pretopology(*c, p);
  std::vector<std::set<Bits>> cov(static_cast<std::size_t>(c->object_count()));
  for (const auto& fam : p.families)
    cov[fam.target].insert(sieve_generated(*c, fam.target, fam.members).members);
  return saturate(c, std::move(cov));
}

Topology minimal_topology(const CategoryPtr& c) { return generate_topology(c, Pretopology{}); }

Topology join_topologies(const Topology& a, const Topology& b) {
  const auto& ca = *a.category();
  const auto& cb = *b.category();
  if (ca.object_names() != cb.object_names() || ca.morphism_count() != cb.morphism_count())
    throw InputError("cannot join topologies on different categories");
  std::vector<std::set<Bits>> cov(static_cast<std::size_t>(ca.object_count()));
  for (ObjId x = 0; x < ca.object_count(); ++x) {
    cov[x] = a.covering(x);
    cov[x].insert(b.covering(x).begin(), b.covering(x).end());
  }
  return saturate(a.category(), std::move(cov));
}

bool is_covering(const Topology& t, ObjId target, std::span<const MorId> family) {
  return t.covers(sieve_generated(*t.category(), target, family));
}

bool refines(const FiniteCategory& c, std::span<const MorId> a, std::span<const MorId> b) {
  for (MorId f : a) {
    bool found = false;
    for (MorId g : b) {
      if (c.target(g) != c.target(f))
        throw InputError("refinement compares families with different targets");
      for (MorId k : c.hom(c.source(f), c.source(g)))
        if (*c.compose(g, k) == f) {
          found = true;
          break;
        }
      if (found) break;
    }
    if (!found) return false;
  }
  return true;
}

Site make_site(const CategoryPtr& c, Pretopology p) {
  Topology t = generate_topology(c, p);
  return Site{c, std::move(p), std::move(t)};
}

// --------------------------------------------------------- FiniteSpace

FiniteSpace::FiniteSpace(std::vector<std::string> points,
                         const std::vector<std::pair<std::string, std::string>>& specializations)
    : order_(std::move(points), specializations) {
  if (size() > kMaxPoints) throw InputError("finite spaces are limited to 20 points");
}

FiniteSpace::FiniteSpace(std::vector<std::string> points,
                         const std::vector<std::pair<int, int>>& specializations)
    : order_(std::move(points), specializations) {
  if (size() > kMaxPoints) throw InputError("finite spaces are limited to 20 points");
}

PointSet FiniteSpace::minimal_open(int x) const {
  PointSet s = 0;
  for (int z = 0; z < size(); ++z)
    if (specializes(z, x)) s |= PointSet{1} << z;
  return s;
}

PointSet FiniteSpace::closure(int x) const {
  PointSet s = 0;
  for (int y = 0; y < size(); ++y)
    if (specializes(x, y)) s |= PointSet{1} << y;
  return s;
}

bool FiniteSpace::is_open(PointSet s) const {
  for (int x = 0; x < size(); ++x)
    if ((s >> x & 1U) && (minimal_open(x) & ~s) != 0) return false;
  return true;
}

bool FiniteSpace::is_closed(PointSet s) const { return is_open(all() & ~s); }

std::vector<PointSet> FiniteSpace::opens() const {
  std::vector<PointSet> out;
  for (PointSet s = 0; s <= all(); ++s)
    if (is_open(s)) out.push_back(s);
  return out;
}

std::vector<PointSet> FiniteSpace::closed_sets() const {
  std::vector<PointSet> out;
  for (PointSet s = 0; s <= all(); ++s)
    if (is_closed(s)) out.push_back(s);
  return out;
}

std::vector<std::pair<int, int>> FiniteSpace::specialization_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < size(); ++x)
    for (int y = 0; y < size(); ++y)
      if (x != y && specializes(x, y)) out.emplace_back(x, y);
  return out;
}

FiniteSpace FiniteSpace::opposite() const {
  std::vector<std::pair<int, int>> rev;
  for (auto [x, y] : specialization_pairs()) rev.emplace_back(y, x);
  return FiniteSpace(order_.names(), rev);
}

FiniteSpace FiniteSpace::subspace(PointSet s) const {
  std::vector<int> keep;
  for (int x = 0; x < size(); ++x)
    if (s >> x & 1U) keep.push_back(x);
  std::vector<std::string> names;
  for (int x : keep) names.push_back(name(x));
  std::vector<std::pair<int, int>> rel;
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j)
      if (i != j && specializes(keep[i], keep[j]))
        rel.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return FiniteSpace(std::move(names), rel);
}

bool FiniteSpace::is_irreducible() const {
  for (int x = 0; x < size(); ++x)
    if (closure(x) == all()) return true;
  return false;
}

std::string FiniteSpace::set_name(PointSet s) const {
  std::string out = "{";
  bool first = true;
  for (int x = 0; x < size(); ++x)
    if (s >> x & 1U) {
      if (!first) out += ",";
      out += name(x);
      first = false;
    }
  return out + "}";
}

// ----------------------------------------------------------- space sites

ObjId SpaceSite::object_of(PointSet s) const {
  for (std::size_t i = 0; i < object_points.size(); ++i)
    if (object_points[i] == s) return static_cast<ObjId>(i);
  throw InputError("point set " + space.set_name(s) + " is not an object of this site");
}

namespace {

/// Site on a family of point sets ordered by inclusion, generated by the
/// families {basis(x) ∩ T -> T : x in T}.
SpaceSite lattice_site(const FiniteSpace& space, std::vector<PointSet> sets,
                       const std::vector<PointSet>& basis) {
  std::stable_sort(sets.begin(), sets.end(), [](PointSet a, PointSet b) {
    const int ca = std::popcount(a), cb = std::popcount(b);
    return ca != cb ? ca < cb : a < b;
  });
  std::vector<std::string> names;
  for (auto s : sets) names.push_back(space.set_name(s));
  std::vector<std::pair<int, int>> leq;
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = 0; j < sets.size(); ++j)
      if (i != j && (sets[i] & ~sets[j]) == 0)
        leq.emplace_back(static_cast<int>(i), static_cast<int>(j));
  auto cat = std::make_shared<const FiniteCategory>(
      FiniteCategory::from_poset(Poset(names, leq)));

  SpaceSite out;
  out.space = space;
  out.object_points = sets;
  auto index_of = [&](PointSet s) {
    auto it = std::find(sets.begin(), sets.end(), s);
    if (it == sets.end()) throw InputError("basis set is not an object of the site");
    return static_cast<ObjId>(it - sets.begin());
  };
  Pretopology p;
  for (std::size_t t = 0; t < sets.size(); ++t) {
    CoveringFamily fam{static_cast<ObjId>(t), {}};
    std::vector<ObjId> seen;
    for (int x = 0; x < space.size(); ++x) {
      if (!(sets[t] >> x & 1U)) continue;
      const ObjId piece = index_of(basis[x] & sets[t]);
      if (std::find(seen.begin(), seen.end(), piece) != seen.end()) continue;
      seen.push_back(piece);
      fam.members.push_back(cat->hom(piece, static_cast<ObjId>(t)).front());
    }
    p.families.push_back(std::move(fam));
  }
  for (int x = 0; x < space.size(); ++x) {
    const PointSet b = basis[x];
    auto it = std::find(sets.begin(), sets.end(), b);
    out.minimal_objects.push_back(it == sets.end() ? -1 : static_cast<ObjId>(it - sets.begin()));
  }
  out.site = make_site(cat, std::move(p));
  return out;
}

}  // namespace

SpaceSite zariski_site(const FiniteSpace& s) {
  std::vector<PointSet> basis;
  for (int x = 0; x < s.size(); ++x) basis.push_back(s.minimal_open(x));
  return lattice_site(s, s.opens(), basis);
}

SpaceSite closed_cover_site(const FiniteSpace& s) {
  std::vector<PointSet> basis;
  for (int x = 0; x < s.size(); ++x) basis.push_back(s.closure(x));
  return lattice_site(s, s.closed_sets(), basis);
}

SpaceSite subset_site(const FiniteSpace& s, SubsetCover kind) {
  std::vector<PointSet> basis;
  for (int x = 0; x < s.size(); ++x)
    basis.push_back(kind == SubsetCover::Open ? s.minimal_open(x) : s.closure(x));
  std::vector<PointSet> sets;
  for (PointSet t = 0; t <= s.all(); ++t) sets.push_back(t);
  return lattice_site(s, std::move(sets), basis);
}

}  // namespace sitelab
