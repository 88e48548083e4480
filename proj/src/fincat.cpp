#include "sitelab/fincat.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace sitelab {

// ---------------------------------------------------------------- Poset

Poset::Poset(std::vector<std::string> elements,
             const std::vector<std::pair<std::string, std::string>>& leq_pairs)
    : names_(std::move(elements)) {
  leq_.assign(names_.size() * names_.size(), 0);
  for (const auto& [a, b] : leq_pairs) leq_[index(a) * size() + index(b)] = 1;
  close();
}

Poset::Poset(std::vector<std::string> elements,
             const std::vector<std::pair<int, int>>& leq_pairs)
    : names_(std::move(elements)) {
  leq_.assign(names_.size() * names_.size(), 0);
  for (const auto& [a, b] : leq_pairs) {
    if (a < 0 || b < 0 || a >= size() || b >= size())
      throw InputError("poset relation index out of range");
    leq_[a * size() + b] = 1;
  }
  close();
}

void Poset::close() {
  const int n = size();
  {
    std::set<std::string> seen(names_.begin(), names_.end());
    if (seen.size() != names_.size()) throw InputError("duplicate poset element name");
  }
  for (int i = 0; i < n; ++i) leq_[i * n + i] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (leq_[i * n + k])
        for (int j = 0; j < n; ++j)
          if (leq_[k * n + j]) leq_[i * n + j] = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (leq_[i * n + j] && leq_[j * n + i])
        throw InputError("relation is not antisymmetric: " + names_[i] + " and " +
                         names_[j]);
}

std::optional<int> Poset::find(std::string_view name) const {
  for (int i = 0; i < size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

int Poset::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw InputError("unknown poset element '" + std::string(name) + "'");
}

std::optional<int> Poset::meet(int a, int b) const {
  std::optional<int> best;
  for (int c = 0; c < size(); ++c) {
    if (!leq(c, a) || !leq(c, b)) continue;
    if (!best || leq(*best, c)) best = c;
  }
  if (!best) return std::nullopt;
  for (int c = 0; c < size(); ++c)
    if (leq(c, a) && leq(c, b) && !leq(c, *best)) return std::nullopt;
  return best;
}

bool is_codirected_poset(const Poset& p) {
  if (p.size() == 0) return false;
  for (int i = 0; i < p.size(); ++i)
    for (int j = i + 1; j < p.size(); ++j) {
      bool found = false;
      for (int k = 0; k < p.size() && !found; ++k) found = p.leq(k, i) && p.leq(k, j);
      if (!found) return false;
    }
  return true;
}

// ------------------------------------------------------- FiniteCategory

FiniteCategory::FiniteCategory(std::vector<std::string> objects,
                               std::vector<Morphism> morphisms,
                               std::vector<MorId> identities,
                               const std::vector<std::array<MorId, 3>>& composition)
    : objects_(std::move(objects)),
      morphisms_(std::move(morphisms)),
      identities_(std::move(identities)) {
  const auto n_obj = objects_.size();
  const auto n_mor = morphisms_.size();
  for (std::size_t i = 0; i < n_obj; ++i)
    if (!object_index_.emplace(objects_[i], static_cast<ObjId>(i)).second)
      throw InputError("duplicate object name '" + objects_[i] + "'");
  for (std::size_t i = 0; i < n_mor; ++i) {
    const auto& m = morphisms_[i];
    if (m.source < 0 || m.target < 0 || m.source >= static_cast<int>(n_obj) ||
        m.target >= static_cast<int>(n_obj))
      throw InputError("morphism '" + m.name + "' has an unknown endpoint");
    if (!morphism_index_.emplace(m.name, static_cast<MorId>(i)).second)
      throw InputError("duplicate morphism name '" + m.name + "'");
  }
  if (identities_.size() != n_obj) throw InputError("identity map must cover every object");
  for (MorId id : identities_)
    if (id < 0 || id >= static_cast<MorId>(n_mor))
      throw InputError("identity refers to an unknown morphism");

  table_.assign(n_mor * n_mor, -1);
  auto put = [&](MorId g, MorId f, MorId gf, bool explicit_entry) {
    auto& slot = table_[static_cast<std::size_t>(g) * n_mor + f];
    if (slot < 0) {
      slot = gf;
    } else if (slot != gf && explicit_entry) {
      conflicts_.push_back({g, f, slot, gf});
    }
  };
  for (const auto& [g, f, gf] : composition) {
    for (MorId m : {g, f, gf})
      if (m < 0 || m >= static_cast<MorId>(n_mor))
        throw InputError("composition entry refers to an unknown morphism");
    put(g, f, gf, true);
  }
  // Complete identity compositions that were left implicit.
  for (std::size_t f = 0; f < n_mor; ++f) {
    const MorId fi = static_cast<MorId>(f);
    const MorId id_t = identities_[morphisms_[f].target];
    const MorId id_s = identities_[morphisms_[f].source];
    if (morphisms_[id_t].source == morphisms_[f].target &&
        morphisms_[id_t].target == morphisms_[f].target)
      put(id_t, fi, fi, false);
    if (morphisms_[id_s].source == morphisms_[f].source &&
        morphisms_[id_s].target == morphisms_[f].source)
      put(fi, id_s, fi, false);
  }

  into_.assign(n_obj, {});
  from_.assign(n_obj, {});
  for (std::size_t i = 0; i < n_mor; ++i) {
    into_[morphisms_[i].target].push_back(static_cast<MorId>(i));
    from_[morphisms_[i].source].push_back(static_cast<MorId>(i));
  }
}

FiniteCategory FiniteCategory::from_poset(const Poset& p) {
  const int n = p.size();
  std::vector<Morphism> mors;
  std::vector<int> id_of(static_cast<std::size_t>(n * n), -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (p.leq(a, b)) {
        id_of[a * n + b] = static_cast<int>(mors.size());
        mors.push_back({p.name(a) + "<=" + p.name(b), a, b});
      }
  std::vector<MorId> ids(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) ids[a] = id_of[a * n + a];
  std::vector<std::array<MorId, 3>> comp;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!p.leq(a, b)) continue;
      for (int c = 0; c < n; ++c)
        if (p.leq(b, c)) comp.push_back({id_of[b * n + c], id_of[a * n + b], id_of[a * n + c]});
    }
  return FiniteCategory(p.names(), std::move(mors), std::move(ids), comp);
}

std::optional<ObjId> FiniteCategory::find_object(std::string_view name) const {
  auto it = object_index_.find(std::string(name));
  if (it == object_index_.end()) return std::nullopt;
  return it->second;
}

ObjId FiniteCategory::object_id(std::string_view name) const {
  if (auto x = find_object(name)) return *x;
  throw InputError("unknown object '" + std::string(name) + "'");
}

std::optional<MorId> FiniteCategory::find_morphism(std::string_view name) const {
  auto it = morphism_index_.find(std::string(name));
  if (it == morphism_index_.end()) return std::nullopt;
  return it->second;
}

MorId FiniteCategory::morphism_id(std::string_view name) const {
  if (auto m = find_morphism(name)) return *m;
  throw InputError("unknown morphism '" + std::string(name) + "'");
}

bool FiniteCategory::is_identity(MorId m) const {
  return identities_[morphisms_[m].source] == m;
}

MorId FiniteCategory::compose_checked(MorId g, MorId f) const {
  if (auto r = compose(g, f)) return *r;
  throw InputError("morphisms '" + morphisms_[g].name + "' and '" + morphisms_[f].name +
                   "' are not composable");
}

std::vector<MorId> FiniteCategory::hom(ObjId a, ObjId b) const {
  std::vector<MorId> out;
  for (MorId m : from_[a])
    if (morphisms_[m].target == b) out.push_back(m);
  return out;
}

bool FiniteCategory::is_poset() const {
  for (ObjId a = 0; a < object_count(); ++a)
    for (ObjId b = 0; b < object_count(); ++b) {
      const auto ab = hom(a, b);
      if (ab.size() > 1) return false;
      if (a != b && !ab.empty() && !hom(b, a).empty()) return false;
    }
  return true;
}

// ----------------------------------------------------------- validation

ValidationReport validate_category(const FiniteCategory& c) {
  auto fail = [](std::string axiom, std::vector<std::string> w) {
    return ValidationReport{false, std::move(axiom), std::move(w)};
  };
  const int nm = c.morphism_count();
  auto nm_of = [&](MorId m) { return c.morphism(m).name; };

  for (ObjId x = 0; x < c.object_count(); ++x) {
    const MorId id = c.identity(x);
    if (c.source(id) != x || c.target(id) != x)
      return fail("identity", {c.object_name(x), nm_of(id)});
  }
  if (!c.composition_conflicts().empty()) {
    const auto& k = c.composition_conflicts().front();
    return fail("composition-conflict", {nm_of(k[0]), nm_of(k[1]), nm_of(k[2]), nm_of(k[3])});
  }
  for (MorId g = 0; g < nm; ++g)
    for (MorId f = 0; f < nm; ++f) {
      const bool composable = c.source(g) == c.target(f);
      const auto gf = c.compose(g, f);
      if (composable && !gf) return fail("composition-total", {nm_of(g), nm_of(f)});
      if (!composable && gf) return fail("composition-domain", {nm_of(g), nm_of(f)});
      if (gf && (c.source(*gf) != c.source(f) || c.target(*gf) != c.target(g)))
        return fail("composition-typing", {nm_of(g), nm_of(f), nm_of(*gf)});
    }
  for (MorId f = 0; f < nm; ++f) {
    if (*c.compose(c.identity(c.target(f)), f) != f)
      return fail("identity-law", {nm_of(c.identity(c.target(f))), nm_of(f)});
    if (*c.compose(f, c.identity(c.source(f))) != f)
      return fail("identity-law", {nm_of(f), nm_of(c.identity(c.source(f)))});
  }
  for (MorId f = 0; f < nm; ++f)
    for (MorId g : c.morphisms_from(c.target(f)))
      for (MorId h : c.morphisms_from(c.target(g))) {
        const MorId left = *c.compose(h, *c.compose(g, f));
        const MorId right = *c.compose(*c.compose(h, g), f);
        if (left != right) return fail("associativity", {nm_of(h), nm_of(g), nm_of(f)});
      }
  return {};
}

ValidationReport validate_functor(const FunctorData& u) {
  const auto& s = *u.source;
  const auto& t = *u.target;
  auto fail = [](std::string axiom, std::vector<std::string> w) {
    return ValidationReport{false, std::move(axiom), std::move(w)};
  };
  if (static_cast<int>(u.object_map.size()) != s.object_count() ||
      static_cast<int>(u.morphism_map.size()) != s.morphism_count())
    return fail("functor-shape", {});
  for (MorId m = 0; m < s.morphism_count(); ++m) {
    const MorId um = u.morphism_map[m];
    if (t.source(um) != u.object_map[s.source(m)] || t.target(um) != u.object_map[s.target(m)])
      return fail("functor-typing", {s.morphism(m).name, t.morphism(um).name});
  }
  for (ObjId x = 0; x < s.object_count(); ++x)
    if (u.morphism_map[s.identity(x)] != t.identity(u.object_map[x]))
      return fail("functor-identity", {s.object_name(x)});
  for (MorId f = 0; f < s.morphism_count(); ++f)
    for (MorId g : s.morphisms_from(s.target(f))) {
      const MorId lhs = u.morphism_map[*s.compose(g, f)];
      const MorId rhs = *t.compose(u.morphism_map[g], u.morphism_map[f]);
      if (lhs != rhs) return fail("functor-composition", {s.morphism(g).name, s.morphism(f).name});
    }
  return {};
}

FunctorData identity_functor(const CategoryPtr& c) {
  FunctorData u{c, c, {}, {}};
  for (ObjId x = 0; x < c->object_count(); ++x) u.object_map.push_back(x);
  for (MorId m = 0; m < c->morphism_count(); ++m) u.morphism_map.push_back(m);
  return u;
}

// --------------------------------------------------------------- sieves

Sieve empty_sieve(const FiniteCategory& c, ObjId x) {
  return {x, Bits(static_cast<std::size_t>(c.morphism_count()))};
}

Sieve maximal_sieve(const FiniteCategory& c, ObjId x) {
  Sieve s = empty_sieve(c, x);
  for (MorId m : c.morphisms_into(x)) s.members.set(static_cast<std::size_t>(m));
  return s;
}

Sieve sieve_generated(const FiniteCategory& c, ObjId x, std::span<const MorId> family) {
  Sieve s = empty_sieve(c, x);
  for (MorId f : family) {
    if (c.target(f) != x)
      throw InputError("family member '" + c.morphism(f).name + "' does not have target '" +
                       c.object_name(x) + "'");
    for (MorId g : c.morphisms_into(c.source(f)))
      s.members.set(static_cast<std::size_t>(*c.compose(f, g)));
  }
  return s;
}

Sieve pullback_sieve(const FiniteCategory& c, const Sieve& s, MorId h) {
  if (c.target(h) != s.target)
    throw InputError("pullback morphism '" + c.morphism(h).name + "' does not land on the sieve's target");
  Sieve out = empty_sieve(c, c.source(h));
  for (MorId g : c.morphisms_into(c.source(h)))
    if (s.contains(*c.compose(h, g))) out.members.set(static_cast<std::size_t>(g));
  return out;
}

bool is_sieve(const FiniteCategory& c, const Sieve& s) {
  bool ok = true;
  s.members.for_each([&](std::size_t i) {
    const MorId f = static_cast<MorId>(i);
    if (c.target(f) != s.target) ok = false;
    if (!ok) return;
    for (MorId g : c.morphisms_into(c.source(f)))
      if (!s.contains(*c.compose(f, g))) ok = false;
  });
  return ok;
}

std::vector<Bits> all_sieves(const FiniteCategory& c, ObjId x) {
  std::vector<Bits> principal;
  for (MorId f : c.morphisms_into(x)) {
    const MorId fam[] = {f};
    principal.push_back(sieve_generated(c, x, fam).members);
  }
  std::set<Bits> seen;
  std::deque<Bits> queue;
  Bits empty(static_cast<std::size_t>(c.morphism_count()));
  seen.insert(empty);
  queue.push_back(empty);
  while (!queue.empty()) {
    Bits s = std::move(queue.front());
    queue.pop_front();
    for (const auto& p : principal) {
      if (p.subset_of(s)) continue;
      Bits u = s | p;
      if (seen.insert(u).second) queue.push_back(std::move(u));
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<MorId> sieve_members(const Sieve& s) { return s.members.indices(); }

std::vector<MorId> sieve_generators(const FiniteCategory& c, const Sieve& s) {
  const auto members = sieve_members(s);
  // f = via∘g for some g: source(f) -> source(via)
  auto factors_through = [&](MorId f, MorId via) {
    for (MorId g : c.morphisms_from(c.source(f)))
      if (c.target(g) == c.source(via) && *c.compose(via, g) == f) return true;
    return false;
  };
  std::vector<MorId> out;
  for (MorId f : members) {
    bool dominated = false;
    for (MorId h : members) {
      if (h == f) continue;
      if (factors_through(f, h) && !factors_through(h, f)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(f);
  }
  return out;
}

}  // namespace sitelab
