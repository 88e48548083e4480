#include "sitelab/sheafkit.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace sitelab {

// ---------------------------------------------------------- SetPresheaf

SetPresheaf::SetPresheaf(CategoryPtr c, std::vector<std::vector<std::string>> elements,
                         std::vector<std::vector<int>> restrictions)
    : category_(std::move(c)), elements_(std::move(elements)), restrictions_(std::move(restrictions)) {
  const auto& cat = *category_;
  if (static_cast<int>(elements_.size()) != cat.object_count())
    throw InputError("presheaf must assign a set to every object");
  if (static_cast<int>(restrictions_.size()) != cat.morphism_count())
    throw InputError("presheaf must assign a restriction to every morphism");
  for (ObjId x = 0; x < cat.object_count(); ++x) {
    std::set<std::string> seen(elements_[x].begin(), elements_[x].end());
    if (seen.size() != elements_[x].size())
      throw InputError("duplicate element label on object '" + cat.object_name(x) + "'");
  }
  for (MorId f = 0; f < cat.morphism_count(); ++f) {
    const auto& r = restrictions_[f];
    if (static_cast<int>(r.size()) != size(cat.target(f)))
      throw InputError("restriction along '" + cat.morphism(f).name + "' has the wrong length");
    for (int v : r)
      if (v < 0 || v >= size(cat.source(f)))
        throw InputError("restriction along '" + cat.morphism(f).name + "' leaves its codomain");
  }
}

std::optional<int> SetPresheaf::find(ObjId x, const std::string& label) const {
  const auto& e = elements_[x];
  auto it = std::find(e.begin(), e.end(), label);
  if (it == e.end()) return std::nullopt;
  return static_cast<int>(it - e.begin());
}

ValidationReport validate_presheaf(const SetPresheaf& f) {
  const auto& c = *f.category();
  for (ObjId x = 0; x < c.object_count(); ++x)
    for (int i = 0; i < f.size(x); ++i)
      if (f.restrict(c.identity(x), i) != i)
        return {false, "presheaf-identity", {c.object_name(x), f.label(x, i)}};
  for (MorId a = 0; a < c.morphism_count(); ++a)
    for (MorId b : c.morphisms_into(c.source(a))) {
      const MorId ab = *c.compose(a, b);
      for (int i = 0; i < f.size(c.target(a)); ++i)
        if (f.restrict(ab, i) != f.restrict(b, f.restrict(a, i)))
          return {false, "presheaf-composition",
                  {c.morphism(a).name, c.morphism(b).name, f.label(c.target(a), i)}};
    }
  return {};
}

SetPresheaf constant_presheaf(const CategoryPtr& c, const std::vector<std::string>& values) {
  std::vector<std::vector<std::string>> el(static_cast<std::size_t>(c->object_count()), values);
  std::vector<int> id(values.size());
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<int>> res(static_cast<std::size_t>(c->morphism_count()), id);
  return SetPresheaf(c, std::move(el), std::move(res));
}

SetPresheaf terminal_presheaf(const CategoryPtr& c) { return constant_presheaf(c, {"*"}); }

SetPresheaf representable(const CategoryPtr& c, ObjId x) {
  std::vector<std::vector<std::string>> el;
  std::vector<std::vector<MorId>> homs;
  for (ObjId y = 0; y < c->object_count(); ++y) {
    homs.push_back(c->hom(y, x));
    std::vector<std::string> names;
    for (MorId m : homs.back()) names.push_back(c->morphism(m).name);
    el.push_back(std::move(names));
  }
  std::vector<std::vector<int>> res;
  for (MorId f = 0; f < c->morphism_count(); ++f) {
    const auto& from = homs[c->target(f)];
    const auto& to = homs[c->source(f)];
    std::vector<int> r;
    for (MorId g : from) {
      const MorId gf = *c->compose(g, f);
      r.push_back(static_cast<int>(std::find(to.begin(), to.end(), gf) - to.begin()));
    }
    res.push_back(std::move(r));
  }
  return SetPresheaf(c, std::move(el), std::move(res));
}

SetPresheaf product(const SetPresheaf& a, const SetPresheaf& b) {
  const auto& c = a.category();
  std::vector<std::vector<std::string>> el;
  for (ObjId x = 0; x < c->object_count(); ++x) {
    std::vector<std::string> names;
    for (int i = 0; i < a.size(x); ++i)
      for (int j = 0; j < b.size(x); ++j) names.push_back("(" + a.label(x, i) + "," + b.label(x, j) + ")");
    el.push_back(std::move(names));
  }
  std::vector<std::vector<int>> res;
  for (MorId f = 0; f < c->morphism_count(); ++f) {
    const ObjId t = c->target(f), s = c->source(f);
    std::vector<int> r;
    for (int i = 0; i < a.size(t); ++i)
      for (int j = 0; j < b.size(t); ++j) r.push_back(a.restrict(f, i) * b.size(s) + b.restrict(f, j));
    res.push_back(std::move(r));
  }
  return SetPresheaf(c, std::move(el), std::move(res));
}

// ------------------------------------------------------------ morphisms

ValidationReport validate_morphism(const SheafMorphism& m) {
  const auto& c = *m.source->category();
  const auto& f = *m.source;
  const auto& g = *m.target;
  if (static_cast<int>(m.components.size()) != c.object_count())
    return {false, "morphism-shape", {}};
  for (ObjId x = 0; x < c.object_count(); ++x) {
    if (static_cast<int>(m.components[x].size()) != f.size(x))
      return {false, "morphism-shape", {c.object_name(x)}};
    for (int v : m.components[x])
      if (v < 0 || v >= g.size(x)) return {false, "morphism-range", {c.object_name(x)}};
  }
  for (MorId h = 0; h < c.morphism_count(); ++h) {
    const ObjId t = c.target(h), s = c.source(h);
    for (int i = 0; i < f.size(t); ++i)
      if (m.components[s][f.restrict(h, i)] != g.restrict(h, m.components[t][i]))
        return {false, "naturality", {c.morphism(h).name, f.label(t, i)}};
  }
  return {};
}

SheafMorphism identity_morphism(const PresheafPtr& f) {
  SheafMorphism m{f, f, {}};
  for (ObjId x = 0; x < f->category()->object_count(); ++x) {
    std::vector<int> id(static_cast<std::size_t>(f->size(x)));
    std::iota(id.begin(), id.end(), 0);
    m.components.push_back(std::move(id));
  }
  return m;
}

SheafMorphism compose(const SheafMorphism& g, const SheafMorphism& f) {
  SheafMorphism m{f.source, g.target, {}};
  for (std::size_t x = 0; x < f.components.size(); ++x) {
    std::vector<int> comp;
    for (int v : f.components[x]) comp.push_back(g.components[x][v]);
    m.components.push_back(std::move(comp));
  }
  return m;
}

SheafMorphism representable_morphism(MorId f, const PresheafPtr& yx, const PresheafPtr& yy) {
  const auto& c = *yx->category();
  SheafMorphism m{yx, yy, {}};
  for (ObjId z = 0; z < c.object_count(); ++z) {
    std::vector<int> comp;
    for (int i = 0; i < yx->size(z); ++i) {
      const MorId g = c.morphism_id(yx->label(z, i));
      const MorId fg = *c.compose(f, g);
      comp.push_back(*yy->find(z, c.morphism(fg).name));
    }
    m.components.push_back(std::move(comp));
  }
  return m;
}

SheafMorphism projection(const PresheafPtr& prod, const PresheafPtr& factor, int which) {
  // prod elements are indexed i * |B| + j for factors A, B
  const auto& c = *prod->category();
  SheafMorphism m{prod, factor, {}};
  for (ObjId x = 0; x < c.object_count(); ++x) {
    std::vector<int> comp;
    const int n = prod->size(x);
    const int fs = factor->size(x);
    const int other = fs == 0 ? 0 : n / fs;
    for (int k = 0; k < n; ++k) comp.push_back(which == 0 ? k / other : k % fs);
    m.components.push_back(std::move(comp));
  }
  return m;
}

Equalizer equalizer(const SheafMorphism& f, const SheafMorphism& g) {
  const auto& src = *f.source;
  const auto& c = src.category();
  std::vector<std::vector<int>> keep;
  std::vector<std::vector<std::string>> el;
  for (ObjId x = 0; x < c->object_count(); ++x) {
    std::vector<int> k;
    std::vector<std::string> names;
    for (int i = 0; i < src.size(x); ++i)
      if (f.components[x][i] == g.components[x][i]) {
        k.push_back(i);
        names.push_back(src.label(x, i));
      }
    keep.push_back(std::move(k));
    el.push_back(std::move(names));
  }
  std::vector<std::vector<int>> res;
  for (MorId h = 0; h < c->morphism_count(); ++h) {
    const auto& to = keep[c->source(h)];
    std::vector<int> r;
    for (int i : keep[c->target(h)]) {
      const int v = src.restrict(h, i);
      r.push_back(static_cast<int>(std::find(to.begin(), to.end(), v) - to.begin()));
    }
    res.push_back(std::move(r));
  }
  auto e = std::make_shared<const SetPresheaf>(c, std::move(el), std::move(res));
  return {e, SheafMorphism{e, f.source, keep}};
}

// ----------------------------------------------------- matching families

MatchingFamilies matching_families(const SetPresheaf& f, const Sieve& s) {
  const auto& c = *f.category();
  MatchingFamilies out;
  out.sieve = s;
  out.members = sieve_members(s);
  const int n = static_cast<int>(out.members.size());
  std::vector<int> pos(static_cast<std::size_t>(c.morphism_count()), -1);
  for (int k = 0; k < n; ++k) pos[out.members[k]] = k;

  // Larger domains first: their choices force the most entries.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return c.morphisms_into(c.source(out.members[a])).size() >
           c.morphisms_into(c.source(out.members[b])).size();
  });

  std::vector<int> value(static_cast<std::size_t>(n), -1);
  std::vector<int> trail;

  auto assign = [&](int k, int v) -> bool {
    value[k] = v;
    trail.push_back(k);
    const MorId fm = out.members[k];
    for (MorId g : c.morphisms_into(c.source(fm))) {
      const int h = pos[*c.compose(fm, g)];
      const int w = f.restrict(g, v);
      if (value[h] < 0) {
        value[h] = w;
        trail.push_back(h);
      } else if (value[h] != w) {
        return false;
      }
    }
    return true;
  };
  auto undo = [&](std::size_t mark) {
    while (trail.size() > mark) {
      value[trail.back()] = -1;
      trail.pop_back();
    }
  };

  std::function<void(int)> search = [&](int step) {
    while (step < n && value[order[step]] >= 0) ++step;
    if (step == n) {
      out.index.emplace(value, static_cast<int>(out.families.size()));
      out.families.push_back(value);
      return;
    }
    const int k = order[step];
    const int dom_size = f.size(c.source(out.members[k]));
    for (int v = 0; v < dom_size; ++v) {
      const std::size_t mark = trail.size();
      if (assign(k, v)) search(step + 1);
      undo(mark);
    }
  };
  search(0);
  return out;
}

std::vector<int> restrict_to_sieve(const SetPresheaf& f, const MatchingFamilies& mf, int x) {
  std::vector<int> fam;
  fam.reserve(mf.members.size());
  for (MorId m : mf.members) fam.push_back(f.restrict(m, x));
  return fam;
}

// ------------------------------------------------------- plus / sheafify

PlusResult plus_construction(const PresheafPtr& fp, const Topology& t) {
  const auto& f = *fp;
  const auto& cp = f.category();
  const auto& c = *cp;
  const int n = c.object_count();
  PlusResult out;
  std::vector<std::vector<std::string>> el;
  for (ObjId x = 0; x < n; ++x) {
    MatchingFamilies mf = matching_families(f, t.finest_cover(x));
    // Label a family by its values on the generating members; fall back to
    // all members if that is ambiguous.
    const auto gens = sieve_generators(c, mf.sieve);
    std::vector<int> gen_pos;
    for (MorId g : gens)
      gen_pos.push_back(static_cast<int>(std::find(mf.members.begin(), mf.members.end(), g) -
                                         mf.members.begin()));
    auto make_labels = [&](const std::vector<int>& positions) {
      std::vector<std::string> names;
      for (const auto& fam : mf.families) {
        std::string s = "[";
        for (std::size_t i = 0; i < positions.size(); ++i) {
          if (i) s += "|";
          const int k = positions[i];
          s += f.label(c.source(mf.members[k]), fam[k]);
        }
        names.push_back(s + "]");
      }
      return names;
    };
    auto names = make_labels(gen_pos);
    if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) {
      std::vector<int> all(mf.members.size());
      std::iota(all.begin(), all.end(), 0);
      names = make_labels(all);
    }
    el.push_back(std::move(names));
    out.sections.push_back(std::move(mf));
  }

  std::vector<std::vector<int>> res;
  for (MorId h = 0; h < c.morphism_count(); ++h) {
    const auto& from = out.sections[c.target(h)];
    const auto& to = out.sections[c.source(h)];
    std::vector<int> from_pos(static_cast<std::size_t>(c.morphism_count()), -1);
    for (std::size_t k = 0; k < from.members.size(); ++k) from_pos[from.members[k]] = static_cast<int>(k);
    std::vector<int> r;
    for (const auto& fam : from.families) {
      std::vector<int> image;
      for (MorId g : to.members) {
        const int k = from_pos[*c.compose(h, g)];
        if (k < 0) throw std::logic_error("finest cover is not stable under pullback");
        image.push_back(fam[k]);
      }
      r.push_back(to.index.at(image));
    }
    res.push_back(std::move(r));
  }
  out.presheaf = std::make_shared<const SetPresheaf>(cp, std::move(el), std::move(res));

  out.unit = SheafMorphism{fp, out.presheaf, {}};
  for (ObjId x = 0; x < n; ++x) {
    std::vector<int> comp;
    for (int i = 0; i < f.size(x); ++i)
      comp.push_back(out.sections[x].index.at(restrict_to_sieve(f, out.sections[x], i)));
    out.unit.components.push_back(std::move(comp));
  }
  return out;
}

Sheafification sheafify(const PresheafPtr& f, const Topology& t) {
  Sheafification s;
  s.first = plus_construction(f, t);
  s.second = plus_construction(s.first.presheaf, t);
  s.sheaf = s.second.presheaf;
  s.unit = compose(s.second.unit, s.first.unit);
  return s;
}

SheafMorphism plus_morphism(const SheafMorphism& m, const PlusResult& src, const PlusResult& tgt) {
  const auto& c = *m.source->category();
  SheafMorphism out{src.presheaf, tgt.presheaf, {}};
  for (ObjId x = 0; x < c.object_count(); ++x) {
    const auto& a = src.sections[x];
    const auto& b = tgt.sections[x];
    std::vector<int> comp;
    for (const auto& fam : a.families) {
      std::vector<int> image;
      for (std::size_t k = 0; k < a.members.size(); ++k)
        image.push_back(m.components[c.source(a.members[k])][fam[k]]);
      comp.push_back(b.index.at(image));
    }
    out.components.push_back(std::move(comp));
  }
  return out;
}

SheafMorphism sheafify_morphism(const SheafMorphism& m, const Sheafification& src,
                                const Sheafification& tgt) {
  return plus_morphism(plus_morphism(m, src.first, tgt.first), src.second, tgt.second);
}

SheafCheck is_sheaf(const SetPresheaf& f, const Topology& t) {
  const auto& c = *f.category();
  for (ObjId x = 0; x < c.object_count(); ++x)
    for (const auto& s : t.covering_sieves(x)) {
      const auto mf = matching_families(f, s);
      std::set<std::vector<int>> images;
      for (int i = 0; i < f.size(x); ++i) images.insert(restrict_to_sieve(f, mf, i));
      if (static_cast<int>(images.size()) != f.size(x))
        return {false, c.object_name(x), describe_sieve(c, s), "not separated"};
      if (mf.size() != f.size(x))
        return {false, c.object_name(x), describe_sieve(c, s), "missing gluings"};
    }
  return {};
}

MorphismProperty sectionwise_injective(const SheafMorphism& m) {
  const auto& c = *m.source->category();
  for (ObjId x = 0; x < c.object_count(); ++x) {
    std::vector<int> seen(static_cast<std::size_t>(m.target->size(x)), -1);
    for (int i = 0; i < m.source->size(x); ++i) {
      const int v = m.components[x][i];
      if (seen[v] >= 0)
        return {false, c.object_name(x) + ": " + m.source->label(x, seen[v]) + " and " +
                           m.source->label(x, i) + " both map to " + m.target->label(x, v)};
      seen[v] = i;
    }
  }
  return {};
}

MorphismProperty locally_surjective(const SheafMorphism& m, const Topology& t) {
  const auto& c = *m.source->category();
  const auto& g = *m.target;
  std::vector<std::vector<char>> hit;
  for (ObjId x = 0; x < c.object_count(); ++x) {
    std::vector<char> h(static_cast<std::size_t>(g.size(x)), 0);
    for (int v : m.components[x]) h[v] = 1;
    hit.push_back(std::move(h));
  }
  for (ObjId x = 0; x < c.object_count(); ++x)
    for (int s = 0; s < g.size(x); ++s) {
      if (hit[x][s]) continue;
      Sieve lift = empty_sieve(c, x);
      for (MorId f : c.morphisms_into(x))
        if (hit[c.source(f)][g.restrict(f, s)]) lift.members.set(static_cast<std::size_t>(f));
      if (!t.covers(lift))
        return {false, c.object_name(x) + ": section " + g.label(x, s) + " lifts only on " +
                           describe_sieve(c, lift)};
    }
  return {};
}

namespace {
void require_sheaves(const SheafMorphism& m, const Topology& t) {
  if (!is_sheaf(*m.source, t).ok) throw InputError("morphism source is not a sheaf");
  if (!is_sheaf(*m.target, t).ok) throw InputError("morphism target is not a sheaf");
}
}  // namespace

MorphismProperty is_mono(const SheafMorphism& m, const Topology& t) {
  require_sheaves(m, t);
  return sectionwise_injective(m);
}

MorphismProperty is_epi(const SheafMorphism& m, const Topology& t) {
  require_sheaves(m, t);
  return locally_surjective(m, t);
}

MorphismProperty is_iso(const SheafMorphism& m, const Topology& t) {
  require_sheaves(m, t);
  auto mono = sectionwise_injective(m);
  if (!mono.holds) return mono;
  return locally_surjective(m, t);
}

// ---------------------------------------------------------- AbPresheaf

AbPresheaf::AbPresheaf(CategoryPtr c, std::vector<std::vector<int>> orders,
                       std::vector<IntMatrix> restrictions)
    : category_(std::move(c)), orders_(std::move(orders)), restrictions_(std::move(restrictions)) {
  const auto& cat = *category_;
  if (static_cast<int>(orders_.size()) != cat.object_count())
    throw InputError("abelian presheaf must assign a group to every object");
  if (static_cast<int>(restrictions_.size()) != cat.morphism_count())
    throw InputError("abelian presheaf must assign a restriction to every morphism");
  for (const auto& o : orders_)
    for (int n : o)
      if (n < 1) throw InputError("cyclic orders must be positive");
  for (MorId f = 0; f < cat.morphism_count(); ++f) {
    const auto& m = restrictions_[f];
    const auto rows = orders_[cat.source(f)].size();
    const auto cols = orders_[cat.target(f)].size();
    if (m.size() != rows) throw InputError("restriction matrix along '" + cat.morphism(f).name + "' has the wrong row count");
    for (const auto& r : m)
      if (r.size() != cols)
        throw InputError("restriction matrix along '" + cat.morphism(f).name + "' has the wrong column count");
  }
}

long long AbPresheaf::group_order(ObjId x) const {
  long long n = 1;
  for (int k : orders_[x]) n *= k;
  return n;
}

std::vector<long long> AbPresheaf::decode(ObjId x, long long index) const {
  const auto& o = orders_[x];
  std::vector<long long> c(o.size());
  for (std::size_t k = o.size(); k-- > 0;) {
    c[k] = index % o[k];
    index /= o[k];
  }
  return c;
}

long long AbPresheaf::encode(ObjId x, const std::vector<long long>& coords) const {
  const auto& o = orders_[x];
  long long idx = 0;
  for (std::size_t k = 0; k < o.size(); ++k) idx = idx * o[k] + ((coords[k] % o[k]) + o[k]) % o[k];
  return idx;
}

namespace {
std::vector<long long> apply_matrix(const IntMatrix& m, const std::vector<long long>& v,
                                    const std::vector<int>& out_orders) {
  std::vector<long long> out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    long long acc = 0;
    for (std::size_t j = 0; j < v.size(); ++j) acc = (acc + m[i][j] % out_orders[i] * v[j]) % out_orders[i];
    out[i] = (acc + out_orders[i]) % out_orders[i];
  }
  return out;
}

std::string coords_label(const std::vector<long long>& c) {
  if (c.empty()) return "0";
  if (c.size() == 1) return std::to_string(c[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c[i]);
  }
  return s + ")";
}
}  // namespace

std::vector<long long> AbPresheaf::apply(MorId f, const std::vector<long long>& coords) const {
  return apply_matrix(restrictions_[f], coords, orders_[category_->source(f)]);
}

SetPresheaf AbPresheaf::to_set() const {
  const auto& c = *category_;
  std::vector<std::vector<std::string>> el;
  for (ObjId x = 0; x < c.object_count(); ++x) {
    std::vector<std::string> names;
    for (long long i = 0; i < group_order(x); ++i) names.push_back(coords_label(decode(x, i)));
    el.push_back(std::move(names));
  }
  std::vector<std::vector<int>> res;
  for (MorId f = 0; f < c.morphism_count(); ++f) {
    std::vector<int> r;
    for (long long i = 0; i < group_order(c.target(f)); ++i)
      r.push_back(static_cast<int>(encode(c.source(f), apply(f, decode(c.target(f), i)))));
    res.push_back(std::move(r));
  }
  return SetPresheaf(category_, std::move(el), std::move(res));
}

ValidationReport validate_ab_presheaf(const AbPresheaf& a) {
  const auto& c = *a.category();
  for (MorId f = 0; f < c.morphism_count(); ++f) {
    const auto& m = a.restriction(f);
    const auto& out = a.orders(c.source(f));
    const auto& in = a.orders(c.target(f));
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < in.size(); ++j)
        if ((m[i][j] * in[j]) % out[i] != 0)
          return {false, "homomorphism", {c.morphism(f).name, std::to_string(i), std::to_string(j)}};
  }
  return validate_presheaf(a.to_set());
}

SheafMorphism to_set_morphism(const AbMorphism& m, const PresheafPtr& src, const PresheafPtr& tgt) {
  const auto& c = *m.source->category();
  SheafMorphism out{src, tgt, {}};
  for (ObjId x = 0; x < c.object_count(); ++x) {
    std::vector<int> comp;
    for (long long i = 0; i < m.source->group_order(x); ++i) {
      const auto v = apply_matrix(m.components[x], m.source->decode(x, i), m.target->orders(x));
      comp.push_back(static_cast<int>(m.target->encode(x, v)));
    }
    out.components.push_back(std::move(comp));
  }
  return out;
}

// ------------------------------------------------------- site morphisms

namespace {

std::optional<ObjId> poset_meet(const FiniteCategory& c, ObjId a, ObjId b) {
  std::vector<ObjId> lower;
  for (ObjId z = 0; z < c.object_count(); ++z)
    if (!c.hom(z, a).empty() && !c.hom(z, b).empty()) lower.push_back(z);
  for (ObjId z : lower) {
    bool greatest = true;
    for (ObjId w : lower)
      if (c.hom(w, z).empty()) {
        greatest = false;
        break;
      }
    if (greatest) return z;
  }
  return std::nullopt;
}

std::vector<MorId> image_family(const FunctorData& u, const Sieve& s) {
  std::vector<MorId> fam;
  s.members.for_each([&](std::size_t i) { fam.push_back(u.map_morphism(static_cast<MorId>(i))); });
  std::sort(fam.begin(), fam.end());
  fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
  return fam;
}

}  // namespace

ContinuityReport is_continuous(const FunctorData& u, const Topology& src, const Topology& tgt) {
  const auto& cs = *u.source;
  const auto& ct = *u.target;
  if (!cs.is_poset() || !ct.is_poset())
    throw InputError("continuity checks are implemented for poset sites only");
  ContinuityReport rep;
  for (ObjId a = 0; a < cs.object_count() && rep.pullbacks_preserved; ++a)
    for (ObjId b = 0; b < cs.object_count(); ++b) {
      bool cospan = false;
      for (ObjId x = 0; x < cs.object_count() && !cospan; ++x)
        cospan = !cs.hom(a, x).empty() && !cs.hom(b, x).empty();
      if (!cospan) continue;
      const auto m = poset_meet(cs, a, b);
      if (!m) {
        rep.pullbacks_preserved = false;
        rep.pullback_witness = "no pullback of " + cs.object_name(a) + " and " + cs.object_name(b);
        break;
      }
      const auto um = poset_meet(ct, u(a), u(b));
      if (!um || *um != u(*m)) {
        rep.pullbacks_preserved = false;
        rep.pullback_witness = "u does not preserve the pullback of " + cs.object_name(a) + " and " +
                               cs.object_name(b);
        break;
      }
    }
  for (ObjId x = 0; x < cs.object_count(); ++x)
    for (const auto& s : src.covering_sieves(x)) {
      const auto fam = image_family(u, s);
      if (!is_covering(tgt, u(x), fam)) {
        rep.continuous = false;
        rep.witness = "cover " + describe_sieve(cs, s) + " of " + cs.object_name(x) +
                      " maps to non-covering " + describe_family(ct, fam);
        return rep;
      }
    }
  return rep;
}

AlmostCocontinuityReport is_almost_cocontinuous(const FunctorData& u, const Topology& src,
                                                const Topology& tgt) {
  const auto& cs = *u.source;
  const auto& ct = *u.target;
  AlmostCocontinuityReport rep;
  for (ObjId x = 0; x < cs.object_count(); ++x) {
    // Smaller covers of X satisfy either clause more easily, so only the
    // inclusion-minimal ones need to be tried.
    std::vector<Bits> minimal;
    {
      std::vector<Bits> all(src.covering(x).begin(), src.covering(x).end());
      std::stable_sort(all.begin(), all.end(),
                       [](const Bits& a, const Bits& b) { return a.count() < b.count(); });
      for (auto& r : all) {
        bool above = false;
        for (const auto& m : minimal) above = above || m.subset_of(r);
        if (!above) minimal.push_back(std::move(r));
      }
    }
    bool used_empty = false;
    for (const auto& tb : tgt.covering(u(x))) {
      const Sieve target_cover{u(x), tb};
      bool refined = false;
      for (const auto& r : minimal) {
        bool ok = true;
        r.for_each([&](std::size_t i) { ok = ok && target_cover.contains(u.map_morphism(static_cast<MorId>(i))); });
        if (ok) {
          refined = true;
          break;
        }
      }
      if (refined) continue;
      bool emptied = false;
      for (const auto& r : minimal) {
        bool ok = true;
        r.for_each([&](std::size_t i) {
          ok = ok && tgt.covers(empty_sieve(ct, u(cs.source(static_cast<MorId>(i)))));
        });
        if (ok) {
          emptied = true;
          break;
        }
      }
      if (!emptied) {
        rep.holds = false;
        rep.witness = "cover " + describe_sieve(ct, target_cover) + " of u(" + cs.object_name(x) +
                      ") = " + ct.object_name(u(x)) + " is not refined by the image of any cover";
        return rep;
      }
      used_empty = true;
    }
    if (used_empty) rep.empty_clause_objects.push_back(x);
  }
  return rep;
}

namespace {
void require_continuous(const FunctorData& u, const Topology& src, const Topology& tgt) {
  const auto rep = is_continuous(u, src, tgt);
  if (!rep.continuous) throw InputError("direct image needs a continuous functor: " + rep.witness);
}
}  // namespace

SetPresheaf direct_image(const FunctorData& u, const SetPresheaf& g, const Topology& src,
                         const Topology& tgt) {
  require_continuous(u, src, tgt);
  const auto& cs = *u.source;
  std::vector<std::vector<std::string>> el;
  for (ObjId x = 0; x < cs.object_count(); ++x) el.push_back(g.labels(u(x)));
  std::vector<std::vector<int>> res;
  for (MorId f = 0; f < cs.morphism_count(); ++f) res.push_back(g.restriction(u.map_morphism(f)));
  return SetPresheaf(u.source, std::move(el), std::move(res));
}

AbPresheaf direct_image(const FunctorData& u, const AbPresheaf& g, const Topology& src,
                        const Topology& tgt) {
  require_continuous(u, src, tgt);
  const auto& cs = *u.source;
  std::vector<std::vector<int>> orders;
  for (ObjId x = 0; x < cs.object_count(); ++x) orders.push_back(g.orders(u(x)));
  std::vector<IntMatrix> res;
  for (MorId f = 0; f < cs.morphism_count(); ++f) res.push_back(g.restriction(u.map_morphism(f)));
  return AbPresheaf(u.source, std::move(orders), std::move(res));
}

AbMorphism direct_image(const FunctorData& u, const AbMorphism& m, const AbPresheafPtr& src,
                        const AbPresheafPtr& tgt) {
  AbMorphism out{src, tgt, {}};
  for (ObjId x = 0; x < u.source->object_count(); ++x) out.components.push_back(m.components[u(x)]);
  return out;
}

ObjId stalk_object(const SpaceSite& s, int x) {
  const ObjId o = s.minimal_object(x);
  if (o < 0) throw InputError("point has no minimal object in this site");
  return o;
}

std::vector<std::string> stalk(const SetPresheaf& f, const SpaceSite& s, int x) {
  return f.labels(stalk_object(s, x));
}

ExactnessReport check_exactness_along(const FunctorData& u, const std::vector<AbMorphism>& samples,
                                      const Topology& src, const Topology& tgt) {
  ExactnessReport rep;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& m = samples[k];
    auto fs = std::make_shared<const SetPresheaf>(m.source->to_set());
    auto gs = std::make_shared<const SetPresheaf>(m.target->to_set());
    if (!locally_surjective(to_set_morphism(m, fs, gs), tgt).holds)
      throw InputError("sample " + std::to_string(k) + " is not an epimorphism");
    auto pf = std::make_shared<const AbPresheaf>(direct_image(u, *m.source, src, tgt));
    auto pg = std::make_shared<const AbPresheaf>(direct_image(u, *m.target, src, tgt));
    const auto pm = direct_image(u, m, pf, pg);
    auto pfs = std::make_shared<const SetPresheaf>(pf->to_set());
    auto pgs = std::make_shared<const SetPresheaf>(pg->to_set());
    const auto epi = locally_surjective(to_set_morphism(pm, pfs, pgs), src);
    rep.entries.push_back({static_cast<int>(k), epi.holds, epi.witness});
    if (!epi.holds) rep.all_preserved = false;
  }
  return rep;
}

FunctorData subspace_functor(const SpaceSite& whole, const SpaceSite& sub, PointSet sub_points) {
  auto compress = [&](PointSet s) {
    PointSet out = 0;
    int k = 0;
    for (int x = 0; x < whole.space.size(); ++x) {
      if (!(sub_points >> x & 1U)) continue;
      if (s >> x & 1U) out |= PointSet{1} << k;
      ++k;
    }
    return out;
  };
  FunctorData u{whole.site.category, sub.site.category, {}, {}};
  const auto& cw = whole.category();
  const auto& cs = sub.category();
  for (ObjId x = 0; x < cw.object_count(); ++x)
    u.object_map.push_back(sub.object_of(compress(whole.object_points[x])));
  for (MorId f = 0; f < cw.morphism_count(); ++f)
    u.morphism_map.push_back(cs.hom(u.object_map[cw.source(f)], u.object_map[cw.target(f)]).front());
  return u;
}

}  // namespace sitelab
