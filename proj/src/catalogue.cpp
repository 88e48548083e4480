#include "sitelab/catalogue.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "sitelab/stalks.hpp"

namespace sitelab {

namespace {
using Pairs = std::vector<std::pair<std::string, std::string>>;
}

std::vector<NamedSpace> space_catalogue() {
  return {
      {"point", FiniteSpace({"p"}, Pairs{})},
      {"discrete2", FiniteSpace({"a", "b"}, Pairs{})},
      {"sierpinski", FiniteSpace({"eta", "x"}, Pairs{{"eta", "x"}})},
      {"vee", FiniteSpace({"eta", "x", "y"}, Pairs{{"eta", "x"}, {"eta", "y"}})},
      {"chain3", FiniteSpace({"a", "b", "c"}, Pairs{{"a", "b"}, {"b", "c"}})},
      {"wedge", FiniteSpace({"a", "b", "z"}, Pairs{{"a", "z"}, {"b", "z"}})},
      {"discrete3", FiniteSpace({"a", "b", "c"}, Pairs{})},
      {"diamond", FiniteSpace({"eta", "x", "y", "z"}, Pairs{{"eta", "x"}, {"eta", "y"}, {"x", "z"}, {"y", "z"}})},
      {"line", FiniteSpace({"eta", "p", "q", "r"}, Pairs{{"eta", "p"}, {"eta", "q"}, {"eta", "r"}})},
      {"pseudo-circle", FiniteSpace({"a", "b", "c", "d"}, Pairs{{"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}})},
      {"suspended-circle",
       FiniteSpace({"a", "b", "c", "d", "z"},
                   Pairs{{"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}, {"c", "z"}, {"d", "z"}})},
  };
}

FiniteSpace catalogue_space(const std::string& name) {
  for (auto& s : space_catalogue())
    if (s.name == name) return s.space;
  throw InputError("unknown catalogue space '" + name + "'");
}

std::vector<FiniteSpace> spaces_up_to_iso(int n) {
  // Every partial order has a linear extension, so it suffices to enumerate
  // relations with i ≤ j only for i < j and keep the transitive ones.
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  std::set<std::vector<char>> seen;
  std::vector<FiniteSpace> out;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (unsigned long mask = 0; mask < (1UL << slots.size()); ++mask) {
    std::vector<char> rel(static_cast<std::size_t>(n * n), 0);
    for (int i = 0; i < n; ++i) rel[i * n + i] = 1;
    for (std::size_t k = 0; k < slots.size(); ++k)
      if (mask >> k & 1UL) rel[slots[k].first * n + slots[k].second] = 1;
    bool transitive = true;
    for (int i = 0; i < n && transitive; ++i)
      for (int j = 0; j < n && transitive; ++j)
        if (rel[i * n + j])
          for (int k = 0; k < n; ++k)
            if (rel[j * n + k] && !rel[i * n + k]) {
              transitive = false;
              break;
            }
    if (!transitive) continue;
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<char> canon;
    do {
      std::vector<char> r(rel.size());
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[perm[i] * n + perm[j]] = rel[i * n + j];
      if (canon.empty() || r < canon) canon = std::move(r);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!seen.insert(canon).second) continue;
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && rel[i * n + j]) pairs.emplace_back(i, j);
    out.emplace_back(std::move(names), pairs);
  }
  return out;
}

std::vector<FiniteSpace> all_small_spaces(int max_points) {
  std::vector<FiniteSpace> out;
  for (int n = 1; n <= max_points; ++n) {
    auto s = spaces_up_to_iso(n);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

namespace {

std::vector<std::vector<std::string>> all_labels(const SetPresheaf& f) {
  std::vector<std::vector<std::string>> el;
  for (ObjId x = 0; x < f.category()->object_count(); ++x) el.push_back(f.labels(x));
  return el;
}

std::vector<std::vector<int>> all_restrictions(const SetPresheaf& f) {
  std::vector<std::vector<int>> r;
  for (MorId m = 0; m < f.category()->morphism_count(); ++m) r.push_back(f.restriction(m));
  return r;
}

/// Adds a section over `top` restricting everywhere like its first section.
SetPresheaf extra_section(const SetPresheaf& f, ObjId top) {
  const auto& c = *f.category();
  auto el = all_labels(f);
  auto res = all_restrictions(f);
  el[top].push_back("extra");
  for (MorId m : c.morphisms_into(top))
    res[m].push_back(c.is_identity(m) ? static_cast<int>(el[top].size()) - 1 : f.restrict(m, 0));
  return SetPresheaf(f.category(), std::move(el), std::move(res));
}

/// Keeps only the first section over `top`.
SetPresheaf drop_sections(const SetPresheaf& f, ObjId top) {
  const auto& c = *f.category();
  auto el = all_labels(f);
  auto res = all_restrictions(f);
  el[top].resize(1);
  for (MorId m : c.morphisms_into(top)) res[m].resize(1);
  for (MorId m : c.morphisms_from(top))
    for (int& v : res[m])
      if (v != 0) v = 0;
  return SetPresheaf(f.category(), std::move(el), std::move(res));
}

}  // namespace

std::vector<NamedPresheaf> presheaf_catalogue(const SpaceSite& site, unsigned long long seed) {
  const auto& cp = site.site.category;
  const auto& space = site.space;
  auto mk = [](SetPresheaf f) { return std::make_shared<const SetPresheaf>(std::move(f)); };
  std::vector<NamedPresheaf> out;
  const ObjId whole = site.whole();
  const ObjId empty = site.object_of(0);
  const int generic = generic_first_order(space).front();
  const int closed_pt = generic_first_order(space).back();

  out.push_back({"constant{0,1}", mk(constant_presheaf(cp, {"0", "1"}))});
  out.push_back({"terminal", mk(terminal_presheaf(cp))});
  out.push_back({"empty", mk(constant_presheaf(cp, {}))});
  out.push_back({"representable(whole)", mk(representable(cp, whole))});
  out.push_back({"representable(U_" + space.name(generic) + ")",
                 mk(representable(cp, site.minimal_object(generic)))});
  const auto locally_constant = sections(constant_stalk_sheaf(space, {"0", "1"}), site);
  out.push_back({"locally-constant{0,1}", mk(locally_constant)});
  out.push_back({"skyscraper(" + space.name(closed_pt) + ")",
                 mk(sections(skyscraper(space, closed_pt, {"u", "v", "w"}), site))});
  out.push_back({"extra-global-section", mk(extra_section(locally_constant, whole))});
  out.push_back({"extra-empty-section", mk(extra_section(locally_constant, empty))});
  out.push_back({"missing-gluings", mk(drop_sections(locally_constant, whole))});
  out.push_back({"constant x skyscraper",
                 mk(product(constant_presheaf(cp, {"0", "1"}),
                            sections(skyscraper(space, closed_pt, {"u", "v"}), site)))});
  std::mt19937_64 rng(seed);
  out.push_back({"random-stalk-sheaf", mk(sections(random_stalk_sheaf(space, 2, rng), site))});
  return out;
}

}  // namespace sitelab
