#include "sitelab/stalks.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>

namespace sitelab {

namespace {

bool in(PointSet s, int x) { return (s >> x & 1U) != 0; }

bool strict_generization(const FiniteSpace& s, int y, int x) { return y != x && s.specializes(y, x); }

std::vector<int> points_of(const FiniteSpace& s, PointSet u) {
  std::vector<int> out;
  for (int x = 0; x < s.size(); ++x)
    if (in(u, x)) out.push_back(x);
  return out;
}

std::string tuple_label(const StalkSheaf& f, const std::vector<int>& pts, const std::vector<int>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ",";
    s += f.stalks[pts[i]][t[i]];
  }
  return s + ")";
}

}  // namespace

std::vector<int> generic_first_order(const FiniteSpace& s) {
  std::vector<int> order(static_cast<std::size_t>(s.size()));
  for (int x = 0; x < s.size(); ++x) order[x] = x;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::popcount(s.minimal_open(a)) < std::popcount(s.minimal_open(b));
  });
  return order;
}

ValidationReport validate_stalk_sheaf(const StalkSheaf& f) {
  const auto& s = f.space;
  const int n = s.size();
  if (static_cast<int>(f.stalks.size()) != n || static_cast<int>(f.maps.size()) != n)
    return {false, "stalk-shape", {}};
  for (int x = 0; x < n; ++x) {
    if (static_cast<int>(f.maps[x].size()) != n) return {false, "stalk-shape", {s.name(x)}};
    for (int y = 0; y < n; ++y) {
      if (!strict_generization(s, y, x)) continue;
      const auto& m = f.maps[x][y];
      if (static_cast<int>(m.size()) != f.stalk_size(x)) return {false, "stalk-map-shape", {s.name(x), s.name(y)}};
      for (int v : m)
        if (v < 0 || v >= f.stalk_size(y)) return {false, "stalk-map-range", {s.name(x), s.name(y)}};
    }
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!strict_generization(s, y, x)) continue;
      for (int z = 0; z < n; ++z) {
        if (!strict_generization(s, z, y)) continue;
        for (int i = 0; i < f.stalk_size(x); ++i)
          if (f.maps[y][z][f.maps[x][y][i]] != f.maps[x][z][i])
            return {false, "stalk-composition", {s.name(x), s.name(y), s.name(z), f.stalks[x][i]}};
      }
    }
  return {};
}

std::vector<std::vector<int>> compatible_tuples(const StalkSheaf& f, PointSet u) {
  const auto& s = f.space;
  const auto pts = points_of(s, u);
  std::vector<int> pos(static_cast<std::size_t>(s.size()), -1);
  for (std::size_t i = 0; i < pts.size(); ++i) pos[pts[i]] = static_cast<int>(i);
  std::vector<int> order;
  for (int x : generic_first_order(s))
    if (in(u, x)) order.push_back(x);

  std::vector<std::vector<int>> out;
  std::vector<int> cur(pts.size(), -1);
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == order.size()) {
      out.push_back(cur);
      return;
    }
    const int x = order[k];
    for (int v = 0; v < f.stalk_size(x); ++v) {
      bool ok = true;
      for (int y : pts)
        if (strict_generization(s, y, x) && f.maps[x][y][v] != cur[pos[y]]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      cur[pos[x]] = v;
      go(k + 1);
    }
    cur[pos[x]] = -1;
  };
  go(0);
  std::sort(out.begin(), out.end());
  return out;
}

SetPresheaf sections(const StalkSheaf& f, const SpaceSite& site) {
  const auto& c = site.category();
  std::vector<std::vector<std::vector<int>>> tuples;
  std::vector<std::map<std::vector<int>, int>> index;
  std::vector<std::vector<std::string>> el;
  for (ObjId o = 0; o < c.object_count(); ++o) {
    const PointSet u = site.object_points[o];
    tuples.push_back(compatible_tuples(f, u));
    std::map<std::vector<int>, int> idx;
    std::vector<std::string> names;
    const auto pts = points_of(f.space, u);
    for (std::size_t i = 0; i < tuples.back().size(); ++i) {
      idx.emplace(tuples.back()[i], static_cast<int>(i));
      names.push_back(tuple_label(f, pts, tuples.back()[i]));
    }
    index.push_back(std::move(idx));
    el.push_back(std::move(names));
  }
  std::vector<std::vector<int>> res;
  for (MorId h = 0; h < c.morphism_count(); ++h) {
    const ObjId big = c.target(h), small = c.source(h);
    const auto from = points_of(f.space, site.object_points[big]);
    const PointSet v = site.object_points[small];
    std::vector<int> r;
    for (const auto& t : tuples[big]) {
      std::vector<int> proj;
      for (std::size_t i = 0; i < from.size(); ++i)
        if (in(v, from[i])) proj.push_back(t[i]);
      r.push_back(index[small].at(proj));
    }
    res.push_back(std::move(r));
  }
  return SetPresheaf(site.site.category, std::move(el), std::move(res));
}

StalkSheaf constant_stalk_sheaf(const FiniteSpace& s, const std::vector<std::string>& values) {
  const int n = s.size();
  StalkSheaf f{s, std::vector<std::vector<std::string>>(static_cast<std::size_t>(n), values),
               std::vector<std::vector<std::vector<int>>>(static_cast<std::size_t>(n),
                                                          std::vector<std::vector<int>>(static_cast<std::size_t>(n)))};
  std::vector<int> id(values.size());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int>(i);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (strict_generization(s, y, x)) f.maps[x][y] = id;
  return f;
}

StalkSheaf skyscraper(const FiniteSpace& s, int y0, const std::vector<std::string>& values) {
  const int n = s.size();
  StalkSheaf f{s, {}, std::vector<std::vector<std::vector<int>>>(static_cast<std::size_t>(n),
                                                                 std::vector<std::vector<int>>(static_cast<std::size_t>(n)))};
  for (int x = 0; x < n; ++x)
    f.stalks.push_back(s.specializes(y0, x) ? values : std::vector<std::string>{"*"});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!strict_generization(s, y, x)) continue;
      std::vector<int> m(static_cast<std::size_t>(f.stalk_size(x)), 0);
      if (f.stalk_size(y) == f.stalk_size(x) && s.specializes(y0, y))
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<int>(i);
      f.maps[x][y] = std::move(m);
    }
  return f;
}

bool is_stalk_morphism(const StalkSheaf& f, const StalkSheaf& g, const StalkMap& phi) {
  const auto& s = f.space;
  for (int x = 0; x < s.size(); ++x) {
    if (static_cast<int>(phi[x].size()) != f.stalk_size(x)) return false;
    for (int v : phi[x])
      if (v < 0 || v >= g.stalk_size(x)) return false;
    for (int y = 0; y < s.size(); ++y) {
      if (!strict_generization(s, y, x)) continue;
      for (int i = 0; i < f.stalk_size(x); ++i)
        if (g.maps[x][y][phi[x][i]] != phi[y][f.maps[x][y][i]]) return false;
    }
  }
  return true;
}

SheafMorphism sections_morphism(const StalkSheaf& f, const StalkSheaf& g, const StalkMap& phi,
                                const SpaceSite& site, const PresheafPtr& fs, const PresheafPtr& gs) {
  const auto& c = site.category();
  SheafMorphism m{fs, gs, {}};
  for (ObjId o = 0; o < c.object_count(); ++o) {
    const PointSet u = site.object_points[o];
    const auto pts = points_of(f.space, u);
    const auto ft = compatible_tuples(f, u);
    const auto gt = compatible_tuples(g, u);
    std::map<std::vector<int>, int> gidx;
    for (std::size_t i = 0; i < gt.size(); ++i) gidx.emplace(gt[i], static_cast<int>(i));
    std::vector<int> comp;
    for (const auto& t : ft) {
      std::vector<int> img(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) img[i] = phi[pts[i]][t[i]];
      comp.push_back(gidx.at(img));
    }
    m.components.push_back(std::move(comp));
  }
  return m;
}

StalkSheaf random_stalk_sheaf(const FiniteSpace& s, int max_stalk, std::mt19937_64& rng) {
  const int n = s.size();
  StalkSheaf f{s, std::vector<std::vector<std::string>>(static_cast<std::size_t>(n)),
               std::vector<std::vector<std::vector<int>>>(static_cast<std::size_t>(n),
                                                          std::vector<std::vector<int>>(static_cast<std::size_t>(n)))};
  for (int x : generic_first_order(s)) {
    const PointSet below = s.minimal_open(x) & ~(PointSet{1} << x);
    const auto lim = compatible_tuples(f, below);
    const auto pts = points_of(s, below);
    int k = 0;
    if (!lim.empty()) k = std::uniform_int_distribution<int>(1, max_stalk)(rng);
    std::vector<std::vector<int>> chosen;
    for (int i = 0; i < k; ++i) {
      f.stalks[x].push_back(std::to_string(i));
      chosen.push_back(lim[std::uniform_int_distribution<std::size_t>(0, lim.size() - 1)(rng)]);
    }
    for (std::size_t j = 0; j < pts.size(); ++j) {
      std::vector<int> m;
      for (const auto& t : chosen) m.push_back(t[j]);
      f.maps[x][pts[j]] = std::move(m);
    }
  }
  return f;
}

std::optional<StalkMap> random_stalk_morphism(const StalkSheaf& f, const StalkSheaf& g,
                                              std::mt19937_64& rng, int attempts) {
  const auto& s = f.space;
  const auto order = generic_first_order(s);
  for (int a = 0; a < attempts; ++a) {
    StalkMap phi(static_cast<std::size_t>(s.size()));
    bool ok = true;
    for (int x : order) {
      for (int i = 0; i < f.stalk_size(x) && ok; ++i) {
        std::vector<int> cand;
        for (int t = 0; t < g.stalk_size(x); ++t) {
          bool good = true;
          for (int y = 0; y < s.size() && good; ++y)
            if (strict_generization(s, y, x)) good = g.maps[x][y][t] == phi[y][f.maps[x][y][i]];
          if (good) cand.push_back(t);
        }
        if (cand.empty()) {
          ok = false;
          break;
        }
        phi[x].push_back(cand[std::uniform_int_distribution<std::size_t>(0, cand.size() - 1)(rng)]);
      }
      if (!ok) break;
    }
    if (ok) return phi;
  }
  return std::nullopt;
}

// ------------------------------------------------------- F_p-linear sheaves

namespace {

/// (r x m) * (m x c) with explicit shapes, tolerant of empty matrices.
modp::Mat mat_mul(const modp::Mat& a, const modp::Mat& b, int r, int m, int c, int p) {
  modp::Mat out = modp::zeros(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < m; ++k)
      if (a[i][k])
        for (int j = 0; j < c; ++j) out[i][j] = (out[i][j] + a[i][k] * b[k][j]) % p;
  return out;
}

bool shape_ok(const modp::Mat& m, int r, int c) {
  if (static_cast<int>(m.size()) != r) return false;
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != c) return false;
  return true;
}

/// Offsets of each point's block inside the direct sum over u.
std::vector<int> block_offsets(const LinearStalkSheaf& f, const std::vector<int>& pts, int& total) {
  std::vector<int> off(static_cast<std::size_t>(f.space.size()), -1);
  total = 0;
  for (int x : pts) {
    off[x] = total;
    total += f.dims[x];
  }
  return off;
}

/// Basis of compatible tuples over a generization-closed point set.
std::vector<modp::Vec> linear_tuples(const LinearStalkSheaf& f, PointSet u) {
  const auto& s = f.space;
  const auto pts = points_of(s, u);
  int total = 0;
  const auto off = block_offsets(f, pts, total);
  modp::Mat constraints;
  for (int x : pts)
    for (int y : pts) {
      if (!strict_generization(s, y, x)) continue;
      const auto& m = f.maps[x][y];
      for (int r = 0; r < f.dims[y]; ++r) {
        modp::Vec row(static_cast<std::size_t>(total), 0);
        for (int c = 0; c < f.dims[x]; ++c) row[off[x] + c] = m[r][c];
        row[off[y] + r] = (row[off[y] + r] + f.p - 1) % f.p;
        constraints.push_back(std::move(row));
      }
    }
  return modp::kernel(constraints, total, f.p);
}

}  // namespace

modp::Mat LinearStalkSheaf::map(int x, int y) const {
  if (x == y) return modp::identity(dims[x]);
  return maps[x][y];
}

ValidationReport validate_linear_stalk_sheaf(const LinearStalkSheaf& f) {
  const auto& s = f.space;
  const int n = s.size();
  if (static_cast<int>(f.dims.size()) != n || static_cast<int>(f.maps.size()) != n)
    return {false, "stalk-shape", {}};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (strict_generization(s, y, x) && !shape_ok(f.maps[x][y], f.dims[y], f.dims[x]))
        return {false, "stalk-map-shape", {s.name(x), s.name(y)}};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!strict_generization(s, y, x)) continue;
      for (int z = 0; z < n; ++z) {
        if (!strict_generization(s, z, y)) continue;
        const auto comp = mat_mul(f.maps[y][z], f.maps[x][y], f.dims[z], f.dims[y], f.dims[x], f.p);
        for (int r = 0; r < f.dims[z]; ++r)
          for (int c = 0; c < f.dims[x]; ++c)
            if (comp[r][c] != ((f.maps[x][z][r][c] % f.p) + f.p) % f.p)
              return {false, "stalk-composition", {s.name(x), s.name(y), s.name(z)}};
      }
    }
  return {};
}

bool is_linear_morphism(const LinearStalkSheaf& f, const LinearStalkSheaf& g, const LinearMorphism& m) {
  const auto& s = f.space;
  for (int x = 0; x < s.size(); ++x)
    if (!shape_ok(m.components[x], g.dims[x], f.dims[x])) return false;
  for (int x = 0; x < s.size(); ++x)
    for (int y = 0; y < s.size(); ++y) {
      if (!strict_generization(s, y, x)) continue;
      const auto a = mat_mul(g.maps[x][y], m.components[x], g.dims[y], g.dims[x], f.dims[x], f.p);
      const auto b = mat_mul(m.components[y], f.maps[x][y], g.dims[y], f.dims[y], f.dims[x], f.p);
      if (a != b) return false;
    }
  return true;
}

bool stalkwise_surjective(const LinearStalkSheaf& f, const LinearStalkSheaf& g, const LinearMorphism& m) {
  for (int x = 0; x < f.space.size(); ++x)
    if (modp::rank(m.components[x], f.dims[x], f.p) != g.dims[x]) return false;
  return true;
}

LinearSections linear_sections(const LinearStalkSheaf& f, const SpaceSite& site) {
  const auto& c = site.category();
  LinearSections out;
  std::vector<std::vector<int>> orders;
  for (ObjId o = 0; o < c.object_count(); ++o) {
    out.basis.push_back(linear_tuples(f, site.object_points[o]));
    orders.emplace_back(out.basis.back().size(), f.p);
  }
  std::vector<IntMatrix> res;
  for (MorId h = 0; h < c.morphism_count(); ++h) {
    const ObjId big = c.target(h), small = c.source(h);
    const auto from = points_of(f.space, site.object_points[big]);
    const PointSet v = site.object_points[small];
    const auto& bb = out.basis[big];
    const auto& sb = out.basis[small];
    IntMatrix m(sb.size(), std::vector<long long>(bb.size(), 0));
    for (std::size_t j = 0; j < bb.size(); ++j) {
      modp::Vec proj;
      int k = 0;
      for (int x : from) {
        for (int d = 0; d < f.dims[x]; ++d, ++k)
          if (in(v, x)) proj.push_back(bb[j][k]);
      }
      modp::Vec coef;
      if (!modp::solve(sb, proj, f.p, coef)) throw std::logic_error("restriction left the section space");
      for (std::size_t i = 0; i < sb.size(); ++i) m[i][j] = coef[i];
    }
    res.push_back(std::move(m));
  }
  out.presheaf = std::make_shared<const AbPresheaf>(site.site.category, std::move(orders), std::move(res));
  return out;
}

AbMorphism linear_sections_morphism(const LinearStalkSheaf& f, const LinearStalkSheaf&,
                                    const LinearMorphism& m, const SpaceSite& site,
                                    const LinearSections& fs, const LinearSections& gs) {
  const auto& c = site.category();
  AbMorphism out{fs.presheaf, gs.presheaf, {}};
  for (ObjId o = 0; o < c.object_count(); ++o) {
    const auto pts = points_of(f.space, site.object_points[o]);
    const auto& fb = fs.basis[o];
    const auto& gb = gs.basis[o];
    IntMatrix comp(gb.size(), std::vector<long long>(fb.size(), 0));
    for (std::size_t j = 0; j < fb.size(); ++j) {
      modp::Vec img;
      int k = 0;
      for (int x : pts) {
        modp::Vec block(fb[j].begin() + k, fb[j].begin() + k + f.dims[x]);
        k += f.dims[x];
        const auto mapped = modp::apply(m.components[x], block, f.p);
        img.insert(img.end(), mapped.begin(), mapped.end());
      }
      modp::Vec coef;
      if (!modp::solve(gb, img, f.p, coef)) throw std::logic_error("morphism left the section space");
      for (std::size_t i = 0; i < gb.size(); ++i) comp[i][j] = coef[i];
    }
    out.components.push_back(std::move(comp));
  }
  return out;
}

namespace {
LinearStalkSheaf empty_linear(const FiniteSpace& s, int p) {
  const auto n = static_cast<std::size_t>(s.size());
  return LinearStalkSheaf{s, p, std::vector<int>(n, 0), std::vector<std::vector<modp::Mat>>(n, std::vector<modp::Mat>(n))};
}
}  // namespace

LinearStalkSheaf linear_constant(const FiniteSpace& s, int p, int dim) {
  auto f = empty_linear(s, p);
  for (int x = 0; x < s.size(); ++x) f.dims[x] = dim;
  for (int x = 0; x < s.size(); ++x)
    for (int y = 0; y < s.size(); ++y)
      if (strict_generization(s, y, x)) f.maps[x][y] = modp::identity(dim);
  return f;
}

LinearStalkSheaf linear_skyscraper(const FiniteSpace& s, int p, int y0, int dim) {
  auto f = empty_linear(s, p);
  for (int x = 0; x < s.size(); ++x) f.dims[x] = s.specializes(y0, x) ? dim : 0;
  for (int x = 0; x < s.size(); ++x)
    for (int y = 0; y < s.size(); ++y)
      if (strict_generization(s, y, x))
        f.maps[x][y] = f.dims[y] ? modp::identity(dim) : modp::zeros(0, f.dims[x]);
  return f;
}

LinearStalkSheaf direct_sum(const LinearStalkSheaf& a, const LinearStalkSheaf& b) {
  const auto& s = a.space;
  auto f = empty_linear(s, a.p);
  for (int x = 0; x < s.size(); ++x) f.dims[x] = a.dims[x] + b.dims[x];
  for (int x = 0; x < s.size(); ++x)
    for (int y = 0; y < s.size(); ++y) {
      if (!strict_generization(s, y, x)) continue;
      auto m = modp::zeros(f.dims[y], f.dims[x]);
      for (int r = 0; r < a.dims[y]; ++r)
        for (int c = 0; c < a.dims[x]; ++c) m[r][c] = a.maps[x][y][r][c];
      for (int r = 0; r < b.dims[y]; ++r)
        for (int c = 0; c < b.dims[x]; ++c) m[a.dims[y] + r][a.dims[x] + c] = b.maps[x][y][r][c];
      f.maps[x][y] = std::move(m);
    }
  return f;
}

Subsheaf generated_subsheaf(const LinearStalkSheaf& f, const std::vector<std::pair<int, modp::Vec>>& seeds) {
  const auto& s = f.space;
  Subsheaf k(static_cast<std::size_t>(s.size()));
  for (const auto& [x, v] : seeds)
    for (int y = 0; y < s.size(); ++y)
      if (s.specializes(y, x)) k[y].push_back(modp::apply(f.map(x, y), v, f.p));
  for (int x = 0; x < s.size(); ++x) {
    auto e = modp::rref(modp::Mat(k[x].begin(), k[x].end()), f.dims[x], f.p);
    k[x].assign(e.reduced.begin(), e.reduced.end());
  }
  return k;
}

QuotientResult quotient(const LinearStalkSheaf& f, const Subsheaf& k) {
  const auto& s = f.space;
  QuotientResult out{empty_linear(s, f.p), {}};
  std::vector<modp::Quotient> q;
  for (int x = 0; x < s.size(); ++x) {
    q.push_back(modp::quotient(k[x], f.dims[x], f.p));
    out.sheaf.dims[x] = static_cast<int>(q.back().complement.size());
    out.projection.components.push_back(q.back().projection);
  }
  for (int x = 0; x < s.size(); ++x)
    for (int y = 0; y < s.size(); ++y) {
      if (!strict_generization(s, y, x)) continue;
      auto m = modp::zeros(out.sheaf.dims[y], out.sheaf.dims[x]);
      for (int j = 0; j < out.sheaf.dims[x]; ++j) {
        modp::Vec e(static_cast<std::size_t>(f.dims[x]), 0);
        e[q[x].complement[j]] = 1;
        const auto img = modp::apply(q[y].projection, modp::apply(f.maps[x][y], e, f.p), f.p);
        for (int r = 0; r < out.sheaf.dims[y]; ++r) m[r][j] = img[r];
      }
      out.sheaf.maps[x][y] = std::move(m);
    }
  return out;
}

GodementResult godement(const LinearStalkSheaf& f) {
  const auto& s = f.space;
  GodementResult out{empty_linear(s, f.p), {}};
  std::vector<std::vector<int>> blocks;  // generizations of x, ascending
  for (int x = 0; x < s.size(); ++x) {
    blocks.push_back(points_of(s, s.minimal_open(x)));
    int d = 0;
    for (int y : blocks.back()) d += f.dims[y];
    out.sheaf.dims[x] = d;
  }
  for (int x = 0; x < s.size(); ++x) {
    int tx = 0;
    const auto ox = block_offsets(f, blocks[x], tx);
    for (int x2 = 0; x2 < s.size(); ++x2) {
      if (!strict_generization(s, x2, x)) continue;
      int t2 = 0;
      const auto o2 = block_offsets(f, blocks[x2], t2);
      auto m = modp::zeros(t2, tx);
      for (int y : blocks[x2])
        for (int d = 0; d < f.dims[y]; ++d) m[o2[y] + d][ox[y] + d] = 1;
      out.sheaf.maps[x][x2] = std::move(m);
    }
    auto emb = modp::zeros(tx, f.dims[x]);
    for (int y : blocks[x]) {
      const auto r = f.map(x, y);
      for (int i = 0; i < f.dims[y]; ++i)
        for (int j = 0; j < f.dims[x]; ++j) emb[ox[y] + i][j] = r[i][j];
    }
    out.embedding.components.push_back(std::move(emb));
  }
  return out;
}

LinearStalkSheaf random_linear_sheaf(const FiniteSpace& s, int p, int max_dim, std::mt19937_64& rng) {
  auto f = empty_linear(s, p);
  std::uniform_int_distribution<int> coef(0, p - 1);
  for (int x : generic_first_order(s)) {
    const PointSet below = s.minimal_open(x) & ~(PointSet{1} << x);
    const auto lim = linear_tuples(f, below);
    const auto pts = points_of(s, below);
    const int d = std::uniform_int_distribution<int>(0, max_dim)(rng);
    f.dims[x] = d;
    // Column i of the combined map is a random element of the limit.
    int total = 0;
    for (int y : pts) total += f.dims[y];
    std::vector<modp::Vec> cols;
    for (int i = 0; i < d; ++i) {
      modp::Vec v(static_cast<std::size_t>(total), 0);
      for (const auto& b : lim) {
        const int c = coef(rng);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = (v[k] + c * b[k]) % p;
      }
      cols.push_back(std::move(v));
    }
    int k = 0;
    for (int y : pts) {
      auto m = modp::zeros(f.dims[y], d);
      for (int r = 0; r < f.dims[y]; ++r)
        for (int i = 0; i < d; ++i) m[r][i] = cols[i][k + r];
      k += f.dims[y];
      f.maps[x][y] = std::move(m);
    }
  }
  return f;
}

}  // namespace sitelab
