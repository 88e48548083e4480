#include "sitelab/io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace sitelab::io {

DocumentError::DocumentError(std::string file, int line, int column, const std::string& message)
    : InputError(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      file_(std::move(file)),
      line_(line),
      column_(column) {}

namespace {

std::pair<int, int> line_col(const std::string& text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

/// Minimal JSON walker used only to find where a value starts.
class Locator {
 public:
  explicit Locator(const std::string& s) : s_(s) {}

  std::size_t find(const std::vector<std::string>& tokens) {
    ws();
    for (const auto& tok : tokens) {
      const std::size_t here = i_;
      if (!descend(tok)) return here;
      ws();
    }
    return i_;
  }

 private:
  void ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  std::string string() {
    std::string out;
    ++i_;
    while (i_ < s_.size() && s_[i_] != '"') {
      if (s_[i_] == '\\' && i_ + 1 < s_.size()) ++i_;
      out += s_[i_++];
    }
    ++i_;
    return out;
  }

  void skip() {
    ws();
    if (i_ >= s_.size()) return;
    const char c = s_[i_];
    if (c == '"') {
      string();
    } else if (c == '{' || c == '[') {
      const char close = c == '{' ? '}' : ']';
      ++i_;
      ws();
      while (i_ < s_.size() && s_[i_] != close) {
        if (c == '{') {
          ws();
          string();
          ws();
          ++i_;  // ':'
        }
        skip();
        ws();
        if (i_ < s_.size() && s_[i_] == ',') ++i_;
        ws();
      }
      ++i_;
    } else {
      while (i_ < s_.size() && !std::strchr(",]} \t\r\n", s_[i_])) ++i_;
    }
  }

  bool descend(const std::string& tok) {
    if (i_ >= s_.size()) return false;
    if (s_[i_] == '{') {
      ++i_;
      ws();
      while (i_ < s_.size() && s_[i_] != '}') {
        const std::string key = string();
        ws();
        ++i_;
        ws();
        if (key == tok) return true;
        skip();
        ws();
        if (i_ < s_.size() && s_[i_] == ',') ++i_;
        ws();
      }
      return false;
    }
    if (s_[i_] == '[') {
      std::size_t idx = 0;
      try {
        idx = std::stoul(tok);
      } catch (...) {
        return false;
      }
      ++i_;
      ws();
      for (std::size_t k = 0; k < idx; ++k) {
        if (i_ >= s_.size() || s_[i_] == ']') return false;
        skip();
        ws();
        if (i_ < s_.size() && s_[i_] == ',') ++i_;
        ws();
      }
      return i_ < s_.size() && s_[i_] != ']';
    }
    return false;
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

std::vector<std::string> tokens_of(Pointer p) {
  std::vector<std::string> out;
  while (!p.empty()) {
    out.insert(out.begin(), p.back());
    p.pop_back();
  }
  return out;
}

}  // namespace

const Json& at_ptr(const Document& d, const Pointer& p) {
  if (!d.json.contains(p)) fail(d, p, "missing value at " + p.to_string());
  return d.json.at(p);
}

std::string str_at(const Document& d, const Pointer& p) {
  const auto& j = at_ptr(d, p);
  if (!j.is_string()) fail(d, p, "expected a string");
  return j.get<std::string>();
}

const Json& array_at(const Document& d, const Pointer& p) {
  const auto& j = at_ptr(d, p);
  if (!j.is_array()) fail(d, p, "expected an array");
  return j;
}

const Json& object_at(const Document& d, const Pointer& p) {
  const auto& j = at_ptr(d, p);
  if (!j.is_object()) fail(d, p, "expected an object");
  return j;
}

long long int_at(const Document& d, const Pointer& p) {
  const auto& j = at_ptr(d, p);
  if (!j.is_number_integer()) fail(d, p, "expected an integer");
  return j.get<long long>();
}

namespace {

std::string joined(const std::vector<std::string>& w) {
  std::string out;
  for (const auto& s : w) out += (out.empty() ? "" : ", ") + s;
  return out;
}

}  // namespace

ObjId object_named(const Document& d, const Pointer& p, const FiniteCategory& c) {
  const auto name = str_at(d, p);
  try {
    return c.object_id(name);
  } catch (const std::exception&) {
    fail(d, p, "unknown object '" + name + "'");
  }
}

MorId morphism_named(const Document& d, const Pointer& p, const FiniteCategory& c) {
  const auto name = str_at(d, p);
  try {
    return c.morphism_id(name);
  } catch (const std::exception&) {
    fail(d, p, "unknown morphism '" + name + "'");
  }
}

std::vector<std::string> string_list(const Document& d, const Pointer& p) {
  std::vector<std::string> out;
  const auto& a = array_at(d, p);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(str_at(d, p / i));
  return out;
}

namespace {

std::vector<std::pair<std::string, std::string>> pair_list(const Document& d, const Pointer& p) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto& a = array_at(d, p);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_array() || a[i].size() != 2) fail(d, p / i, "expected a pair");
    out.emplace_back(str_at(d, p / i / 0), str_at(d, p / i / 1));
  }
  return out;
}

Poset read_poset(const Document& d, const Pointer& p) {
  const auto elements = string_list(d, p / "elements");
  const auto leq = d.json.contains(p / "leq") ? pair_list(d, p / "leq")
                                                : std::vector<std::pair<std::string, std::string>>{};
  try {
    return Poset(elements, leq);
  } catch (const std::exception& e) {
    fail(d, p, e.what());
  }
}

IntMatrix read_matrix(const Document& d, const Pointer& p, std::size_t rows, std::size_t cols) {
  const auto& a = array_at(d, p);
  if (a.size() != rows) fail(d, p, "expected " + std::to_string(rows) + " rows");
  IntMatrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = array_at(d, p / r);
    if (row.size() != cols) fail(d, p / r, "expected " + std::to_string(cols) + " columns");
    std::vector<long long> v;
    for (std::size_t k = 0; k < cols; ++k) v.push_back(int_at(d, p / r / k));
    m.push_back(std::move(v));
  }
  return m;
}

/// Element-index map given as indices, target labels, or {label: label}.
std::vector<int> read_table(const Document& d, const Pointer& p, const std::vector<std::string>& from,
                            const std::vector<std::string>& to) {
  const auto& j = at_ptr(d, p);
  auto index_of = [&](const Pointer& q, const Json& v) {
    if (v.is_number_integer()) {
      const auto k = v.get<long long>();
      if (k < 0 || k >= static_cast<long long>(to.size())) fail(d, q, "index out of range");
      return static_cast<int>(k);
    }
    if (v.is_string()) {
      const auto it = std::find(to.begin(), to.end(), v.get<std::string>());
      if (it == to.end()) fail(d, q, "unknown element '" + v.get<std::string>() + "'");
      return static_cast<int>(it - to.begin());
    }
    fail(d, q, "expected an element label or index");
  };
  std::vector<int> out(from.size(), -1);
  if (j.is_array()) {
    if (j.size() != from.size()) fail(d, p, "expected " + std::to_string(from.size()) + " entries");
    for (std::size_t i = 0; i < j.size(); ++i) out[i] = index_of(p / i, j[i]);
    return out;
  }
  if (j.is_object()) {
    for (std::size_t i = 0; i < from.size(); ++i) {
      if (!j.contains(from[i])) fail(d, p, "no entry for element '" + from[i] + "'");
      out[i] = index_of(p / from[i], j.at(from[i]));
    }
    return out;
  }
  fail(d, p, "expected a table");
}

}  // namespace

std::pair<int, int> locate(const std::string& text, const Pointer& at) {
  return line_col(text, Locator(text).find(tokens_of(at)));
}

void fail(const Document& d, const Pointer& at, const std::string& message) {
  const auto [line, col] = locate(d.text, at);
  throw DocumentError(d.file, line, col, message);
}

Document parse_document(const std::string& text, const std::string& name) {
  Document d{name, text, {}};
  try {
    d.json = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw DocumentError(name, line, col, msg);
  }
  return d;
}

Document load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError(path, 0, 0, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str(), path);
}

// ---------------------------------------------------------------- category

CategoryPtr read_category(const Document& d, const Pointer& at) {
  object_at(d, at);
  if (d.json.contains(at / "poset"))
    return std::make_shared<const FiniteCategory>(FiniteCategory::from_poset(read_poset(d, at / "poset")));

  const auto objects = string_list(d, at / "objects");
  std::map<std::string, ObjId> obj;
  for (std::size_t i = 0; i < objects.size(); ++i)
    if (!obj.emplace(objects[i], static_cast<ObjId>(i)).second)
      fail(d, at / "objects" / i, "duplicate object '" + objects[i] + "'");
  auto obj_id = [&](const Pointer& p) {
    const auto n = str_at(d, p);
    const auto it = obj.find(n);
    if (it == obj.end()) fail(d, p, "unknown object '" + n + "'");
    return it->second;
  };

  std::vector<Morphism> mors;
  std::map<std::string, MorId> mor;
  if (d.json.contains(at / "morphisms")) {
    const auto& ms = array_at(d, at / "morphisms");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const auto p = at / "morphisms" / i;
      object_at(d, p);
      Morphism m{str_at(d, p / "name"), obj_id(p / "src"), obj_id(p / "tgt")};
      if (!mor.emplace(m.name, static_cast<MorId>(mors.size())).second)
        fail(d, p / "name", "duplicate morphism '" + m.name + "'");
      mors.push_back(std::move(m));
    }
  }

  std::vector<MorId> ids(objects.size(), -1);
  if (d.json.contains(at / "identities")) {
    const auto& idj = object_at(d, at / "identities");
    for (const auto& [o, v] : idj.items()) {
      const auto p = at / "identities" / o;
      const auto it = obj.find(o);
      if (it == obj.end()) fail(d, p, "unknown object '" + o + "'");
      const auto name = str_at(d, p);
      auto m = mor.find(name);
      if (m == mor.end()) {
        m = mor.emplace(name, static_cast<MorId>(mors.size())).first;
        mors.push_back({name, it->second, it->second});
      }
      if (mors[m->second].source != it->second || mors[m->second].target != it->second)
        fail(d, p, "identity '" + name + "' is not an endomorphism of '" + o + "'");
      ids[it->second] = m->second;
    }
  }
  for (std::size_t x = 0; x < objects.size(); ++x)
    if (ids[x] < 0) {
      const std::string name = "id_" + objects[x];
      if (mor.count(name)) fail(d, at / "identities", "no identity given for '" + objects[x] + "'");
      ids[x] = static_cast<MorId>(mors.size());
      mor.emplace(name, ids[x]);
      mors.push_back({name, static_cast<ObjId>(x), static_cast<ObjId>(x)});
    }

  std::vector<std::array<MorId, 3>> comp;
  std::set<std::pair<MorId, MorId>> given;
  auto mor_id = [&](const Pointer& p) {
    const auto n = str_at(d, p);
    const auto it = mor.find(n);
    if (it == mor.end()) fail(d, p, "unknown morphism '" + n + "'");
    return it->second;
  };
  if (d.json.contains(at / "composition")) {
    const auto& cs = array_at(d, at / "composition");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const auto p = at / "composition" / i;
      if (!cs[i].is_array() || cs[i].size() != 3) fail(d, p, "expected [g, f, g∘f]");
      const std::array<MorId, 3> e{mor_id(p / 0), mor_id(p / 1), mor_id(p / 2)};
      comp.push_back(e);
      given.insert({e[0], e[1]});
    }
  }
  for (MorId f = 0; f < static_cast<MorId>(mors.size()); ++f) {
    const MorId l = ids[mors[f].target], r = ids[mors[f].source];
    if (given.insert({l, f}).second) comp.push_back({l, f, f});
    if (given.insert({f, r}).second) comp.push_back({f, r, f});
  }

  std::shared_ptr<FiniteCategory> c;
  try {
    c = std::make_shared<FiniteCategory>(objects, mors, ids, comp);
  } catch (const std::exception& e) {
    fail(d, at, e.what());
  }
  const auto v = validate_category(*c);
  if (!v.ok) {
    Pointer where = at / "composition";
    if (!d.json.contains(where)) where = at;
    fail(d, where, "category axiom '" + v.axiom + "' fails at " + joined(v.witness));
  }
  return c;
}

FiniteSpace read_space(const Document& d, const Pointer& at) {
  object_at(d, at);
  const auto points = string_list(d, at / "points");
  const auto spec = d.json.contains(at / "specializations")
                        ? pair_list(d, at / "specializations")
                        : std::vector<std::pair<std::string, std::string>>{};
  try {
    return FiniteSpace(points, spec);
  } catch (const std::exception& e) {
    fail(d, at, e.what());
  }
}

Pretopology read_pretopology(const Document& d, const Pointer& at, const FiniteCategory& c) {
  Pretopology p;
  const auto& fams = array_at(d, at / "families");
  for (std::size_t i = 0; i < fams.size(); ++i) {
    const auto q = at / "families" / i;
    CoveringFamily f;
    f.target = object_named(d, q / "target", c);
    const auto& ms = array_at(d, q / "members");
    for (std::size_t k = 0; k < ms.size(); ++k) {
      const MorId m = morphism_named(d, q / "members" / k, c);
      if (c.target(m) != f.target)
        fail(d, q / "members" / k, "morphism '" + c.morphism(m).name + "' does not target '" +
                                       c.object_name(f.target) + "'");
      f.members.push_back(m);
    }
    p.families.push_back(std::move(f));
  }
  return p;
}

// ------------------------------------------------------------------ sheaves

SheafDocument read_sheaf(const Document& d, const Pointer& at, const CategoryPtr& cp) {
  const auto& c = *cp;
  const auto& values = object_at(d, at / "values");
  const int n_obj = c.object_count();
  std::vector<std::vector<std::string>> labels(static_cast<std::size_t>(n_obj));
  std::vector<std::vector<int>> orders(static_cast<std::size_t>(n_obj));
  int kind = 0;  // 1 = set, 2 = abelian
  std::vector<char> seen(static_cast<std::size_t>(n_obj), 0);
  for (const auto& [o, v] : values.items()) {
    const auto p = at / "values" / o;
    ObjId x;
    try {
      x = c.object_id(o);
    } catch (const std::exception&) {
      fail(d, p, "unknown object '" + o + "'");
    }
    seen[x] = 1;
    const int k = v.is_array() ? 1 : 2;
    if (kind && kind != k) fail(d, p, "mixes set values with cyclic_orders");
    kind = k;
    if (k == 1) {
      labels[x] = string_list(d, p);
      std::set<std::string> uniq(labels[x].begin(), labels[x].end());
      if (uniq.size() != labels[x].size()) fail(d, p, "duplicate element label");
    } else {
      const auto& ords = array_at(d, p / "cyclic_orders");
      for (std::size_t i = 0; i < ords.size(); ++i) {
        const auto m = int_at(d, p / "cyclic_orders" / i);
        if (m < 1) fail(d, p / "cyclic_orders" / i, "cyclic order must be positive");
        orders[x].push_back(static_cast<int>(m));
      }
    }
  }
  for (ObjId x = 0; x < n_obj; ++x)
    if (!seen[x]) fail(d, at / "values", "no value given for object '" + c.object_name(x) + "'");

  const Pointer rp = at / "restrictions";
  const Json empty = Json::object();
  const Json& rs = d.json.contains(rp) ? object_at(d, rp) : empty;
  const auto n_mor = static_cast<std::size_t>(c.morphism_count());
  std::vector<std::optional<std::vector<int>>> tables(n_mor);
  std::vector<std::optional<IntMatrix>> mats(n_mor);
  for (const auto& [name, v] : rs.items()) {
    const auto p = rp / name;
    MorId f;
    try {
      f = c.morphism_id(name);
    } catch (const std::exception&) {
      fail(d, p, "unknown morphism '" + name + "'");
    }
    const ObjId src = c.source(f), tgt = c.target(f);
    if (kind == 1)
      tables[f] = read_table(d, p, labels[tgt], labels[src]);
    else
      mats[f] = read_matrix(d, p, orders[src].size(), orders[tgt].size());
  }
  auto known = [&](MorId f) { return kind == 1 ? tables[f].has_value() : mats[f].has_value(); };
  for (ObjId x = 0; x < n_obj; ++x) {
    const MorId id = c.identity(x);
    if (known(id)) continue;
    if (kind == 1) {
      std::vector<int> t(labels[x].size());
      std::iota(t.begin(), t.end(), 0);
      tables[id] = t;
    } else {
      IntMatrix m(orders[x].size(), std::vector<long long>(orders[x].size(), 0));
      for (std::size_t i = 0; i < m.size(); ++i) m[i][i] = 1;
      mats[id] = m;
    }
  }
  // F(g∘h) = F(h)∘F(g) fills in composites.
  for (bool progress = true; progress;) {
    progress = false;
    for (MorId g = 0; g < static_cast<MorId>(n_mor); ++g)
      for (MorId h = 0; h < static_cast<MorId>(n_mor); ++h) {
        if (!known(g) || !known(h)) continue;
        const auto gh = c.compose(g, h);
        if (!gh || known(*gh)) continue;
        if (kind == 1) {
          std::vector<int> t;
          for (int v : *tables[g]) t.push_back((*tables[h])[v]);
          tables[*gh] = t;
        } else {
          const auto& mg = *mats[g];
          const auto& mh = *mats[h];
          IntMatrix m(mh.size(), std::vector<long long>(mg.empty() ? 0 : mg[0].size(), 0));
          for (std::size_t r = 0; r < mh.size(); ++r)
            for (std::size_t k = 0; k < mg.size(); ++k)
              for (std::size_t col = 0; col < m[r].size(); ++col) m[r][col] += mh[r][k] * mg[k][col];
          mats[*gh] = m;
        }
        progress = true;
      }
  }
  for (MorId f = 0; f < static_cast<MorId>(n_mor); ++f)
    if (!known(f)) fail(d, rp, "no restriction given along '" + c.morphism(f).name + "'");

  SheafDocument out;
  if (kind == 2) {
    std::vector<IntMatrix> ms;
    for (auto& m : mats) ms.push_back(*m);
    auto ab = std::make_shared<const AbPresheaf>(cp, orders, ms);
    const auto v = validate_ab_presheaf(*ab);
    if (!v.ok) fail(d, rp, "presheaf axiom '" + v.axiom + "' fails at " + joined(v.witness));
    out.ab = ab;
    out.set = std::make_shared<const SetPresheaf>(ab->to_set());
    return out;
  }
  std::vector<std::vector<int>> ts;
  for (auto& t : tables) ts.push_back(*t);
  auto set = std::make_shared<const SetPresheaf>(cp, labels, ts);
  const auto v = validate_presheaf(*set);
  if (!v.ok) fail(d, rp, "presheaf axiom '" + v.axiom + "' fails at " + joined(v.witness));
  out.set = set;
  return out;
}

MorphismDocument read_morphism(const Document& d, const Pointer& at, const SheafDocument& source,
                               const SheafDocument& target) {
  const auto& c = *source.set->category();
  const Pointer cp = at / "components";
  object_at(d, cp);
  MorphismDocument out;
  out.set.source = source.set;
  out.set.target = target.set;
  const bool ab = source.ab && target.ab;
  if (ab) out.ab = AbMorphism{source.ab, target.ab, {}};
  for (ObjId x = 0; x < c.object_count(); ++x) {
    const auto p = cp / c.object_name(x);
    if (!d.json.contains(p)) fail(d, cp, "no component at '" + c.object_name(x) + "'");
    if (ab) {
      out.ab->components.push_back(
          read_matrix(d, p, target.ab->orders(x).size(), source.ab->orders(x).size()));
    } else {
      out.set.components.push_back(read_table(d, p, source.set->labels(x), target.set->labels(x)));
    }
  }
  if (ab) out.set = to_set_morphism(*out.ab, source.set, target.set);
  const auto v = validate_morphism(out.set);
  if (!v.ok) fail(d, cp, "morphism axiom '" + v.axiom + "' fails at " + joined(v.witness));
  return out;
}

// -------------------------------------------------------------- pro-objects

ProObject read_pro_object(const Document& d, const Pointer& at, const CategoryPtr& cp) {
  const auto& c = *cp;
  ProObject p;
  p.category = cp;
  p.index = read_poset(d, at / "index_poset");
  p.diagram.assign(static_cast<std::size_t>(p.index.size()), -1);
  const auto& diag = object_at(d, at / "diagram");
  for (const auto& [l, v] : diag.items()) {
    const auto q = at / "diagram" / l;
    const auto li = p.index.find(l);
    if (!li) fail(d, q, "unknown index '" + l + "'");
    p.diagram[*li] = object_named(d, q, c);
  }
  for (int l = 0; l < p.index.size(); ++l)
    if (p.diagram[l] < 0) fail(d, at / "diagram", "no object for index '" + p.index.name(l) + "'");
  if (d.json.contains(at / "transitions")) {
    const auto& ts = object_at(d, at / "transitions");
    for (const auto& [key, v] : ts.items()) {
      const auto q = at / "transitions" / key;
      std::string k = key;
      if (k.size() < 5 || k.front() != '(' || k.back() != ')' || k.find(',') == std::string::npos)
        fail(d, q, "transition keys look like \"(lambda,mu)\"");
      k = k.substr(1, k.size() - 2);
      const auto comma = k.find(',');
      auto trim = [](std::string s) {
        while (!s.empty() && s.front() == ' ') s.erase(s.begin());
        while (!s.empty() && s.back() == ' ') s.pop_back();
        return s;
      };
      const auto l = p.index.find(trim(k.substr(0, comma)));
      const auto m = p.index.find(trim(k.substr(comma + 1)));
      if (!l || !m) fail(d, q, "unknown index in '" + key + "'");
      p.transitions[{*l, *m}] = morphism_named(d, q, c);
    }
  }
  for (int l = 0; l < p.index.size(); ++l)
    for (int m = 0; m < p.index.size(); ++m) {
      if (l == m || !p.index.leq(l, m) || p.transitions.count({l, m})) continue;
      const auto hom = c.hom(p.diagram[l], p.diagram[m]);
      if (hom.size() != 1)
        fail(d, at / "transitions",
             "transition (" + p.index.name(l) + "," + p.index.name(m) + ") must be given explicitly");
      p.transitions[{l, m}] = hom.front();
    }
  const auto v = validate_pro_object(p);
  if (!v.ok) fail(d, at, "pro-object axiom '" + v.axiom + "' fails at " + joined(v.witness));
  return p;
}

// ------------------------------------------------------------------ writers

Json to_json(const FiniteCategory& c) {
  Json j;
  j["objects"] = Json::array();
  for (ObjId x = 0; x < c.object_count(); ++x) j["objects"].push_back(c.object_name(x));
  j["morphisms"] = Json::array();
  for (MorId m = 0; m < c.morphism_count(); ++m)
    j["morphisms"].push_back(
        {{"name", c.morphism(m).name}, {"src", c.object_name(c.source(m))}, {"tgt", c.object_name(c.target(m))}});
  j["identities"] = Json::object();
  for (ObjId x = 0; x < c.object_count(); ++x) j["identities"][c.object_name(x)] = c.morphism(c.identity(x)).name;
  j["composition"] = Json::array();
  for (MorId g = 0; g < c.morphism_count(); ++g)
    for (MorId f = 0; f < c.morphism_count(); ++f) {
      if (c.is_identity(g) || c.is_identity(f)) continue;
      if (const auto gf = c.compose(g, f))
        j["composition"].push_back({c.morphism(g).name, c.morphism(f).name, c.morphism(*gf).name});
    }
  return j;
}

Json to_json(const FiniteSpace& s) {
  Json j;
  j["points"] = Json::array();
  for (int x = 0; x < s.size(); ++x) j["points"].push_back(s.name(x));
  j["specializations"] = Json::array();
  for (const auto& [x, y] : s.specialization_pairs()) j["specializations"].push_back({s.name(x), s.name(y)});
  return j;
}

Json to_json(const Pretopology& p, const FiniteCategory& c) {
  Json j;
  j["families"] = Json::array();
  for (const auto& f : p.families) {
    Json members = Json::array();
    for (MorId m : f.members) members.push_back(c.morphism(m).name);
    j["families"].push_back({{"target", c.object_name(f.target)}, {"members", members}});
  }
  return j;
}

Json to_json(const SetPresheaf& f) {
  const auto& c = *f.category();
  Json j;
  j["values"] = Json::object();
  for (ObjId x = 0; x < c.object_count(); ++x) j["values"][c.object_name(x)] = f.labels(x);
  j["restrictions"] = Json::object();
  for (MorId m = 0; m < c.morphism_count(); ++m)
    if (!c.is_identity(m)) j["restrictions"][c.morphism(m).name] = f.restriction(m);
  return j;
}

Json to_json(const AbPresheaf& f) {
  const auto& c = *f.category();
  Json j;
  j["values"] = Json::object();
  for (ObjId x = 0; x < c.object_count(); ++x) j["values"][c.object_name(x)] = {{"cyclic_orders", f.orders(x)}};
  j["restrictions"] = Json::object();
  for (MorId m = 0; m < c.morphism_count(); ++m)
    if (!c.is_identity(m)) j["restrictions"][c.morphism(m).name] = f.restriction(m);
  return j;
}

Json to_json(const ProObject& p) {
  const auto& c = *p.category;
  Json j;
  j["index_poset"]["elements"] = p.index.names();
  j["index_poset"]["leq"] = Json::array();
  for (int l = 0; l < p.index.size(); ++l)
    for (int m = 0; m < p.index.size(); ++m)
      if (l != m && p.index.leq(l, m)) j["index_poset"]["leq"].push_back({p.index.name(l), p.index.name(m)});
  j["diagram"] = Json::object();
  for (int l = 0; l < p.index.size(); ++l) j["diagram"][p.index.name(l)] = c.object_name(p.diagram[l]);
  j["transitions"] = Json::object();
  for (const auto& [key, m] : p.transitions)
    j["transitions"]["(" + p.index.name(key.first) + "," + p.index.name(key.second) + ")"] = c.morphism(m).name;
  return j;
}

}  // namespace sitelab::io
