#include "sitelab/scenario.hpp"

#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <set>

#include "sitelab/catalogue.hpp"
#include "sitelab/experiments.hpp"
#include "sitelab/prolocal.hpp"
#include "sitelab/stalks.hpp"
#include "sitelab/valuation.hpp"

namespace sitelab::scenario {

namespace {

using io::Document;
using io::Pointer;
namespace fs = std::filesystem;
namespace val = sitelab::valuation;

struct LoadedSite {
  Site site;
  std::optional<SpaceSite> space;
};

struct Inputs {
  std::map<std::string, std::string> kinds;
  std::map<std::string, CategoryPtr> categories;  // category inputs and the category of every site
  std::map<std::string, FiniteSpace> spaces;
  std::map<std::string, std::shared_ptr<const LoadedSite>> sites;
  std::map<std::string, io::SheafDocument> sheaves;
  std::map<std::string, io::MorphismDocument> morphisms;
  std::map<std::string, ProObject> pro_objects;
  std::map<std::string, std::string> on;  // sheaf, morphism or pro-object -> site or category input
  std::vector<std::shared_ptr<const Document>> documents;
};

// ------------------------------------------------------------------ inputs

std::optional<FiniteSpace> named_space(const Inputs& in, const std::string& name) {
  if (auto it = in.spaces.find(name); it != in.spaces.end()) return it->second;
  if (auto it = in.sites.find(name); it != in.sites.end() && it->second->space) return it->second->space->space;
  for (const auto& ns : space_catalogue())
    if (ns.name == name) return ns.space;
  return std::nullopt;
}

FiniteSpace read_space_value(const Document& d, const Pointer& p, const Inputs& in) {
  const auto& j = io::at_ptr(d, p);
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (auto s = named_space(in, name)) return *s;
    io::fail(d, p, "unknown space '" + name + "'");
  }
  if (j.is_object() && j.contains("catalogue")) {
    const auto name = io::str_at(d, p / "catalogue");
    for (const auto& ns : space_catalogue())
      if (ns.name == name) return ns.space;
    io::fail(d, p / "catalogue", "unknown catalogue space '" + name + "'");
  }
  return io::read_space(d, p);
}

CategoryPtr read_category_value(const Document& d, const Pointer& p, const Inputs& in) {
  const auto& j = io::at_ptr(d, p);
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (auto it = in.categories.find(name); it != in.categories.end()) return it->second;
    io::fail(d, p, "unknown category '" + name + "'");
  }
  return io::read_category(d, p);
}

LoadedSite read_site(const Document& d, const Pointer& p, const Inputs& in) {
  io::object_at(d, p);
  if (d.json.contains(p / "space")) {
    const auto space = read_space_value(d, p / "space", in);
    const std::string kind = d.json.contains(p / "topology") ? io::str_at(d, p / "topology") : "zariski";
    SpaceSite s;
    if (kind == "zariski")
      s = zariski_site(space);
    else if (kind == "closed")
      s = closed_cover_site(space);
    else if (kind == "subsets-open")
      s = subset_site(space, SubsetCover::Open);
    else if (kind == "subsets-closed")
      s = subset_site(space, SubsetCover::Closed);
    else
      io::fail(d, p / "topology", "unknown topology '" + kind + "' (zariski, closed, subsets-open, subsets-closed)");
    return {s.site, s};
  }
  if (!d.json.contains(p / "category")) io::fail(d, p, "a site needs \"space\" or \"category\" and \"pretopology\"");
  const auto c = read_category_value(d, p / "category", in);
  try {
    return {make_site(c, io::read_pretopology(d, p / "pretopology", *c)), std::nullopt};
  } catch (const io::DocumentError&) {
    throw;
  } catch (const InputError& e) {
    io::fail(d, p / "pretopology", e.what());
  }
}

std::string ref_name(const Document& d, const Pointer& p, const Inputs& in, std::initializer_list<const char*> kinds) {
  const auto name = io::str_at(d, p);
  const auto it = in.kinds.find(name);
  std::string wanted;
  for (const char* k : kinds) {
    wanted += (wanted.empty() ? "" : " or ") + std::string(k);
    if (it != in.kinds.end() && it->second == k) return name;
  }
  if (it == in.kinds.end()) io::fail(d, p, "unknown input '" + name + "'");
  io::fail(d, p, "input '" + name + "' is a " + it->second + ", expected a " + wanted);
}

CategoryPtr category_of(const Inputs& in, const std::string& name) {
  if (auto it = in.sites.find(name); it != in.sites.end()) return it->second->site.category;
  return in.categories.at(name);
}

Inputs load_inputs(const Document& sc, const std::string& base_dir) {
  Inputs in;
  const Pointer root = Pointer("/inputs");
  if (!sc.json.contains(root)) return in;
  const auto& entries = io::object_at(sc, root);
  for (const auto& [name, entry] : entries.items()) {
    const Pointer e = root / name;
    io::object_at(sc, e);
    const auto kind = io::str_at(sc, e / "kind");
    std::shared_ptr<const Document> doc;
    Pointer at;
    if (entry.contains("path")) {
      const auto rel = io::str_at(sc, e / "path");
      const fs::path full = fs::path(rel).is_absolute() ? fs::path(rel) : fs::path(base_dir) / rel;
      try {
        doc = std::make_shared<const Document>(io::load_document(full.string()));
      } catch (const io::DocumentError& err) {
        if (err.line() == 0) io::fail(sc, e / "path", "cannot open '" + full.string() + "'");
        throw;
      }
      in.documents.push_back(doc);
    } else if (entry.contains("doc")) {
      at = e / "doc";
    } else if (!(kind == "space" && entry.contains("catalogue"))) {
      io::fail(sc, e, "input needs \"path\" or \"doc\"");
    }
    const Document& d = doc ? *doc : sc;

    if (kind == "category") {
      in.categories[name] = io::read_category(d, at);
    } else if (kind == "space") {
      in.spaces[name] = entry.contains("catalogue") ? read_space_value(sc, e, in) : read_space_value(d, at, in);
    } else if (kind == "site") {
      auto s = std::make_shared<const LoadedSite>(read_site(d, at, in));
      in.categories[name] = s->site.category;
      in.sites[name] = std::move(s);
    } else if (kind == "sheaf") {
      const auto on = ref_name(sc, e / "on", in, {"site", "category"});
      in.sheaves[name] = io::read_sheaf(d, at, category_of(in, on));
      in.on[name] = on;
    } else if (kind == "morphism") {
      const auto src = ref_name(sc, e / "source", in, {"sheaf"});
      const auto tgt = ref_name(sc, e / "target", in, {"sheaf"});
      if (in.on[src] != in.on[tgt]) io::fail(sc, e / "target", "source and target live on different inputs");
      in.morphisms[name] = io::read_morphism(d, at, in.sheaves[src], in.sheaves[tgt]);
      in.on[name] = in.on[src];
    } else if (kind == "pro_object") {
      const auto on = ref_name(sc, e / "on", in, {"site", "category"});
      in.pro_objects.emplace(name, io::read_pro_object(d, at, category_of(in, on)));
      in.on[name] = on;
    } else {
      io::fail(sc, e / "kind", "unknown input kind '" + kind + "' (category, space, site, sheaf, morphism, pro_object)");
    }
    in.kinds[name] = kind;
  }
  return in;
}

// ------------------------------------------------------------------ checks

using Task = std::function<Json()>;

struct Ctx {
  const Document& d;
  Pointer at;
  const Inputs& in;
  const Options& opt;

  Pointer p(const std::string& k) const { return at / k; }
  bool has(const std::string& k) const { return d.json.contains(at / k); }
  [[noreturn]] void fail(const std::string& k, const std::string& msg) const { io::fail(d, p(k), msg); }

  std::string str(const std::string& k) const { return io::str_at(d, p(k)); }
  std::string str(const std::string& k, const std::string& def) const { return has(k) ? str(k) : def; }
  long long integer(const std::string& k) const { return io::int_at(d, p(k)); }
  long long integer(const std::string& k, long long def) const { return has(k) ? integer(k) : def; }
  long long positive(const std::string& k, long long def, long long max) const {
    const long long v = integer(k, def);
    if (v < 1 || v > max) fail(k, "expected an integer in 1.." + std::to_string(max));
    return v;
  }
  std::uint64_t seed() const {
    if (!has("seed")) return opt.seed;
    const long long s = integer("seed");
    if (s < 0) fail("seed", "seed must be non-negative");
    return static_cast<std::uint64_t>(s);
  }
  int horizon(const std::string& k, int def) const {
    if (opt.max_n) return *opt.max_n;
    const long long v = integer(k, def);
    if (v < 0 || v > 100000) fail(k, "expected an integer in 0..100000");
    return static_cast<int>(v);
  }

  std::string ref(const std::string& k, std::initializer_list<const char*> kinds) const {
    return ref_name(d, p(k), in, kinds);
  }
  std::shared_ptr<const LoadedSite> site(const std::string& k) const { return in.sites.at(ref(k, {"site"})); }
  std::shared_ptr<const LoadedSite> site_of(const std::string& k, const std::string& name) const {
    const auto& on = in.on.at(name);
    if (!in.sites.count(on)) fail(k, "'" + name + "' lives on category '" + on + "', which has no topology");
    return in.sites.at(on);
  }
  std::shared_ptr<const LoadedSite> zariski(const std::shared_ptr<const LoadedSite>& s, const std::string& k) const {
    if (!s->space) fail(k, "expected a site built from a space");
    const auto z = zariski_site(s->space->space);
    if (!(z.topology() == s->space->topology())) fail(k, "expected a Zariski site");
    return s;
  }
  FiniteSpace space(const std::string& k) const {
    const auto name = str(k);
    if (auto s = named_space(in, name)) return *s;
    fail(k, "unknown space '" + name + "'");
  }
  std::vector<NamedSpace> spaces(const std::string& k) const {
    if (!has(k)) return space_catalogue();
    std::vector<NamedSpace> out;
    const auto names = io::string_list(d, p(k));
    for (std::size_t i = 0; i < names.size(); ++i) {
      auto s = named_space(in, names[i]);
      if (!s) io::fail(d, p(k) / i, "unknown space '" + names[i] + "'");
      out.push_back({names[i], *s});
    }
    return out;
  }
  ObjId object(const std::string& k, const FiniteCategory& c) const { return io::object_named(d, p(k), c); }
  std::vector<MorId> members(const std::string& k, const FiniteCategory& c, ObjId target) const {
    std::vector<MorId> out;
    const auto& a = io::array_at(d, p(k));
    for (std::size_t i = 0; i < a.size(); ++i) {
      const MorId m = io::morphism_named(d, p(k) / i, c);
      if (c.target(m) != target)
        io::fail(d, p(k) / i, "morphism '" + c.morphism(m).name + "' does not end at " + c.object_name(target));
      out.push_back(m);
    }
    return out;
  }
  template <typename T, typename F>
  T parse_value(const std::string& k, F&& f) const {
    try {
      return f(str(k));
    } catch (const val::ValuationError& e) {
      fail(k, e.what());
    }
  }
};

bool is_prime(long long q) {
  if (q < 2) return false;
  for (long long k = 2; k * k <= q; ++k)
    if (q % k == 0) return false;
  return true;
}

Json verdict(bool v) { return Json{{"verdict", v}}; }

Json lift_trace(const val::LiftResult& r) {
  Json t = Json::array();
  for (const auto& s : r.trace) {
    Json step{{"step", s.step}, {"chart", std::string(1, s.chart)}, {"a", s.a.str()}, {"b", s.b.str()}};
    step["ord_a"] = s.ord_a ? Json(*s.ord_a) : Json("inf");
    step["ord_b"] = s.ord_b ? Json(*s.ord_b) : Json("inf");
    t.push_back(step);
  }
  return t;
}

Json outcome_json(const experiments::Outcome& o) {
  Json j = verdict(o.ok);
  j["result"] = {{"checked", o.checked}};
  if (!o.ok) j["witness"] = o.witness;
  return j;
}

using Op = std::function<Task(const Ctx&)>;

const std::map<std::string, Op>& registry() {
  static const std::map<std::string, Op> ops = [] {
    std::map<std::string, Op> m;

    // ------------------------------------------------------------- sites
    m["validate_category"] = [](const Ctx& x) -> Task {
      const auto c = category_of(x.in, x.ref("category", {"category", "site"}));
      return [c] {
        const auto r = validate_category(*c);
        Json j = verdict(r.ok);
        j["result"] = {{"objects", c->object_count()}, {"morphisms", c->morphism_count()}, {"poset", c->is_poset()}};
        if (!r.ok) j["witness"] = r.axiom;
        return j;
      };
    };
    m["topology_axioms"] = [](const Ctx& x) -> Task {
      const auto s = x.site("site");
      return [s] {
        const auto r = check_topology_axioms(s->site.topology);
        Json j = verdict(r.ok);
        j["result"] = {{"covering_sieves", s->site.topology.total_covering()}};
        if (!r.ok) j["witness"] = r.axiom + " fails at " + r.object + " for " + r.sieve + ": " + r.detail;
        return j;
      };
    };
    m["is_covering"] = [](const Ctx& x) -> Task {
      const auto s = x.site("site");
      const auto& c = *s->site.category;
      const ObjId target = x.object("target", c);
      const auto fam = x.members("members", c, target);
      return [s, target, fam] {
        Json j = verdict(is_covering(s->site.topology, target, fam));
        j["result"] = describe_family(*s->site.category, fam);
        return j;
      };
    };
    m["join"] = [](const Ctx& x) -> Task {
      const auto& a = io::array_at(x.d, x.p("sites"));
      if (a.size() != 2) x.fail("sites", "expected two sites");
      const auto s1 = ref_name(x.d, x.p("sites") / 0, x.in, {"site"});
      const auto s2 = ref_name(x.d, x.p("sites") / 1, x.in, {"site"});
      const auto l = x.in.sites.at(s1), r = x.in.sites.at(s2);
      const auto& c = *l->site.category;
      if (c.object_names() != r->site.category->object_names())
        x.fail("sites", "sites '" + s1 + "' and '" + s2 + "' have different categories");
      std::optional<std::pair<ObjId, std::vector<MorId>>> fam;
      if (x.has("target")) {
        const ObjId t = x.object("target", c);
        fam = std::make_pair(t, x.members("members", c, t));
      }
      return [l, r, fam] {
        const auto t = join_topologies(l->site.topology, r->site.topology);
        const auto ax = check_topology_axioms(t);
        Json j = verdict(ax.ok && (!fam || is_covering(t, fam->first, fam->second)));
        j["result"] = {{"covering_sieves", t.total_covering()},
                       {"left", l->site.topology.total_covering()},
                       {"right", r->site.topology.total_covering()}};
        if (fam) j["result"]["family"] = describe_family(*l->site.category, fam->second);
        if (!ax.ok) j["witness"] = ax.axiom + " fails at " + ax.object;
        return j;
      };
    };

    // ------------------------------------------------------------ sheaves
    m["sheafify"] = [](const Ctx& x) -> Task {
      const auto name = x.ref("sheaf", {"sheaf"});
      const auto s = x.site_of("sheaf", name);
      const auto f = x.in.sheaves.at(name).set;
      return [s, f] {
        const auto sh = sheafify(f, s->site.topology);
        const auto chk = is_sheaf(*sh.sheaf, s->site.topology);
        const auto was = is_sheaf(*f, s->site.topology);
        bool unit_iso = true;
        for (ObjId o = 0; o < f->category()->object_count(); ++o) {
          std::set<int> img(sh.unit.components[o].begin(), sh.unit.components[o].end());
          unit_iso = unit_iso && static_cast<int>(img.size()) == sh.sheaf->size(o) &&
                     static_cast<int>(sh.unit.components[o].size()) == sh.sheaf->size(o);
        }
        Json j = verdict(chk.ok && unit_iso == was.ok);
        j["result"] = {{"input_is_sheaf", was.ok}, {"unit_iso", unit_iso}, {"sheaf", io::to_json(*sh.sheaf)}};
        if (!chk.ok) j["witness"] = chk.reason + " at " + chk.object;
        return j;
      };
    };
    m["is_sheaf"] = [](const Ctx& x) -> Task {
      const auto name = x.ref("sheaf", {"sheaf"});
      const auto s = x.site_of("sheaf", name);
      const auto f = x.in.sheaves.at(name).set;
      return [s, f] {
        const auto r = is_sheaf(*f, s->site.topology);
        Json j = verdict(r.ok);
        if (!r.ok) j["witness"] = r.reason + " at " + r.object + " for the covering sieve " + r.sieve;
        return j;
      };
    };
    m["morphism_check"] = [](const Ctx& x) -> Task {
      const auto name = x.ref("morphism", {"morphism"});
      const auto s = x.site_of("morphism", name);
      const auto prop = x.str("property", "iso");
      if (prop != "iso" && prop != "epi" && prop != "mono") x.fail("property", "expected iso, epi or mono");
      const auto mor = x.in.morphisms.at(name).set;
      return [s, mor, prop] {
        const auto& t = s->site.topology;
        const auto r = prop == "iso" ? is_iso(mor, t) : prop == "epi" ? is_epi(mor, t) : is_mono(mor, t);
        Json j = verdict(r.holds);
        j["result"] = prop;
        if (!r.holds) j["witness"] = r.witness;
        return j;
      };
    };

    // ------------------------------------------------------------- points
    m["local"] = [](const Ctx& x) -> Task {
      const auto name = x.ref("pro_object", {"pro_object"});
      const auto s = x.site_of("pro_object", name);
      const auto& p = x.in.pro_objects.at(name);
      return [s, p] {
        const auto r = is_tau_local(p, s->site.generators);
        Json j = verdict(r.local);
        if (!r.local) j["witness"] = "class " + r.missing + " does not lift along " + r.family;
        return j;
      };
    };
    m["fibre_axioms"] = [](const Ctx& x) -> Task {
      const auto name = x.ref("pro_object", {"pro_object"});
      const auto s = x.site_of("pro_object", name);
      const auto& p = x.in.pro_objects.at(name);
      std::vector<PresheafPtr> cat;
      if (x.has("sheaves")) {
        const auto& a = io::array_at(x.d, x.p("sheaves"));
        for (std::size_t i = 0; i < a.size(); ++i) {
          const auto n = ref_name(x.d, x.p("sheaves") / i, x.in, {"sheaf"});
          if (x.in.on.at(n) != x.in.on.at(name)) io::fail(x.d, x.p("sheaves") / i, "sheaf lives on another input");
          cat.push_back(x.in.sheaves.at(n).set);
        }
      } else if (s->space) {
        for (const auto& np : presheaf_catalogue(*s->space, x.seed())) cat.push_back(np.presheaf);
      }
      std::vector<std::pair<SheafMorphism, SheafMorphism>> pairs;
      if (x.has("pairs")) {
        const auto& a = io::array_at(x.d, x.p("pairs"));
        for (std::size_t i = 0; i < a.size(); ++i) {
          const auto f = ref_name(x.d, x.p("pairs") / i / 0, x.in, {"morphism"});
          const auto g = ref_name(x.d, x.p("pairs") / i / 1, x.in, {"morphism"});
          pairs.emplace_back(x.in.morphisms.at(f).set, x.in.morphisms.at(g).set);
        }
      }
      return [s, p, cat, pairs] {
        const auto w = FibreFunctorWitness::unchecked(p);
        const auto reps = sheafified_representables(s->site);
        const auto r = check_fibre_axioms(w, s->site, reps, cat, pairs);
        Json j = verdict(r.ok());
        j["result"] = {{"terminal", r.terminal}, {"products", r.products}, {"equalizers", r.equalizers},
                       {"covers", r.covers}};
        if (!r.ok()) j["witness"] = r.witness;
        return j;
      };
    };
    m["conservativity"] = [](const Ctx& x) -> Task {
      if (x.has("morphisms")) {
        const auto s = x.zariski(x.site("site"), "site");
        std::vector<SheafMorphism> ms;
        const auto& a = io::array_at(x.d, x.p("morphisms"));
        for (std::size_t i = 0; i < a.size(); ++i)
          ms.push_back(x.in.morphisms.at(ref_name(x.d, x.p("morphisms") / i, x.in, {"morphism"})).set);
        return [s, ms] {
          const auto pts = stalk_points(*s->space);
          std::vector<const FibreFunctorWitness*> ptrs;
          std::vector<std::string> names;
          for (int i = 0; i < s->space->space.size(); ++i) {
            ptrs.push_back(&pts[i]);
            names.push_back(s->space->space.name(i));
          }
          const auto r = conservativity_check(names, ptrs, ms, s->site.topology);
          Json j = verdict(r.conservative);
          Json rows = Json::array();
          for (const auto& e : r.entries)
            rows.push_back({{"sample", e.sample}, {"iso", e.iso}, {"all_points_bijective", e.all_points_bijective},
                            {"failing_point", e.failing_point}});
          j["result"] = rows;
          return j;
        };
      }
      const auto space = x.space("space");
      const int samples = static_cast<int>(x.positive("samples", 200, 1000000));
      const int max_sections = static_cast<int>(x.positive("max_sections", 3, 64));
      const auto seed = x.seed();
      return [space, samples, max_sections, seed] {
        const auto r = experiments::deligne_sample(space, samples, seed, max_sections);
        Json j = outcome_json(r.outcome);
        j["result"]["isos"] = r.isos;
        j["result"]["discrepancies"] = r.discrepancies;
        return j;
      };
    };
    m["detect_cover"] = [](const Ctx& x) -> Task {
      const auto s = x.zariski(x.site("site"), "site");
      const auto& c = *s->site.category;
      const ObjId target = x.object("target", c);
      const auto fam = x.members("members", c, target);
      return [s, target, fam] {
        const auto pts = stalk_points(*s->space);
        std::vector<const FibreFunctorWitness*> ptrs;
        std::vector<std::string> names;
        for (int i = 0; i < s->space->space.size(); ++i) {
          ptrs.push_back(&pts[i]);
          names.push_back(s->space->space.name(i));
        }
        const auto reps = sheafified_representables(s->site);
        const auto r = cover_detection(names, ptrs, reps, *s->site.category, target, fam);
        Json j = verdict(r.jointly_surjective);
        j["result"] = {{"family", describe_family(*s->site.category, fam)},
                       {"is_covering", is_covering(s->site.topology, target, fam)}};
        if (!r.jointly_surjective) j["witness"] = r.witness;
        return j;
      };
    };

    // -------------------------------------------------------- pushforward
    m["pushforward"] = [](const Ctx& x) -> Task {
      const auto space = x.space("space");
      const int samples = static_cast<int>(x.positive("samples", 500, 1000000));
      const long long max_order = x.positive("max_order", 8, 1 << 20);
      std::vector<int> primes{2, 3};
      if (x.has("primes")) {
        primes.clear();
        const auto& a = io::array_at(x.d, x.p("primes"));
        for (std::size_t i = 0; i < a.size(); ++i) {
          const long long q = io::int_at(x.d, x.p("primes") / i);
          if (q < 2 || q > 97 || !is_prime(q))
            io::fail(x.d, x.p("primes") / i, "expected a prime below 100");
          primes.push_back(static_cast<int>(q));
        }
        if (primes.empty()) x.fail("primes", "expected at least one prime");
      }
      const auto seed = x.seed();
      return [space, samples, max_order, primes, seed] {
        const auto r = experiments::closed_pushforward_sweep(space, samples, seed, primes, max_order);
        Json j = outcome_json(r.outcome);
        j["result"]["closed_subspaces"] = r.subspaces;
        j["result"]["rejected"] = r.rejected;
        return j;
      };
    };
    m["open_pushforward_counterexample"] = [](const Ctx&) -> Task {
      return [] {
        const auto r = experiments::open_pushforward_counterexample();
        Json j = verdict(r.failure_found);
        j["result"] = {{"source_order", r.source_order}, {"target_order", r.target_order}};
        if (r.failure_found) j["witness"] = r.witness;
        return j;
      };
    };
    m["cocontinuity"] = [](const Ctx& x) -> Task {
      const auto space = x.space("space");
      return [space] {
        const auto r = experiments::closed_subspace_cocontinuity(space);
        Json j = outcome_json(r.outcome);
        j["result"]["empty_clause_uses"] = r.empty_clause_uses;
        return j;
      };
    };

    // ------------------------------------------------------------- sweeps
    m["topology_soundness"] = [](const Ctx& x) -> Task {
      const int mp = static_cast<int>(x.positive("max_points", 5, 6));
      const int mf = static_cast<int>(x.positive("max_family", 4, 64));
      return [mp, mf] { return outcome_json(experiments::topology_soundness(mp, mf)); };
    };
    m["cover_detection_sweep"] = [](const Ctx& x) -> Task {
      const int mp = static_cast<int>(x.positive("max_points", 5, 6));
      const int mf = static_cast<int>(x.positive("max_family", 4, 64));
      return [mp, mf] { return outcome_json(experiments::cover_detection_sweep(mp, mf)); };
    };
    m["sheafification_suite"] = [](const Ctx& x) -> Task {
      std::vector<FiniteSpace> spaces;
      for (const auto& ns : x.spaces("spaces")) spaces.push_back(ns.space);
      const auto seed = x.seed();
      return [spaces, seed] { return outcome_json(experiments::sheafification_suite(spaces, seed)); };
    };
    m["locality_classification"] = [](const Ctx& x) -> Task {
      const auto spaces = x.spaces("spaces");
      return [spaces] {
        bool ok = true;
        Json rows = Json::array();
        std::string witness;
        for (const auto& e : experiments::locality_classification(spaces)) {
          const bool row_ok = e.closed_whole_local == e.irreducible && e.zariski_points_local;
          if (!row_ok && ok) witness = e.space;
          ok = ok && row_ok;
          rows.push_back({{"space", e.space}, {"irreducible", e.irreducible},
                          {"closed_whole_local", e.closed_whole_local},
                          {"zariski_points_local", e.zariski_points_local}});
        }
        Json j = verdict(ok);
        j["result"] = rows;
        if (!ok) j["witness"] = witness;
        return j;
      };
    };

    // ---------------------------------------------------------- valuation
    m["value"] = [](const Ctx& x) -> Task {
      const auto f = x.parse_value<val::RationalFn>("input", [](const std::string& s) {
        auto r = val::parse_rational_fn(s);
        if (r.num.is_zero()) throw val::ValuationError("the zero function has no value");
        return r;
      });
      return [f] {
        Json j = verdict(true);
        j["result"] = val::value(f).str();
        return j;
      };
    };
    m["member"] = [](const Ctx& x) -> Task {
      const auto f = x.parse_value<val::RationalFn>("input", [](const std::string& s) { return val::parse_rational_fn(s); });
      return [f] {
        const auto mem = f.num.is_zero() ? val::Membership::MaximalIdeal : val::rv_membership(f);
        Json j = verdict(mem != val::Membership::Outside);
        j["result"] = val::to_string(mem);
        if (!f.num.is_zero()) j["trace"] = {{"value", val::value(f).str()}};
        return j;
      };
    };
    m["centers"] = [](const Ctx& x) -> Task {
      const int n = x.horizon("n", 8);
      return [n] {
        Json rows = Json::array();
        for (int k = 0; const auto& c : val::center_sequence(n))
          rows.push_back({{"step", k++}, {"chart", std::string(1, c.chart)}, {"beta", c.beta.str()},
                          {"gamma", c.gamma.str()}});
        Json j = verdict(true);
        j["result"] = rows;
        return j;
      };
    };
    m["escape"] = [](const Ctx& x) -> Task {
      const auto a = x.parse_value<val::TFunction>("a", val::parse_t_function);
      const auto b = x.parse_value<val::TFunction>("b", val::parse_t_function);
      for (const char* k : {"a", "b"}) {
        const auto& f = std::string(k) == "a" ? a : b;
        if (!f.is_zero() && f.ord() < 0) x.fail(k, "coordinates must have ord_t >= 0");
      }
      const int n = x.horizon("max_n", 64);
      return [a, b, n] {
        const auto r = val::lift_dvr_point(a, b, n);
        Json j = verdict(r.escaped);
        j["result"] = {{"escaped", r.escaped}, {"step", r.step}, {"word", r.word}};
        if (r.escaped) j["witness"] = r.witness;
        j["trace"] = lift_trace(r);
        return j;
      };
    };
    m["rv_trace"] = [](const Ctx& x) -> Task {
      const int n = x.horizon("n", 64);
      return [n] {
        const auto t = val::canonical_rv_trace(n);
        bool positive = true;
        for (std::size_t k = 0; k < t.values_a.size(); ++k)
          positive = positive && t.values_a[k].sign() > 0 && t.values_b[k].sign() > 0;
        const bool periodic = t.period > 0 && t.period == t.expected_period;
        Json j = verdict(!t.escaped && positive && t.matches_center && periodic);
        Json runs = Json::array();
        for (int r : t.runs) runs.push_back(r);
        j["result"] = {{"escaped", t.escaped}, {"word", t.word}, {"matches_center", t.matches_center},
                       {"preperiod", t.preperiod}, {"period", t.period}, {"expected_period", t.expected_period},
                       {"runs", runs}};
        Json trace = Json::array();
        for (std::size_t k = 0; k < t.coords_a.size(); ++k)
          trace.push_back({{"step", k},
                           {"chart", k == 0 ? std::string("-") : std::string(1, t.word[k - 1])},
                           {"a", t.coords_a[k].str()},
                           {"b", t.coords_b[k].str()},
                           {"v_a", t.values_a[k].str()},
                           {"v_b", t.values_b[k].str()}});
        j["trace"] = trace;
        if (t.escaped) j["witness"] = "the point leaves the center";
        return j;
      };
    };
    m["gm_zero"] = [](const Ctx& x) -> Task {
      const auto name = x.str("model", "Q");
      const auto model = val::parse_ring_model(name);
      if (!model) x.fail("model", "unknown ring model '" + name + "' (Q, Q(t), V)");
      const auto r = x.parse_value<val::TFunction>("input", val::parse_t_function);
      if (*model == val::RingModel::RationalField && (r.num.c.size() > 1 || r.den.c.size() > 1))
        x.fail("input", "not a rational number");
      return [model = *model, r] {
        const auto l = val::unit_or_zero_lift(model, r);
        Json j = verdict(l.kind != val::LiftKind::Fail);
        j["result"] = val::to_string(l.kind);
        if (!l.witness.empty()) j["witness"] = l.witness;
        return j;
      };
    };
    m["divisible"] = [](const Ctx& x) -> Task {
      const auto name = x.str("group");
      const auto g = val::parse_value_group(name);
      if (!g) x.fail("group", "unknown value group '" + name + "' (Z, Z+sqrt2Z, Q)");
      const long long l = x.integer("l");
      try {
        val::divisibility_witness(*g, l);
      } catch (const val::ValuationError& e) {
        x.fail("l", e.what());
      }
      return [g = *g, l] {
        const auto r = val::divisibility_witness(g, l);
        Json j = verdict(r.divisible);
        j["result"] = r.divisible ? "divisible" : "not divisible";
        if (r.witness) j["witness"] = r.witness->str();
        return j;
      };
    };
    m["escape_table"] = [](const Ctx& x) -> Task {
      const int pq = static_cast<int>(x.positive("max_pq", 12, 200));
      const int n = x.horizon("max_n", 64);
      return [pq, n] {
        bool ok = true;
        std::string witness;
        Json rows = Json::array();
        for (const auto& r : experiments::escape_table(pq, n)) {
          if (r.step != r.predicted && ok)
            witness = "(t^" + std::to_string(r.p) + ", t^" + std::to_string(r.q) + ") escapes at " +
                      std::to_string(r.step) + ", predicted " + std::to_string(r.predicted);
          ok = ok && r.step == r.predicted;
          rows.push_back({{"p", r.p}, {"q", r.q}, {"step", r.step}, {"predicted", r.predicted}});
        }
        Json j = verdict(ok);
        j["result"] = rows;
        if (!ok) j["witness"] = witness;
        return j;
      };
    };
    m["gm_zero_family"] = [](const Ctx& x) -> Task {
      const int count = static_cast<int>(x.positive("count", 100, 1000000));
      const auto seed = x.seed();
      return [count, seed] {
        const auto r = experiments::gm_zero_family(count, seed);
        Json j = outcome_json(r.outcome);
        j["result"]["gm"] = r.gm;
        j["result"]["zero"] = r.zero;
        j["result"]["dvr_witness"] = r.dvr_witness;
        return j;
      };
    };
    return m;
  }();
  return ops;
}

bool is_valuation_op(const std::string& op) {
  static const std::set<std::string> v{"value", "member", "centers", "escape", "rv_trace", "gm_zero", "divisible",
                                       "escape_table", "gm_zero_family"};
  return v.count(op) != 0;
}

struct Planned {
  std::string label;
  std::string op;
  Json params;
  std::optional<Json> expect;
  Task task;
};

Json error_report(const std::string& name, const std::string& message) {
  return Json{{"schema", 1}, {"name", name}, {"status", "error"}, {"error", message}, {"entries", Json::array()}};
}

Json entry_for(const Planned& p, const Json& out) {
  Json e{{"check", p.label}};
  if (p.label != p.op || is_valuation_op(p.op)) e["op"] = p.op;
  const bool v = out.value("verdict", false);
  bool pass;
  if (!p.expect)
    pass = v;
  else if (p.expect->is_boolean())
    pass = v == p.expect->get<bool>();
  else
    pass = out.contains("result") && out["result"] == *p.expect;
  e["status"] = pass ? "pass" : "fail";
  e["verdict"] = v;
  if (p.expect) e["expect"] = *p.expect;
  if (is_valuation_op(p.op)) e["input"] = p.params;
  for (const char* k : {"result", "witness", "trace"})
    if (out.contains(k)) e[k] = out[k];
  return e;
}

}  // namespace

std::vector<std::string> operations() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

Outcome run(const Document& sc, const Options& options, const std::string& base_dir) {
  std::string name = sc.file;
  try {
    io::object_at(sc, Pointer());
    if (sc.json.contains("name")) name = io::str_at(sc, Pointer("/name"));
    const Inputs in = load_inputs(sc, base_dir);

    std::vector<Planned> plan;
    const Pointer cp("/checks");
    const auto& checks = io::array_at(sc, cp);
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const Pointer at = cp / i;
      io::object_at(sc, at);
      const auto op = io::str_at(sc, at / "op");
      const auto it = registry().find(op);
      if (it == registry().end()) io::fail(sc, at / "op", "unknown operation '" + op + "'");
      Planned p;
      p.op = op;
      p.label = sc.json.at(at).contains("name") ? io::str_at(sc, at / "name") : op;
      if (sc.json.at(at).contains("expect")) p.expect = sc.json.at(at / "expect");
      p.params = sc.json.at(at);
      for (const char* k : {"op", "name", "expect"}) p.params.erase(k);
      p.task = it->second(Ctx{sc, at, in, options});
      plan.push_back(std::move(p));
    }

    std::vector<Json> outs(plan.size());
    auto guarded = [](const Task& t) -> Json {
      try {
        return t();
      } catch (const std::exception& e) {
        return Json{{"error", e.what()}};
      }
    };
    if (options.concurrent) {
      std::vector<std::future<Json>> futures;
      for (const auto& p : plan) futures.push_back(std::async(std::launch::async, guarded, p.task));
      for (std::size_t i = 0; i < plan.size(); ++i) outs[i] = futures[i].get();
    } else {
      for (std::size_t i = 0; i < plan.size(); ++i) outs[i] = guarded(plan[i].task);
    }

    Outcome res;
    Json entries = Json::array();
    bool all = true;
    for (std::size_t i = 0; i < plan.size(); ++i) {
      Json e;
      if (outs[i].contains("error")) {
        e = Json{{"check", plan[i].label}, {"status", "error"}, {"witness", outs[i]["error"]}};
        if (plan[i].label != plan[i].op) e["op"] = plan[i].op;
      } else {
        e = entry_for(plan[i], outs[i]);
      }
      all = all && e["status"] == "pass";
      entries.push_back(std::move(e));
    }
    res.report = Json{{"schema", 1}, {"name", name},     {"status", all ? "pass" : "fail"},
                      {"seed", options.seed}, {"entries", entries}};
    if (options.max_n) res.report["max_n"] = *options.max_n;
    res.exit_code = all ? 0 : 1;
    if (sc.json.contains("output")) {
      const auto out = io::str_at(sc, Pointer("/output"));
      res.output = fs::path(out).is_absolute() ? out : (fs::path(base_dir) / out).string();
    }
    return res;
  } catch (const io::DocumentError& e) {
    return Outcome{error_report(name, e.what()), 2, std::nullopt};
  } catch (const InputError& e) {
    return Outcome{error_report(name, sc.file + ": " + e.what()), 2, std::nullopt};
  }
}

Outcome run_file(const std::string& path, const Options& options) {
  try {
    const auto d = io::load_document(path);
    return run(d, options, fs::path(path).parent_path().string().empty() ? "." : fs::path(path).parent_path().string());
  } catch (const io::DocumentError& e) {
    return Outcome{error_report(path, e.what()), 2, std::nullopt};
  }
}

}  // namespace sitelab::scenario
