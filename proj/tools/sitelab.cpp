#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "sitelab/catalogue.hpp"
#include "sitelab/scenario.hpp"

namespace fs = std::filesystem;
using sitelab::scenario::Json;

namespace {

struct Global {
  std::uint64_t seed = 0;
  std::string out;
  int max_n = -1;
};

/// An input entry from a command-line argument: a file path, or for spaces
/// and sites the name of a catalogue space.
Json input_entry(const std::string& kind, const std::string& arg) {
  if (fs::exists(arg)) return Json{{"kind", kind}, {"path", fs::absolute(arg).string()}};
  if (kind == "site") return Json{{"kind", "site"}, {"doc", {{"space", arg}}}};
  return Json{{"kind", kind}, {"path", arg}};
}

int emit(const sitelab::scenario::Outcome& r, const Global& g) {
  const std::string text = r.report.dump(2) + "\n";
  const std::string path = !g.out.empty() ? g.out : r.output.value_or("");
  if (path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(path);
    if (!f) {
      std::cerr << "cannot write " << path << "\n";
      return 2;
    }
    f << text;
    std::cerr << r.report["name"].get<std::string>() << ": " << r.report["status"].get<std::string>() << " (report in "
              << path << ")\n";
  }
  if (r.exit_code == 2) std::cerr << "error: " << r.report["error"].get<std::string>() << "\n";
  return r.exit_code;
}

sitelab::scenario::Options options(const Global& g) {
  sitelab::scenario::Options o;
  o.seed = g.seed;
  if (g.max_n >= 0) o.max_n = g.max_n;
  return o;
}

int run_synthesized(const Json& scenario, const Global& g) {
  const auto doc = sitelab::io::parse_document(scenario.dump(2), "<command line>");
  return emit(sitelab::scenario::run(doc, options(g), "."), g);
}

Json scenario_of(const std::string& name, Json inputs, Json check) {
  return Json{{"name", name}, {"inputs", std::move(inputs)}, {"checks", Json::array({std::move(check)})}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite sites, sheaves, points and valuation experiments"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Seed for sampling checks (default 0)");
  app.add_option("--out", g.out, "Write the JSON report to this path");
  app.add_option("--max-n", g.max_n, "Step horizon for valuation checks");

  std::function<int()> action;
  auto set = [&](CLI::App* sub, std::function<int()> f) { sub->callback([&action, f] { action = f; }); };

  // site
  auto* site = app.add_subcommand("site", "Categories, topologies and joins");
  site->require_subcommand(1);
  std::string a1, a2, a3, a4, target, property = "iso";
  std::vector<std::string> members;
  {
    auto* s = site->add_subcommand("validate", "Validate a category document");
    s->add_option("category", a1, "Category JSON")->required();
    set(s, [&] {
      return run_synthesized(scenario_of("site validate", {{"c", input_entry("category", a1)}},
                                         {{"op", "validate_category"}, {"category", "c"}}),
                             g);
    });
    s = site->add_subcommand("topology", "Check the topology axioms of a site");
    s->add_option("site", a1, "Site JSON or catalogue space name")->required();
    s->add_option("--target", target, "Object to test a family on");
    s->add_option("--members", members, "Morphism names of the family");
    set(s, [&] {
      Json inputs{{"s", input_entry("site", a1)}};
      Json checks = Json::array({{{"op", "topology_axioms"}, {"site", "s"}}});
      if (!target.empty()) checks.push_back({{"op", "is_covering"}, {"site", "s"}, {"target", target}, {"members", members}});
      return run_synthesized(Json{{"name", "site topology"}, {"inputs", inputs}, {"checks", checks}}, g);
    });
    s = site->add_subcommand("join", "Join the topologies of two sites on one category");
    s->add_option("left", a1, "Site JSON")->required();
    s->add_option("right", a2, "Site JSON")->required();
    s->add_option("--target", target, "Object to test a family on");
    s->add_option("--members", members, "Morphism names of the family");
    set(s, [&] {
      Json check{{"op", "join"}, {"sites", {"l", "r"}}};
      if (!target.empty()) {
        check["target"] = target;
        check["members"] = members;
      }
      return run_synthesized(
          scenario_of("site join", {{"l", input_entry("site", a1)}, {"r", input_entry("site", a2)}}, check), g);
    });
  }

  // sheaf
  auto* sheaf = app.add_subcommand("sheaf", "Sheaf condition, sheafification, morphisms");
  sheaf->require_subcommand(1);
  {
    for (const auto& [name, op] : {std::pair{"sheafify", "sheafify"}, std::pair{"is-sheaf", "is_sheaf"}}) {
      auto* s = sheaf->add_subcommand(name, std::string("Run ") + op + " on a presheaf");
      s->add_option("site", a1, "Site JSON or catalogue space name")->required();
      s->add_option("sheaf", a2, "Presheaf JSON")->required();
      const std::string o = op;
      set(s, [&, o] {
        Json f = input_entry("sheaf", a2);
        f["on"] = "s";
        return run_synthesized(
            scenario_of("sheaf " + o, {{"s", input_entry("site", a1)}, {"F", f}}, {{"op", o}, {"sheaf", "F"}}), g);
      });
    }
    auto* s = sheaf->add_subcommand("morphism-check", "Decide iso, epi or mono for a morphism of sheaves");
    s->add_option("site", a1, "Site JSON or catalogue space name")->required();
    s->add_option("source", a2, "Source sheaf JSON")->required();
    s->add_option("target", a3, "Target sheaf JSON")->required();
    s->add_option("morphism", a4, "Morphism JSON")->required();
    s->add_option("--property", property, "iso, epi or mono")->check(CLI::IsMember({"iso", "epi", "mono"}));
    set(s, [&] {
      Json f = input_entry("sheaf", a2), h = input_entry("sheaf", a3), m = input_entry("morphism", a4);
      f["on"] = "s";
      h["on"] = "s";
      m["source"] = "F";
      m["target"] = "G";
      return run_synthesized(scenario_of("sheaf morphism-check",
                                         {{"s", input_entry("site", a1)}, {"F", f}, {"G", h}, {"m", m}},
                                         {{"op", "morphism_check"}, {"morphism", "m"}, {"property", property}}),
                             g);
    });
  }

  // points
  auto* points = app.add_subcommand("points", "Pro-objects, fibre functors and conservativity");
  points->require_subcommand(1);
  long long samples = 200, max_sections = 3, max_order = 8, count = 100;
  {
    for (const auto& [name, op] : {std::pair{"local", "local"}, std::pair{"fibre", "fibre_axioms"}}) {
      auto* s = points->add_subcommand(name, std::string("Run ") + op + " on a pro-object");
      s->add_option("site", a1, "Site JSON or catalogue space name")->required();
      s->add_option("pro_object", a2, "Pro-object JSON")->required();
      const std::string o = op;
      set(s, [&, o] {
        Json p = input_entry("pro_object", a2);
        p["on"] = "s";
        return run_synthesized(scenario_of("points " + o, {{"s", input_entry("site", a1)}, {"P", p}},
                                           {{"op", o}, {"pro_object", "P"}}),
                               g);
      });
    }
    auto* s = points->add_subcommand("conservativity", "Sampled iso versus stalkwise bijectivity");
    s->add_option("space", a1, "Catalogue space name")->required();
    s->add_option("--samples", samples, "Number of sampled morphisms");
    s->add_option("--max-sections", max_sections, "Largest section set allowed");
    set(s, [&] {
      return run_synthesized(scenario_of("points conservativity", Json::object(),
                                         {{"op", "conservativity"},
                                          {"space", a1},
                                          {"samples", samples},
                                          {"max_sections", max_sections},
                                          {"seed", g.seed}}),
                             g);
    });
    s = points->add_subcommand("detect-cover", "Joint surjectivity of a family at every stalk point");
    s->add_option("site", a1, "Zariski site JSON or catalogue space name")->required();
    s->add_option("--target", target, "Target object")->required();
    s->add_option("--members", members, "Morphism names of the family")->required();
    set(s, [&] {
      return run_synthesized(
          scenario_of("points detect-cover", {{"s", input_entry("site", a1)}},
                      {{"op", "detect_cover"}, {"site", "s"}, {"target", target}, {"members", members}}),
          g);
    });
  }

  // pushforward
  auto* push = app.add_subcommand("pushforward", "Exactness of direct images");
  push->require_subcommand(1);
  bool open_example = false;
  {
    auto* s = push->add_subcommand("check", "Closed-subspace sweep, or the open-immersion counterexample");
    s->add_option("space", a1, "Catalogue space name");
    s->add_option("--samples", samples, "Total samples over all closed subspaces");
    s->add_option("--max-order", max_order, "Largest section group order");
    s->add_flag("--open-counterexample", open_example, "Run the open-immersion counterexample instead");
    set(s, [&] {
      if (open_example)
        return run_synthesized(scenario_of("pushforward check", Json::object(), {{"op", "open_pushforward_counterexample"}}), g);
      if (a1.empty()) throw CLI::ValidationError("space", "a space is required without --open-counterexample");
      return run_synthesized(scenario_of("pushforward check", Json::object(),
                                         {{"op", "pushforward"},
                                          {"space", a1},
                                          {"samples", samples == 200 ? 500 : samples},
                                          {"max_order", max_order},
                                          {"seed", g.seed}}),
                             g);
    });
  }

  // val
  auto* val = app.add_subcommand("val", "Valuation lab");
  val->require_subcommand(1);
  long long n = 64;
  {
    auto one = [&](const char* name, const char* op, const char* help, const char* key) {
      auto* s = val->add_subcommand(name, help);
      s->add_option("input", a1, "Polynomial or rational function in x, y")->required();
      const std::string o = op, k = key;
      set(s, [&, o, k] { return run_synthesized(scenario_of(std::string("val ") + o, Json::object(), {{"op", o}, {k, a1}}), g); });
    };
    one("value", "value", "Value of a rational function in Z + Z√2", "input");
    one("member", "member", "Membership in the valuation ring", "input");
    auto* s = val->add_subcommand("centers", "Centers of the first n blow-ups");
    s->add_option("n", n, "Number of steps")->required();
    set(s, [&] { return run_synthesized(scenario_of("val centers", Json::object(), {{"op", "centers"}, {"n", n}}), g); });
    s = val->add_subcommand("escape", "Lift a DVR point (a, b) through the blow-up tower");
    s->add_option("a", a1, "First coordinate in t")->required();
    s->add_option("b", a2, "Second coordinate in t")->required();
    set(s, [&] {
      return run_synthesized(
          scenario_of("val escape", Json::object(), {{"op", "escape"}, {"a", a1}, {"b", a2}, {"expect", true}}), g);
    });
    s = val->add_subcommand("rv-trace", "Follow (x, y) in R_v through n blow-ups");
    s->add_option("n", n, "Number of steps")->required();
    set(s, [&] { return run_synthesized(scenario_of("val rv-trace", Json::object(), {{"op", "rv_trace"}, {"n", n}}), g); });
    s = val->add_subcommand("gm-zero", "Lift an element through {G_m -> A^1, 0 -> A^1}");
    s->add_option("model", a1, "Q, Q(t) or V")->required();
    s->add_option("element", a2, "Element in t")->required();
    set(s, [&] {
      return run_synthesized(
          scenario_of("val gm-zero", Json::object(), {{"op", "gm_zero"}, {"model", a1}, {"input", a2}}), g);
    });
    s = val->add_subcommand("divisible", "l-divisibility of a value group");
    s->add_option("group", a1, "Z, Z+sqrt2Z or Q")->required();
    s->add_option("l", count, "Prime")->required();
    set(s, [&] {
      return run_synthesized(
          scenario_of("val divisible", Json::object(), {{"op", "divisible"}, {"group", a1}, {"l", count}}), g);
    });
  }

  // demo, run
  auto* demo = app.add_subcommand("demo", "Run a bundled scenario (\"list\" to enumerate)");
  demo->add_option("name", a1, "Demo name or \"list\"")->required();
  set(demo, [&] {
    if (a1 == "list") {
      for (const auto& d : sitelab::scenario::builtin_demos()) std::cout << d << "\n";
      return 0;
    }
    return emit(sitelab::scenario::run_demo(a1, options(g)), g);
  });
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", a1, "Scenario JSON")->required();
  set(run, [&] { return emit(sitelab::scenario::run_file(a1, options(g)), g); });

  try {
    app.parse(argc, argv);
    return action ? action() : 0;
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
