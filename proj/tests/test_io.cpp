#include "doctest.h"

#include "sitelab/catalogue.hpp"
#include "sitelab/io.hpp"

using namespace sitelab;
using namespace sitelab::io;

namespace {

const char* kArrow = R"({
  "objects": ["A", "B"],
  "morphisms": [{"name": "f", "src": "A", "tgt": "B"}]
})";

template <typename F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const DocumentError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("category documents complete identities") {
  const auto d = parse_document(kArrow, "arrow.json");
  const auto c = read_category(d);
  CHECK(c->object_count() == 2);
  CHECK(c->morphism_count() == 3);
  CHECK(c->hom(c->object_id("A"), c->object_id("B")).size() == 1);
  CHECK(validate_category(*c).ok);
  const auto again = read_category(parse_document(to_json(*c).dump()));
  CHECK(again->morphism_count() == 3);
}

TEST_CASE("category errors carry line and column") {
  const std::string bad = R"({
  "objects": ["A", "B"],
  "morphisms": [{"name": "f", "src": "A", "tgt": "C"}]
})";
  CHECK(error_of([&] { read_category(parse_document(bad, "bad.json")); }) ==
        "bad.json:3:50: unknown object 'C'");
  const auto syntax = error_of([] { parse_document("{\n  \"objects\": [\"A\",]\n}", "s.json"); });
  CHECK(syntax.rfind("s.json:2:", 0) == 0);

  const std::string missing = R"({
  "objects": ["A", "B", "C"],
  "morphisms": [{"name": "f", "src": "A", "tgt": "B"}, {"name": "g", "src": "B", "tgt": "C"}]
})";
  const auto e = error_of([&] { read_category(parse_document(missing, "m.json")); });
  CHECK(e.find("m.json:1:1: category axiom") == 0);
  CHECK(e.find("g, f") != std::string::npos);
}

TEST_CASE("space and pretopology documents round-trip") {
  const auto space = catalogue_space("diamond");
  const auto d = parse_document(to_json(space).dump(2));
  const auto s = read_space(d);
  CHECK(s.opens() == space.opens());
  const auto site = zariski_site(space);
  const auto pd = parse_document(to_json(site.site.generators, site.category()).dump());
  const auto p = read_pretopology(pd, Pointer(), site.category());
  CHECK(generate_topology(site.site.category, p) == site.topology());
}

TEST_CASE("sheaf documents") {
  const std::string doc = R"({
  "category": {"poset": {"elements": ["U", "X"], "leq": [["U", "X"]]}},
  "sheaf": {"values": {"U": ["0", "1"], "X": ["a", "b", "c"]},
            "restrictions": {"U<=X": ["0", "1", "1"]}},
  "group": {"values": {"U": {"cyclic_orders": [2]}, "X": {"cyclic_orders": [2, 2]}},
            "restrictions": {"U<=X": [[1, 1]]}},
  "bad": {"values": {"U": ["0"], "X": ["a"]},
          "restrictions": {"U<=X": ["1"]}},
  "map": {"components": {"U": [0, 1], "X": [[1, 0], [0, 1]]}}
})";
  const auto d = parse_document(doc, "sheaf.json");
  const auto c = read_category(d, Pointer("/category"));
  const auto f = read_sheaf(d, Pointer("/sheaf"), c);
  CHECK(f.set->size(c->object_id("X")) == 3);
  CHECK(f.ab == nullptr);
  const auto g = read_sheaf(d, Pointer("/group"), c);
  REQUIRE(g.ab);
  CHECK(g.ab->group_order(c->object_id("X")) == 4);
  CHECK(read_sheaf(parse_document(to_json(*g.ab).dump()), Pointer(), c).ab->group_order(1) == 4);
  CHECK(error_of([&] { read_sheaf(d, Pointer("/bad"), c); }) == "sheaf.json:8:37: unknown element '1'");
  CHECK(error_of([&] { read_morphism(d, Pointer("/map"), f, f); }).find("expected 3 entries") !=
        std::string::npos);

  const std::string self = R"({"components": {"U": [[1]], "X": [[0, 1], [1, 0]]}})";
  const auto m = read_morphism(parse_document(self), Pointer(), g, g);
  CHECK(m.ab);
  CHECK(validate_morphism(m.set).ok);
}

TEST_CASE("non-functorial presheaf is rejected") {
  const std::string doc = R"({
  "category": {"poset": {"elements": ["a", "b", "c"], "leq": [["a", "b"], ["b", "c"]]}},
  "sheaf": {"values": {"a": ["0", "1"], "b": ["0", "1"], "c": ["0", "1"]},
            "restrictions": {"a<=b": [0, 1], "b<=c": [0, 1], "a<=c": [1, 0]}}
})";
  const auto d = parse_document(doc, "nf.json");
  const auto c = read_category(d, Pointer("/category"));
  const auto e = error_of([&] { read_sheaf(d, Pointer("/sheaf"), c); });
  CHECK_MESSAGE(e.find("nf.json:4:29: presheaf axiom") == 0, e);
}

TEST_CASE("pro-object documents") {
  const auto site = zariski_site(catalogue_space("vee"));
  const std::string doc = R"({
  "index_poset": {"elements": ["l", "m"], "leq": [["l", "m"]]},
  "diagram": {"l": "{eta,x}", "m": "{eta,x,y}"}
})";
  const auto p = read_pro_object(parse_document(doc), Pointer(), site.site.category);
  CHECK(p.transitions.size() == 1);
  CHECK(is_tau_local(p, site.site.generators).local);
  const auto again = read_pro_object(parse_document(to_json(p).dump()), Pointer(), site.site.category);
  CHECK(again.transitions == p.transitions);

  const std::string split = R"({
  "index_poset": {"elements": ["x", "y"]},
  "diagram": {"x": "{eta,x}", "y": "{eta,y}"}
})";
  CHECK(error_of([&] { read_pro_object(parse_document(split, "p.json"), Pointer(), site.site.category); })
            .find("codirected") != std::string::npos);
}
