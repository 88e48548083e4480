#include "doctest.h"

#include <random>

#include "sitelab/catalogue.hpp"
#include "sitelab/experiments.hpp"

using namespace sitelab;
using namespace sitelab::experiments;

namespace {

/// A finite T0 space is irreducible exactly when it has a generic point:
/// one whose closure is everything.
bool has_generic_point(const FiniteSpace& s) {
  for (int g = 0; g < s.size(); ++g) {
    bool all = true;
    for (int y = 0; y < s.size(); ++y) all = all && s.specializes(g, y);
    if (all) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("topology soundness and cover detection on small spaces") {
  const auto t = topology_soundness(4, 3);
  CHECK_MESSAGE(t.ok, t.witness);
  CHECK(t.checked > 1000);
  const auto c = cover_detection_sweep(4, 3);
  CHECK_MESSAGE(c.ok, c.witness);
  CHECK(c.checked > 1000);
}

TEST_CASE("sheafification suite on the catalogue") {
  std::vector<FiniteSpace> spaces;
  for (const auto& n : space_catalogue()) spaces.push_back(n.space);
  const auto r = sheafification_suite(spaces, 3);
  CHECK_MESSAGE(r.ok, r.witness);
}

TEST_CASE("permuted copies are isomorphic and Deligne sampling agrees") {
  std::mt19937_64 rng(9);
  const auto space = catalogue_space("diamond");
  const auto f = random_stalk_sheaf(space, 3, rng);
  const auto [g, perm] = permuted_copy(f, rng);
  for (int x = 0; x < space.size(); ++x) {
    REQUIRE(g.stalks[x].size() == f.stalks[x].size());
    for (std::size_t i = 0; i < f.stalks[x].size(); ++i) CHECK(g.stalks[x][perm[x][i]] == f.stalks[x][i]);
  }
  for (const auto& n : space_catalogue()) {
    const auto r = deligne_sample(n.space, 60, 4);
    CHECK_MESSAGE(r.outcome.ok, n.name << ": " << r.outcome.witness);
    CHECK(r.isos > 0);
    CHECK(r.isos < 60);
  }
}

TEST_CASE("locality of constant pro-objects follows irreducibility") {
  for (const auto& e : locality_classification(space_catalogue())) {
    const bool irr = has_generic_point(catalogue_space(e.space));
    CHECK_MESSAGE(e.irreducible == irr, e.space);
    CHECK_MESSAGE(e.closed_whole_local == irr, e.space);
    CHECK_MESSAGE(e.zariski_points_local, e.space);
  }
}

TEST_CASE("closed pushforward stays exact, open pushforward does not") {
  for (const auto& n : space_catalogue()) {
    const auto r = closed_pushforward_sweep(n.space, 80, 2);
    CHECK_MESSAGE(r.outcome.ok, n.name << ": " << r.outcome.witness);
    CHECK(r.outcome.checked == 80);
    CHECK(r.subspaces == static_cast<long long>(n.space.closed_sets().size()) - 1);
    const auto cc = closed_subspace_cocontinuity(n.space);
    CHECK_MESSAGE(cc.outcome.ok, cc.outcome.witness);
  }
  const auto oc = open_pushforward_counterexample();
  CHECK(oc.failure_found);
  CHECK(oc.source_order == 16);
  CHECK(oc.target_order == 16);
  CHECK(oc.witness.find("{a,b,c,d,z}") != std::string::npos);
}

TEST_CASE("escape table and the G_m/0 family") {
  const auto rows = escape_table(8, 64);
  CHECK(rows.size() == 64);
  for (const auto& r : rows) CHECK_MESSAGE(r.step == r.predicted, r.p << "," << r.q);
  CHECK(predicted_escape(1, 1, 8) == 1);
  CHECK(predicted_escape(2, 3, 8) == 3);
  CHECK(predicted_escape(1, 2, 8) == 2);
  const auto g = gm_zero_family(50, 7);
  CHECK_MESSAGE(g.outcome.ok, g.outcome.witness);
  CHECK(g.gm == 50);
  CHECK(g.zero == 1);
  CHECK(g.dvr_witness == "t");
}
