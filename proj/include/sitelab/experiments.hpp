#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sitelab/catalogue.hpp"
#include "sitelab/coverage.hpp"
#include "sitelab/stalks.hpp"
#include "sitelab/valuation.hpp"

namespace sitelab::experiments {

/// Common shape: a verdict, a counter of checked cases and the first
/// offending case.
struct Outcome {
  bool ok = true;
  long long checked = 0;
  std::string witness;

  void fail(const std::string& w) {
    if (ok) witness = w;
    ok = false;
  }
};

/// Zariski sites of all spaces with at most max_points points: topology
/// axioms, and is_covering ⟺ union of opens is the target for every family
/// of at most max_family opens inside the target.
Outcome topology_soundness(int max_points, int max_family);

/// On each space: sheafify the presheaf catalogue, check the output is a
/// sheaf, the unit is iso exactly for sheaves, and products and equalizers
/// are preserved.
Outcome sheafification_suite(const std::vector<FiniteSpace>& spaces, std::uint64_t seed);

struct DeligneResult {
  Outcome outcome;
  long long isos = 0;
  long long discrepancies = 0;
};

/// Samples morphisms between stalk-built sheaves whose section sets have at
/// most max_sections elements and compares is_iso with bijectivity at every
/// stalk point.
DeligneResult deligne_sample(const FiniteSpace& space, int samples, std::uint64_t seed, int max_sections = 3);

/// cover_detection at the stalk points against is_covering and against
/// union-equals-target. All families inside a target when there are at most
/// exhaustive_limit candidate opens, else families of at most max_family.
Outcome cover_detection_sweep(int max_points, int max_family, int exhaustive_limit = 16);

struct LocalityEntry {
  std::string space;
  bool irreducible = false;
  bool closed_whole_local = false;
  bool zariski_points_local = true;
};

/// Constant pro-objects: at the whole space on the closed-cover site, and
/// at every U_x on the Zariski site.
std::vector<LocalityEntry> locality_classification(const std::vector<NamedSpace>& spaces);

struct PushforwardResult {
  Outcome outcome;  // ok when every sample stays epi
  long long subspaces = 0;
  long long rejected = 0;
};

/// Epimorphisms G -> G/K of Z/p-valued sheaves on closed subspaces (p in
/// primes, every section group of order at most max_order) pushed forward
/// to the whole space. `samples` is the total over all closed subspaces.
PushforwardResult closed_pushforward_sweep(const FiniteSpace& space, int samples, std::uint64_t seed,
                                           const std::vector<int>& primes = {2, 3}, long long max_order = 8);

struct OpenCounterexample {
  bool failure_found = false;
  std::string witness;
  long long source_order = 0;  // G(W)
  long long target_order = 0;  // (G/K)(W)
};

/// Constant F_2 on the complement W of the closed point of the suspended
/// circle, its Godement embedding G and the epi G -> G/K, pushed forward
/// along W -> X.
OpenCounterexample open_pushforward_counterexample();

struct CocontinuityResult {
  Outcome outcome;
  long long empty_clause_uses = 0;
};

/// Restriction to every non-empty closed subspace: continuous and almost
/// cocontinuous, counting objects answered only by the empty-family clause.
CocontinuityResult closed_subspace_cocontinuity(const FiniteSpace& space);

struct EscapeRow {
  int p = 0;
  int q = 0;
  int step = 0;
  int predicted = 0;
};

/// Escape step of (t^p, t^q) from the center of √2, predicted by running
/// Euclid's subtractive algorithm on (p, q) beside the center's chart word.
int predicted_escape(long long p, long long q, int max_n);
std::vector<EscapeRow> escape_table(int max_pq, int max_n);

struct GmZeroResult {
  Outcome outcome;
  long long gm = 0;
  long long zero = 0;
  std::string dvr_witness;
};

/// count seeded nonzero rationals lift through G_m, 0 lifts through 0, and
/// t in V fails with witness t.
GmZeroResult gm_zero_family(int count, std::uint64_t seed);

/// Stalk sheaf with every stalk relabelled by a random permutation, and the
/// relabelling as an isomorphism f -> copy.
std::pair<StalkSheaf, StalkMap> permuted_copy(const StalkSheaf& f, std::mt19937_64& rng);

}  // namespace sitelab::experiments
