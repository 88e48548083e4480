#pragma once

#include <random>
#include <string>
#include <vector>

#include "sitelab/coverage.hpp"
#include "sitelab/modp.hpp"
#include "sitelab/sheafkit.hpp"

namespace sitelab {

/// A sheaf of finite sets on a finite space, described by its stalks. For a
/// strict generization y of x (so U_y ⊂ U_x) maps[x][y] sends S_x -> S_y;
/// entries for other pairs are empty. Sections over an open U are the
/// tuples (s_x)_{x in U} compatible with these maps.
struct StalkSheaf {
  FiniteSpace space;
  std::vector<std::vector<std::string>> stalks;
  std::vector<std::vector<std::vector<int>>> maps;

  int stalk_size(int x) const { return static_cast<int>(stalks[x].size()); }
};

/// Maps have the right shape and compose along chains x ⤳ y ⤳ z.
ValidationReport validate_stalk_sheaf(const StalkSheaf& f);

/// Points of the space ordered so that every strict generization of a
/// point precedes it.
std::vector<int> generic_first_order(const FiniteSpace& s);

/// Compatible tuples over a set of points closed under generization.
std::vector<std::vector<int>> compatible_tuples(const StalkSheaf& f, PointSet u);

/// The sheaf of sections on a site whose objects are opens of f.space
/// (zariski_site). Element labels list the stalk labels in point order.
SetPresheaf sections(const StalkSheaf& f, const SpaceSite& site);

StalkSheaf constant_stalk_sheaf(const FiniteSpace& s, const std::vector<std::string>& values);
/// (i_y)_* A: stalk A at every specialization of y, a point elsewhere.
StalkSheaf skyscraper(const FiniteSpace& s, int y, const std::vector<std::string>& values);

/// Stalk maps phi[x]: S_x -> T_x commuting with the structure maps.
using StalkMap = std::vector<std::vector<int>>;

bool is_stalk_morphism(const StalkSheaf& f, const StalkSheaf& g, const StalkMap& phi);
SheafMorphism sections_morphism(const StalkSheaf& f, const StalkSheaf& g, const StalkMap& phi,
                                const SpaceSite& site, const PresheafPtr& fs, const PresheafPtr& gs);

/// Random sheaf with stalk sizes in [0, max_stalk].
StalkSheaf random_stalk_sheaf(const FiniteSpace& s, int max_stalk, std::mt19937_64& rng);
/// Random morphism by greedy extension in generic-first order; empty result
/// when the attempts run out.
std::optional<StalkMap> random_stalk_morphism(const StalkSheaf& f, const StalkSheaf& g,
                                              std::mt19937_64& rng, int attempts = 32);

// ------------------------------------------------------- F_p-linear sheaves

/// Sheaf of F_p-vector spaces with stalks F_p^{dims[x]}; maps[x][y] is a
/// dims[y] x dims[x] matrix for strict generizations y of x.
struct LinearStalkSheaf {
  FiniteSpace space;
  int p = 2;
  std::vector<int> dims;
  std::vector<std::vector<modp::Mat>> maps;

  /// Map S_x -> S_y for y in U_x (identity when y = x).
  modp::Mat map(int x, int y) const;
};

ValidationReport validate_linear_stalk_sheaf(const LinearStalkSheaf& f);

struct LinearMorphism {
  std::vector<modp::Mat> components;  // dims_g[x] x dims_f[x]
};

bool is_linear_morphism(const LinearStalkSheaf& f, const LinearStalkSheaf& g,
                        const LinearMorphism& m);
bool stalkwise_surjective(const LinearStalkSheaf& f, const LinearStalkSheaf& g,
                          const LinearMorphism& m);

/// Sections as an abelian presheaf, together with the chosen basis of each
/// section space inside the direct sum of stalks over the open.
struct LinearSections {
  AbPresheafPtr presheaf;
  std::vector<std::vector<modp::Vec>> basis;
};

LinearSections linear_sections(const LinearStalkSheaf& f, const SpaceSite& site);
AbMorphism linear_sections_morphism(const LinearStalkSheaf& f, const LinearStalkSheaf& g,
                                    const LinearMorphism& m, const SpaceSite& site,
                                    const LinearSections& fs, const LinearSections& gs);

LinearStalkSheaf linear_constant(const FiniteSpace& s, int p, int dim);
LinearStalkSheaf linear_skyscraper(const FiniteSpace& s, int p, int y, int dim);
LinearStalkSheaf direct_sum(const LinearStalkSheaf& a, const LinearStalkSheaf& b);

/// Subsheaf given by a spanning set per stalk; closed under the structure
/// maps by construction of callers (see generated_subsheaf).
using Subsheaf = std::vector<std::vector<modp::Vec>>;

/// Smallest subsheaf containing the given (point, vector) seeds.
Subsheaf generated_subsheaf(const LinearStalkSheaf& f,
                            const std::vector<std::pair<int, modp::Vec>>& seeds);

struct QuotientResult {
  LinearStalkSheaf sheaf;
  LinearMorphism projection;
};
QuotientResult quotient(const LinearStalkSheaf& f, const Subsheaf& k);

/// Product over points y of (i_y)_* F_y, with the canonical embedding.
struct GodementResult {
  LinearStalkSheaf sheaf;
  LinearMorphism embedding;
};
GodementResult godement(const LinearStalkSheaf& f);

LinearStalkSheaf random_linear_sheaf(const FiniteSpace& s, int p, int max_dim, std::mt19937_64& rng);

}  // namespace sitelab
