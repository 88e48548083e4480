#pragma once

#include <string>
#include <vector>

#include "sitelab/coverage.hpp"
#include "sitelab/sheafkit.hpp"

namespace sitelab {

struct NamedSpace {
  std::string name;
  FiniteSpace space;
};

/// Small named spaces used by tests and demos:
///   point, discrete2, sierpinski, vee (η ⤳ x, η ⤳ y), chain3,
///   wedge (a, b ⤳ z), diamond (η ⤳ x, y ⤳ z), pseudo-circle
///   (a, b ⤳ c, d), suspended-circle (pseudo-circle plus z under c and d),
///   discrete3, line (η ⤳ p, q, r).
std::vector<NamedSpace> space_catalogue();
FiniteSpace catalogue_space(const std::string& name);

/// One representative of every T0 space with the given number of points, up
/// to homeomorphism. Points are named p0, p1, ...
std::vector<FiniteSpace> spaces_up_to_iso(int points);

/// All T0 spaces with 1..max_points points up to homeomorphism.
std::vector<FiniteSpace> all_small_spaces(int max_points);

struct NamedPresheaf {
  std::string name;
  PresheafPtr presheaf;
};

/// Presheaves on a Zariski site used for sheafification checks: constants,
/// representables, stalk-built sheaves, and deliberate non-sheaves (extra
/// sections over the whole space or over the empty open, missing gluings).
std::vector<NamedPresheaf> presheaf_catalogue(const SpaceSite& site, unsigned long long seed = 0);

}  // namespace sitelab
