#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sitelab/coverage.hpp"
#include "sitelab/fincat.hpp"
#include "sitelab/sheafkit.hpp"

namespace sitelab {

/// Diagram over a finite poset Λ. For λ ≤ μ there is a transition
/// P_λ -> P_μ; smaller indices sit deeper in the tower.
struct ProObject {
  CategoryPtr category;
  Poset index;
  std::vector<ObjId> diagram;
  std::map<std::pair<int, int>, MorId> transitions;  // λ < μ only

  static ProObject constant(const CategoryPtr& c, ObjId x);
  /// Identity when λ = μ.
  MorId transition(int lambda, int mu) const;
};

/// Index codirected, transitions typed correctly and functorial.
ValidationReport validate_pro_object(const ProObject& p);

/// Equivalence classes of a colimit over Λ^op of finite sets, each element a
/// pair (λ, i).
struct ColimitClasses {
  std::vector<std::pair<int, int>> representatives;  // deepest member of each class
  std::vector<std::vector<int>> class_of;            // [λ][i] -> class

  int size() const { return static_cast<int>(representatives.size()); }
};

/// colim_λ Hom(P_λ, X); elements of Hom(P_λ, X) are indexed like
/// category.hom(P_λ, X).
ColimitClasses hom_pro(const ProObject& p, ObjId x);

struct LocalityReport {
  bool local = true;
  std::string object;   // X of the failing family
  std::string family;   // the failing covering family
  std::string missing;  // representative of the class that does not lift
};

/// Every generating covering family {U_i -> X} induces a surjection
/// ⊔ hom_pro(P, U_i) -> hom_pro(P, X).
LocalityReport is_tau_local(const ProObject& p, const Pretopology& generators);
/// Same test over every covering sieve of the topology.
LocalityReport is_tau_local_saturated(const ProObject& p, const Topology& t);

/// F ↦ colim_λ F(P_λ) with a per-presheaf cache.
class FibreFunctorWitness {
 public:
  /// Throws InputError (with the locality witness) unless P is τ-local.
  FibreFunctorWitness(ProObject p, const Pretopology& generators);
  /// No locality check; used to model functors that are not fibre functors.
  static FibreFunctorWitness unchecked(ProObject p);
  FibreFunctorWitness(const FibreFunctorWitness& o) : pro_(o.pro_) {}
  FibreFunctorWitness(FibreFunctorWitness&& o) noexcept : pro_(std::move(o.pro_)) {}

  const ProObject& pro_object() const { return pro_; }
  std::shared_ptr<const ColimitClasses> evaluate(const PresheafPtr& f) const;
  /// Induced map on colimit classes.
  std::vector<int> evaluate(const SheafMorphism& m) const;

 private:
  explicit FibreFunctorWitness(ProObject p) : pro_(std::move(p)) {}

  ProObject pro_;
  mutable std::mutex mutex_;
  mutable std::map<const SetPresheaf*, std::pair<PresheafPtr, std::shared_ptr<const ColimitClasses>>> cache_;
};

/// Sheafified representables a(h_X) and the maps a(h_f) between them, shared
/// by every fibre-functor check on one site.
struct SheafifiedRepresentables {
  std::vector<PresheafPtr> sheaves;        // per object
  std::vector<SheafMorphism> morphisms;    // per morphism f: a(h_source) -> a(h_target)
  std::vector<int> identity_section;       // per object: image of id_X in a(h_X)(X)
};

SheafifiedRepresentables sheafified_representables(const Site& site);

struct FibreAxiomReport {
  bool terminal = true;
  bool products = true;
  bool equalizers = true;
  bool covers = true;
  std::string witness;

  bool ok() const { return terminal && products && equalizers && covers; }
};

/// Terminal object, binary products of catalogue sheaves, equalizers of the
/// given parallel pairs, and covering families going to jointly surjective
/// families.
FibreAxiomReport check_fibre_axioms(
    const FibreFunctorWitness& w, const Site& site, const SheafifiedRepresentables& reps,
    const std::vector<PresheafPtr>& catalogue,
    const std::vector<std::pair<SheafMorphism, SheafMorphism>>& parallel_pairs);

/// Objects (X, s) with s ∈ φ(a h_X); (X, s) -> (Y, t) for f: X -> Y with
/// φ(a h_f)(s) = t.
struct NeighbourhoodCategory {
  std::vector<std::pair<ObjId, int>> objects;
  std::vector<std::vector<std::vector<MorId>>> arrows;  // [from][to] -> site morphisms
  bool cofiltered = true;
  std::string witness;
};

NeighbourhoodCategory neighbourhood_category(const FibreFunctorWitness& w, const FiniteCategory& c,
                                             const SheafifiedRepresentables& reps);

/// The neighbourhood category of a poset site read as a pro-object indexed
/// by its objects. Throws InputError if it is not a poset.
ProObject neighbourhood_pro_object(const NeighbourhoodCategory& n, const CategoryPtr& c);

struct AgreementReport {
  bool agree = true;
  std::string witness;
};

/// Pointwise agreement of two functors on the catalogue: equal sizes on
/// sheaves and equal image sizes on the given morphisms.
AgreementReport fibre_functors_agree(const FibreFunctorWitness& a, const FibreFunctorWitness& b,
                                     const std::vector<PresheafPtr>& catalogue,
                                     const std::vector<SheafMorphism>& morphisms);

struct ConservativityEntry {
  int sample = 0;
  bool iso = false;
  bool all_points_bijective = false;
  std::string failing_point;  // first point where the morphism is not bijective
};

struct ConservativityReport {
  bool conservative = true;  // no discrepancy seen
  std::vector<ConservativityEntry> entries;
};

ConservativityReport conservativity_check(const std::vector<std::string>& point_names,
                                          const std::vector<const FibreFunctorWitness*>& points,
                                          const std::vector<SheafMorphism>& morphisms, const Topology& t);

struct CoverDetection {
  bool jointly_surjective = true;
  std::string witness;  // a point whose fibre misses an element
};

/// Whether every point sends the family to a jointly surjective family of
/// sets ⊔ φ(a h_{U_i}) -> φ(a h_X).
CoverDetection cover_detection(const std::vector<std::string>& point_names,
                               const std::vector<const FibreFunctorWitness*>& points,
                               const SheafifiedRepresentables& reps, const FiniteCategory& c, ObjId x,
                               const std::vector<MorId>& family);

/// Stalk functors at every point of a Zariski site (constant pro-objects at
/// the minimal opens).
std::vector<FibreFunctorWitness> stalk_points(const SpaceSite& site);

}  // namespace sitelab
