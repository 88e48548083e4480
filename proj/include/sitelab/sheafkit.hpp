#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sitelab/coverage.hpp"
#include "sitelab/fincat.hpp"

namespace sitelab {

/// Presheaf of finite sets. Elements of F(X) are indices 0..size(X)-1 with
/// display labels; for f: Y -> X the restriction table maps F(X) -> F(Y).
class SetPresheaf {
 public:
  SetPresheaf() = default;
  SetPresheaf(CategoryPtr c, std::vector<std::vector<std::string>> elements,
              std::vector<std::vector<int>> restrictions);

  const CategoryPtr& category() const { return category_; }
  int size(ObjId x) const { return static_cast<int>(elements_[x].size()); }
  const std::string& label(ObjId x, int i) const { return elements_[x][i]; }
  const std::vector<std::string>& labels(ObjId x) const { return elements_[x]; }
  int restrict(MorId f, int i) const { return restrictions_[f][i]; }
  const std::vector<int>& restriction(MorId f) const { return restrictions_[f]; }
  std::optional<int> find(ObjId x, const std::string& label) const;

 private:
  CategoryPtr category_;
  std::vector<std::vector<std::string>> elements_;
  std::vector<std::vector<int>> restrictions_;
};

using PresheafPtr = std::shared_ptr<const SetPresheaf>;

/// F(id) = id and F(f∘g) = F(g)∘F(f).
ValidationReport validate_presheaf(const SetPresheaf& f);

SetPresheaf constant_presheaf(const CategoryPtr& c, const std::vector<std::string>& values);
SetPresheaf terminal_presheaf(const CategoryPtr& c);
/// Hom(-, x), elements labelled by morphism name.
SetPresheaf representable(const CategoryPtr& c, ObjId x);
SetPresheaf product(const SetPresheaf& a, const SetPresheaf& b);

/// Natural transformation; components[x] maps F(x) -> G(x).
struct SheafMorphism {
  PresheafPtr source;
  PresheafPtr target;
  std::vector<std::vector<int>> components;
};

ValidationReport validate_morphism(const SheafMorphism& m);
SheafMorphism identity_morphism(const PresheafPtr& f);
SheafMorphism compose(const SheafMorphism& g, const SheafMorphism& f);
/// Postcomposition y(x) -> y(y) for f: x -> y, between the given representables.
SheafMorphism representable_morphism(MorId f, const PresheafPtr& yx, const PresheafPtr& yy);
SheafMorphism projection(const PresheafPtr& prod, const PresheafPtr& factor, int which);

struct Equalizer {
  PresheafPtr object;
  SheafMorphism inclusion;
};
Equalizer equalizer(const SheafMorphism& f, const SheafMorphism& g);

// --------------------------------------------------------- sheafification

/// Compatible families (x_f)_{f in s} with x_{f∘g} = F(g)(x_f).
struct MatchingFamilies {
  Sieve sieve;
  std::vector<MorId> members;
  std::vector<std::vector<int>> families;  // aligned with members
  std::map<std::vector<int>, int> index;

  int size() const { return static_cast<int>(families.size()); }
};

MatchingFamilies matching_families(const SetPresheaf& f, const Sieve& s);

/// Sections of F restricted to a sieve: x -> (F(f)(x))_f.
std::vector<int> restrict_to_sieve(const SetPresheaf& f, const MatchingFamilies& mf, int x);

struct PlusResult {
  PresheafPtr presheaf;
  SheafMorphism unit;
  std::vector<MatchingFamilies> sections;  // per object, over finest_cover
};

/// F+(X) = colimit over covering sieves of matching families. The covering
/// sieves on X form a finite system closed under intersection, so the
/// colimit is read off at the common refinement finest_cover(X).
PlusResult plus_construction(const PresheafPtr& f, const Topology& t);

struct Sheafification {
  PlusResult first;
  PlusResult second;
  PresheafPtr sheaf;
  SheafMorphism unit;
};

/// Plus construction applied twice.
Sheafification sheafify(const PresheafPtr& f, const Topology& t);

SheafMorphism plus_morphism(const SheafMorphism& m, const PlusResult& src, const PlusResult& tgt);
SheafMorphism sheafify_morphism(const SheafMorphism& m, const Sheafification& src,
                                const Sheafification& tgt);

struct SheafCheck {
  bool ok = true;
  std::string object;
  std::string sieve;
  std::string reason;  // "not separated" | "missing gluings"
};

/// F(X) -> Match(F, S) bijective for every covering S.
SheafCheck is_sheaf(const SetPresheaf& f, const Topology& t);

struct MorphismProperty {
  bool holds = true;
  std::string witness;
};

/// Injective on all sections. Inputs must be sheaves.
MorphismProperty is_mono(const SheafMorphism& m, const Topology& t);
/// Locally surjective: every section of the target lifts on a covering sieve.
MorphismProperty is_epi(const SheafMorphism& m, const Topology& t);
MorphismProperty is_iso(const SheafMorphism& m, const Topology& t);

/// Same checks without verifying the sheaf precondition.
MorphismProperty sectionwise_injective(const SheafMorphism& m);
MorphismProperty locally_surjective(const SheafMorphism& m, const Topology& t);

// -------------------------------------------------------- abelian values

using IntMatrix = std::vector<std::vector<long long>>;

/// Presheaf of finite abelian groups Z/n1 x ... x Z/nk. For f: Y -> X the
/// matrix maps coordinates of F(X) to coordinates of F(Y) (rows = factors
/// of F(Y)).
class AbPresheaf {
 public:
  AbPresheaf() = default;
  AbPresheaf(CategoryPtr c, std::vector<std::vector<int>> orders,
             std::vector<IntMatrix> restrictions);

  const CategoryPtr& category() const { return category_; }
  const std::vector<int>& orders(ObjId x) const { return orders_[x]; }
  const IntMatrix& restriction(MorId f) const { return restrictions_[f]; }
  long long group_order(ObjId x) const;

  std::vector<long long> decode(ObjId x, long long index) const;
  long long encode(ObjId x, const std::vector<long long>& coords) const;
  std::vector<long long> apply(MorId f, const std::vector<long long>& coords) const;

  /// Underlying presheaf of sets (elements enumerated in mixed radix).
  SetPresheaf to_set() const;

 private:
  CategoryPtr category_;
  std::vector<std::vector<int>> orders_;
  std::vector<IntMatrix> restrictions_;
};

using AbPresheafPtr = std::shared_ptr<const AbPresheaf>;

/// Restrictions are well-defined homomorphisms and the presheaf is functorial.
ValidationReport validate_ab_presheaf(const AbPresheaf& a);

/// Componentwise homomorphisms; components[x] has rows = factors of G(x).
struct AbMorphism {
  AbPresheafPtr source;
  AbPresheafPtr target;
  std::vector<IntMatrix> components;
};

SheafMorphism to_set_morphism(const AbMorphism& m, const PresheafPtr& src, const PresheafPtr& tgt);

// ------------------------------------------------------- site morphisms

struct ContinuityReport {
  bool pullbacks_preserved = true;
  std::string pullback_witness;
  bool continuous = true;
  std::string witness;
};

/// Image of every covering family is covering. Poset sites only; pullback
/// (meet) preservation is reported separately.
ContinuityReport is_continuous(const FunctorData& u, const Topology& src, const Topology& tgt);

struct AlmostCocontinuityReport {
  bool holds = true;
  std::string witness;
  /// Objects X for which some cover of u(X) was only answered by a cover of
  /// X whose pieces are covered by the empty family.
  std::vector<ObjId> empty_clause_objects;
};

AlmostCocontinuityReport is_almost_cocontinuous(const FunctorData& u, const Topology& src,
                                                const Topology& tgt);

/// G ∘ u. Throws InputError unless u is continuous.
SetPresheaf direct_image(const FunctorData& u, const SetPresheaf& g, const Topology& src,
                         const Topology& tgt);
AbPresheaf direct_image(const FunctorData& u, const AbPresheaf& g, const Topology& src,
                        const Topology& tgt);
/// Components at u(X); source and target are the pushed-forward presheaves.
AbMorphism direct_image(const FunctorData& u, const AbMorphism& m, const AbPresheafPtr& src,
                        const AbPresheafPtr& tgt);

/// F(U_x) on a space site.
ObjId stalk_object(const SpaceSite& s, int x);
std::vector<std::string> stalk(const SetPresheaf& f, const SpaceSite& s, int x);

struct ExactnessEntry {
  int sample = 0;
  bool preserved = true;
  std::string witness;
};

struct ExactnessReport {
  bool all_preserved = true;
  std::vector<ExactnessEntry> entries;
};

/// For each sample epimorphism of abelian sheaves on the target site of u,
/// whether its direct image along u is still an epimorphism. Throws
/// InputError if a sample is not itself an epimorphism.
ExactnessReport check_exactness_along(const FunctorData& u, const std::vector<AbMorphism>& samples,
                                      const Topology& src, const Topology& tgt);

/// Functor Op(X) -> Op(sub), U -> U ∩ sub, between space sites.
FunctorData subspace_functor(const SpaceSite& whole, const SpaceSite& sub, PointSet sub_points);

}  // namespace sitelab
