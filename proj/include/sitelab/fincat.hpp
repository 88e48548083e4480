#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sitelab/bits.hpp"

namespace sitelab {

using ObjId = int;
using MorId = int;

/// Raised when an input document or argument is structurally unusable.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Morphism {
  std::string name;
  ObjId source = -1;
  ObjId target = -1;
};

/// Finite partial order. Built from a generating relation; the
/// reflexive-transitive closure is computed on construction and
/// antisymmetry is enforced.
class Poset {
 public:
  Poset() = default;
  Poset(std::vector<std::string> elements,
        const std::vector<std::pair<std::string, std::string>>& leq_pairs);
  Poset(std::vector<std::string> elements,
        const std::vector<std::pair<int, int>>& leq_pairs);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  int index(std::string_view name) const;
  std::optional<int> find(std::string_view name) const;
  bool leq(int a, int b) const { return leq_[a * size() + b] != 0; }

  /// Greatest common lower bound, if one exists.
  std::optional<int> meet(int a, int b) const;

 private:
  void close();

  std::vector<std::string> names_;
  std::vector<char> leq_;
};

/// A finite category given by an explicit composition table.
///
/// The constructor stores whatever it is handed; use validate_category() to
/// check the axioms. Every other operation in the library assumes a valid
/// category.
class FiniteCategory {
 public:
  FiniteCategory() = default;
  /// composition entries are (g, f, g∘f) by morphism index.
  FiniteCategory(std::vector<std::string> objects,
                 std::vector<Morphism> morphisms, std::vector<MorId> identities,
                 const std::vector<std::array<MorId, 3>>& composition);

  /// Poset viewed as a category: one morphism a->b named "a<=b" when a ≤ b.
  static FiniteCategory from_poset(const Poset& p);

  int object_count() const { return static_cast<int>(objects_.size()); }
  int morphism_count() const { return static_cast<int>(morphisms_.size()); }

  const std::string& object_name(ObjId x) const { return objects_[x]; }
  const std::vector<std::string>& object_names() const { return objects_; }
  ObjId object_id(std::string_view name) const;
  std::optional<ObjId> find_object(std::string_view name) const;

  const Morphism& morphism(MorId m) const { return morphisms_[m]; }
  const std::vector<Morphism>& morphisms() const { return morphisms_; }
  MorId morphism_id(std::string_view name) const;
  std::optional<MorId> find_morphism(std::string_view name) const;
  ObjId source(MorId m) const { return morphisms_[m].source; }
  ObjId target(MorId m) const { return morphisms_[m].target; }

  MorId identity(ObjId x) const { return identities_[x]; }
  bool is_identity(MorId m) const;

  /// g∘f if recorded in the table.
  std::optional<MorId> compose(MorId g, MorId f) const {
    const MorId r = table_[static_cast<std::size_t>(g) * morphisms_.size() + f];
    if (r < 0) return std::nullopt;
    return r;
  }
  /// g∘f; throws if the pair is not composable.
  MorId compose_checked(MorId g, MorId f) const;

  const std::vector<MorId>& morphisms_into(ObjId x) const { return into_[x]; }
  const std::vector<MorId>& morphisms_from(ObjId x) const { return from_[x]; }
  std::vector<MorId> hom(ObjId a, ObjId b) const;

  /// At most one morphism between any two objects and no non-trivial cycles.
  bool is_poset() const;

  /// Conflicting duplicate entries seen while building the table.
  const std::vector<std::array<MorId, 4>>& composition_conflicts() const {
    return conflicts_;
  }

 private:
  std::vector<std::string> objects_;
  std::vector<Morphism> morphisms_;
  std::vector<MorId> identities_;
  std::vector<MorId> table_;
  std::vector<std::vector<MorId>> into_;
  std::vector<std::vector<MorId>> from_;
  std::unordered_map<std::string, ObjId> object_index_;
  std::unordered_map<std::string, MorId> morphism_index_;
  std::vector<std::array<MorId, 4>> conflicts_;
};

using CategoryPtr = std::shared_ptr<const FiniteCategory>;

struct ValidationReport {
  bool ok = true;
  std::string axiom;                 // empty when ok
  std::vector<std::string> witness;  // morphism / object names
};

ValidationReport validate_category(const FiniteCategory& c);

/// Functor between finite categories given by object and morphism maps.
struct FunctorData {
  CategoryPtr source;
  CategoryPtr target;
  std::vector<ObjId> object_map;
  std::vector<MorId> morphism_map;

  ObjId operator()(ObjId x) const { return object_map[x]; }
  MorId map_morphism(MorId m) const { return morphism_map[m]; }
};

/// Exhaustive check that identities and composition are preserved.
ValidationReport validate_functor(const FunctorData& u);

FunctorData identity_functor(const CategoryPtr& c);

/// A set of morphisms with common target closed under precomposition.
/// Members are a bitset over the category's global morphism indices.
struct Sieve {
  ObjId target = -1;
  Bits members;

  bool contains(MorId m) const { return members.test(static_cast<std::size_t>(m)); }
  std::size_t size() const { return members.count(); }
  friend bool operator==(const Sieve&, const Sieve&) = default;
};

Sieve empty_sieve(const FiniteCategory& c, ObjId x);
Sieve maximal_sieve(const FiniteCategory& c, ObjId x);

/// Smallest sieve on x containing the family. Throws InputError when a
/// member does not have target x.
Sieve sieve_generated(const FiniteCategory& c, ObjId x,
                      std::span<const MorId> family);

/// { g into source(h) : h∘g ∈ s }.
Sieve pullback_sieve(const FiniteCategory& c, const Sieve& s, MorId h);

bool is_sieve(const FiniteCategory& c, const Sieve& s);

/// Every sieve on x, sorted. Enumerated as unions of principal sieves.
std::vector<Bits> all_sieves(const FiniteCategory& c, ObjId x);

std::vector<MorId> sieve_members(const Sieve& s);

/// Members f such that no other member strictly factors f (i.e. f = f'∘g
/// with f' not itself a factor of f). For posets: the maximal elements.
std::vector<MorId> sieve_generators(const FiniteCategory& c, const Sieve& s);

/// Non-empty and every pair of elements has a common lower bound.
bool is_codirected_poset(const Poset& p);

}  // namespace sitelab
