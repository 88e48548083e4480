#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sitelab/fincat.hpp"

namespace sitelab {

struct CoveringFamily {
  ObjId target = -1;
  std::vector<MorId> members;
};

/// Generating families per object. Every member must have the stated target.
struct Pretopology {
  std::vector<CoveringFamily> families;
};

void validate_pretopology(const FiniteCategory& c, const Pretopology& p);

/// Grothendieck topology stored extensionally: for every object the full
/// set of covering sieves.
class Topology {
 public:
  Topology() = default;
  Topology(CategoryPtr c, std::vector<std::set<Bits>> covering);

  const CategoryPtr& category() const { return category_; }
  const std::set<Bits>& covering(ObjId x) const { return covering_[x]; }
  bool covers(const Sieve& s) const { return covering_[s.target].count(s.members) != 0; }
  std::vector<Sieve> covering_sieves(ObjId x) const;
  std::size_t total_covering() const;

  /// Intersection of all covering sieves on x: the common refinement of
  /// every cover. Throws if it is not itself covering (only possible for a
  /// sieve-set that is not a topology).
  const Sieve& finest_cover(ObjId x) const;

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.covering_ == b.covering_;
  }

 private:
  CategoryPtr category_;
  std::vector<std::set<Bits>> covering_;
  std::vector<Sieve> finest_;
  std::vector<char> finest_ok_;
};

struct TopologyAxiomReport {
  bool ok = true;
  std::string axiom;  // "maximal" | "stability" | "local-character"
  std::string object;
  std::string sieve;
  std::string detail;
};

/// Direct check of the three axioms (local character exhaustively over all
/// sieves).
TopologyAxiomReport check_topology_axioms(const Topology& t);

/// Least topology whose covering sieves include every generated family
/// sieve. Fixpoint of: add generated sieves, close under pullback, close
/// under local character.
Topology generate_topology(const CategoryPtr& c, const Pretopology& p);
Topology minimal_topology(const CategoryPtr& c);
Topology join_topologies(const Topology& a, const Topology& b);

bool is_covering(const Topology& t, ObjId target, std::span<const MorId> family);

/// Every member of a factors through some member of b.
bool refines(const FiniteCategory& c, std::span<const MorId> a, std::span<const MorId> b);

std::string describe_sieve(const FiniteCategory& c, const Sieve& s);
std::string describe_family(const FiniteCategory& c, std::span<const MorId> family);

struct Site {
  CategoryPtr category;
  Pretopology generators;
  Topology topology;
};

Site make_site(const CategoryPtr& c, Pretopology p);

// ----------------------------------------------------------- finite spaces

using PointSet = std::uint64_t;

/// Finite T0 space given by its specialization order. A pair (x, y) means
/// y lies in the closure of x. Opens are generization-closed subsets.
class FiniteSpace {
 public:
  static constexpr int kMaxPoints = 20;

  FiniteSpace() = default;
  FiniteSpace(std::vector<std::string> points,
              const std::vector<std::pair<std::string, std::string>>& specializations);
  FiniteSpace(std::vector<std::string> points,
              const std::vector<std::pair<int, int>>& specializations);

  int size() const { return order_.size(); }
  const std::string& name(int x) const { return order_.name(x); }
  int index(std::string_view name) const { return order_.index(name); }
  PointSet all() const { return size() == 64 ? ~PointSet{0} : (PointSet{1} << size()) - 1; }

  /// y ∈ closure{x}
  bool specializes(int x, int y) const { return order_.leq(x, y); }
  PointSet minimal_open(int x) const;
  PointSet closure(int x) const;
  bool is_open(PointSet s) const;
  bool is_closed(PointSet s) const;
  std::vector<PointSet> opens() const;
  std::vector<PointSet> closed_sets() const;

  /// Same points, reversed specialization: its opens are our closed sets.
  FiniteSpace opposite() const;
  FiniteSpace subspace(PointSet s) const;

  /// Has a generic point (closure is the whole space).
  bool is_irreducible() const;

  std::string set_name(PointSet s) const;
  std::vector<std::pair<int, int>> specialization_pairs() const;

 private:
  Poset order_;
};

/// A site whose objects are subsets of a finite space, with the point set of
/// each object recorded.
struct SpaceSite {
  FiniteSpace space;
  Site site;
  std::vector<PointSet> object_points;
  std::vector<ObjId> minimal_objects;  // per point: U_x (or closure{x})

  ObjId object_of(PointSet s) const;
  ObjId minimal_object(int x) const { return minimal_objects[x]; }
  ObjId whole() const { return object_of(space.all()); }
  const FiniteCategory& category() const { return *site.category; }
  const Topology& topology() const { return site.topology; }
};

/// Opens under inclusion; generated by the minimal-open families
/// {U_x -> V : x in V}. Covering families are the jointly surjective ones.
SpaceSite zariski_site(const FiniteSpace& s);

/// Closed subsets under inclusion; covering families are jointly surjective
/// closed families.
SpaceSite closed_cover_site(const FiniteSpace& s);

enum class SubsetCover { Open, Closed };

/// All subsets of the space under inclusion, covered by the traces
/// {B_x ∩ T -> T : x in T} of minimal opens (Open) or point closures
/// (Closed). Both variants share one underlying category, so they can be
/// joined.
SpaceSite subset_site(const FiniteSpace& s, SubsetCover kind);

}  // namespace sitelab
