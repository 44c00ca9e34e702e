#ifndef QHC_SHEAF_HPP
#define QHC_SHEAF_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "qhc/topology.hpp"

namespace qhc {

struct SheafError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A sheaf of finite sets on a finite Alexandrov space, presented as its stalk
// functor on the specialization order: a finite set per point and a function
// F(x) -> F(y) for every related pair x <= y. Elements are dense indices.
class StalkSheaf {
public:
  StalkSheaf() = default;
  StalkSheaf(SpacePtr base, std::vector<uint32_t> sizes,
             std::map<std::pair<int, int>, std::vector<uint32_t>> maps);

  const SpacePtr& base() const { return base_; }
  const FiniteSpace& space() const { return *base_; }
  uint32_t stalk_size(int x) const { return sizes_[x]; }
  const std::vector<uint32_t>& sizes() const { return sizes_; }

  // Restriction along x <= y (x != y); identity when x == y.
  uint32_t restrict_elem(int x, int y, uint32_t e) const;
  const std::vector<uint32_t>& map(int x, int y) const;

  // Throws unless identity/composition laws hold and no nonempty stalk maps
  // into an empty one.
  void validate() const;

  PointSet support() const;
  uint64_t total_elements() const;

  std::string serialize() const;  // structural key for interning
  bool operator==(const StalkSheaf& other) const { return serialize() == other.serialize(); }

private:
  SpacePtr base_;
  std::vector<uint32_t> sizes_;
  // Indexed by FiniteSpace::pair_index; empty vector means size-0 source.
  std::vector<std::vector<uint32_t>> maps_;
  friend StalkSheaf characteristic(SpacePtr, PointSet);
};

StalkSheaf characteristic(SpacePtr base, PointSet open_u);
StalkSheaf empty_sheaf(SpacePtr base);

StalkSheaf product(const StalkSheaf& f, const StalkSheaf& g);
StalkSheaf coproduct(const StalkSheaf& f, const StalkSheaf& g);
StalkSheaf product_family(const std::vector<const StalkSheaf*>& fs);
StalkSheaf coproduct_family(const std::vector<const StalkSheaf*>& fs);

// The internal hom: stalk at x is the set of natural families
// (phi_y : F(y) -> G(y)) over y >= x; restriction is truncation.
// When tables is non-null it receives, per point x, the application table
// element * F-size(x) + arg -> G-element (the x-component of each family).
struct HomTables {
  std::vector<std::vector<uint32_t>> at;  // per point: |H(x)| * |F(x)| entries
  std::vector<uint32_t> src_sizes;        // |F(x)| per point
};
StalkSheaf hom(const StalkSheaf& f, const StalkSheaf& g, HomTables* tables = nullptr);

PointSet support(const StalkSheaf& f);

// Compatible families (s_x in F(x)) over the open U; each section is a vector
// indexed by point with -1 outside U. Deterministic order.
std::vector<std::vector<int32_t>> sections(const StalkSheaf& f, PointSet open_u);
bool has_global_section(const StalkSheaf& f);

// Stalkwise bijections commuting with restrictions, by backtracking.
bool isomorphic(const StalkSheaf& f, const StalkSheaf& g);

// ---------------------------------------------------------------------------
// Presheaves on the open-set lattice.

class OpenPresheaf {
public:
  OpenPresheaf() = default;
  OpenPresheaf(SpacePtr base, std::vector<uint32_t> sizes,
               std::map<std::pair<PointSet, PointSet>, std::vector<uint32_t>> maps);

  const SpacePtr& base() const { return base_; }
  const std::vector<PointSet>& opens() const;
  int open_index(PointSet u) const;
  uint32_t size_at(PointSet u) const;
  uint32_t restrict_elem(PointSet u, PointSet v, uint32_t e) const;

  void validate() const;  // functoriality over the open lattice

private:
  SpacePtr base_;
  std::vector<uint32_t> sizes_;                  // per open index
  std::vector<std::vector<uint32_t>> maps_;      // per (U,V) pair index, V subset of U
  int pair_idx(int u, int v) const;
};

OpenPresheaf sections_of(const StalkSheaf& f);
StalkSheaf sheafify(const OpenPresheaf& p);
bool is_sheaf(const OpenPresheaf& p);
PointSet presheaf_support(const OpenPresheaf& p);

OpenPresheaf presheaf_product(const OpenPresheaf& p, const OpenPresheaf& q);
OpenPresheaf presheaf_coproduct(const OpenPresheaf& p, const OpenPresheaf& q);
// Hom presheaf: natural families over the opens below U.
OpenPresheaf presheaf_hom(const OpenPresheaf& p, const OpenPresheaf& q);
OpenPresheaf presheaf_characteristic(SpacePtr base, PointSet open_u);
bool presheaf_isomorphic(const OpenPresheaf& p, const OpenPresheaf& q);

// ---------------------------------------------------------------------------
// Interning algebra: memoizes the sheaf operations per space so that model
// sweeps stay cheap, and decides validity questions without materializing
// hom sheaves at the root (morphism existence by constraint search).

class SheafAlgebra {
public:
  using Id = uint32_t;

  explicit SheafAlgebra(SpacePtr space, uint64_t stalk_budget = (1ull << 22));

  const SpacePtr& space() const { return space_; }
  Id intern(const StalkSheaf& s);
  const StalkSheaf& value(Id id) const { return values_[id]; }

  Id characteristic(PointSet open_u);
  Id empty() { return characteristic(0); }
  Id product(Id a, Id b);
  Id coproduct(Id a, Id b);
  Id hom(Id a, Id b);
  PointSet support(Id id) const { return supports_[id]; }
  // Support of hom(a, b) without materializing it: per point, existence of a
  // natural family over the up-set.
  PointSet hom_support(Id a, Id b);
  bool has_global_section(Id id);

  // Application of the hom value hom(f, g): the element's own component at
  // x. Keyed by the argument pair, since structurally equal sheaves arising
  // from different hom calls intern to one id. verify_hom_naturality checks
  // once per pair that application commutes with the restrictions
  // (evaluation is a natural transformation).
  uint32_t hom_apply(Id f, Id g, int x, uint32_t elem, uint32_t arg);
  void verify_hom_naturality(Id f, Id g);

  // Is there a sheaf morphism  s1 x ... x sk -> target?  (k may be 0: the
  // sources then stand for the terminal sheaf.)
  bool morphism_exists(const std::vector<Id>& sources, Id target);

  bool isomorphic(Id a, Id b);

private:
  SpacePtr space_;
  uint64_t stalk_budget_;
  std::vector<StalkSheaf> values_;
  std::vector<PointSet> supports_;
  std::vector<std::optional<bool>> has_section_;
  std::unordered_map<std::string, Id> intern_;
  std::map<PointSet, Id> chars_;
  std::map<std::pair<Id, Id>, Id> product_memo_, coproduct_memo_, hom_memo_;
  std::map<std::pair<Id, Id>, PointSet> hom_support_memo_;
  std::map<std::pair<std::vector<Id>, Id>, bool> morphism_memo_;
  std::map<std::pair<Id, Id>, HomTables> hom_tables_;
  std::set<std::pair<Id, Id>> hom_verified_;
};

}  // namespace qhc

#endif
