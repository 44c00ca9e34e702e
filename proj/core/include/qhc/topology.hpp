#ifndef QHC_TOPOLOGY_HPP
#define QHC_TOPOLOGY_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace qhc {

// Subsets of a finite space, one bit per point.
using PointSet = uint32_t;

// A finite poset presenting an Alexandrov space: opens are the up-closed sets.
// x <= y is read "y above x"; up(x) is the minimal open neighbourhood of x.
class FiniteSpace {
public:
  FiniteSpace() = default;

  // The relation is closed reflexively and transitively on construction;
  // antisymmetry violations are rejected.
  static FiniteSpace from_relation(std::vector<std::string> points,
                                   const std::vector<std::pair<int, int>>& le_pairs);
  static FiniteSpace from_relation_named(
      std::vector<std::string> points,
      const std::vector<std::pair<std::string, std::string>>& le_pairs);

  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<std::string>& points() const { return points_; }
  int point_index(const std::string& name) const;

  bool le(int x, int y) const { return (up_[x] >> y) & 1u; }
  PointSet up(int x) const { return up_[x]; }
  PointSet down(int x) const { return down_[x]; }
  PointSet all() const { return all_; }

  bool is_open(PointSet s) const;
  PointSet interior(PointSet s) const;
  PointSet closure(PointSet s) const;
  bool is_regular_open(PointSet s) const { return interior(closure(s)) == s; }

  // All opens, sorted ascending as bit patterns (cached on first use).
  const std::vector<PointSet>& opens() const;
  std::vector<PointSet> regular_opens() const;

  // Strictly related pairs (x, y) with x < y, in a fixed order; sheaf
  // restriction maps are indexed by this list.
  const std::vector<std::pair<int, int>>& strict_pairs() const { return strict_pairs_; }
  int pair_index(int x, int y) const { return pair_index_[x * size() + y]; }

  // Lexicographically minimal relation matrix over all point permutations.
  std::string canonical_key() const;
  bool isomorphic_to(const FiniteSpace& other) const;

  std::string set_to_string(PointSet s) const;

private:
  void finish();

  std::vector<std::string> points_;
  std::vector<PointSet> up_, down_;
  PointSet all_ = 0;
  std::vector<std::pair<int, int>> strict_pairs_;
  std::vector<int> pair_index_;
  mutable std::vector<PointSet> opens_cache_;
};

using SpacePtr = std::shared_ptr<const FiniteSpace>;

// All posets with at most max_points points, deduplicated up to
// order-isomorphism, ordered by point count then canonical relation matrix.
std::vector<FiniteSpace> enumerate_spaces(int max_points);

namespace spaces {
// The fork l < m > r.
FiniteSpace i3();
// The wedge t1 > b < t2.
FiniteSpace v3();
// The diamond b < l < m, b < r < m.
FiniteSpace b4();
FiniteSpace chain(int n);
FiniteSpace antichain(int n);
FiniteSpace point();
}  // namespace spaces

}  // namespace qhc

#endif
