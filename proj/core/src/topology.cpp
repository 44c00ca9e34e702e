#include "qhc/topology.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace qhc {

FiniteSpace FiniteSpace::from_relation(std::vector<std::string> points,
                                       const std::vector<std::pair<int, int>>& le_pairs) {
  FiniteSpace sp;
  sp.points_ = std::move(points);
  int n = sp.size();
  if (n <= 0 || n > 31) throw std::runtime_error("space must have between 1 and 31 points");
  sp.up_.assign(n, 0);
  for (int i = 0; i < n; ++i) sp.up_[i] = 1u << i;
  for (auto [x, y] : le_pairs) {
    if (x < 0 || x >= n || y < 0 || y >= n)
      throw std::runtime_error("relation pair out of range");
    sp.up_[x] |= 1u << y;
  }
  // Transitive closure.
  for (bool changed = true; changed;) {
    changed = false;
    for (int x = 0; x < n; ++x) {
      PointSet reach = sp.up_[x];
      for (int y = 0; y < n; ++y)
        if ((reach >> y) & 1u) reach |= sp.up_[y];
      if (reach != sp.up_[x]) {
        sp.up_[x] = reach;
        changed = true;
      }
    }
  }
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (sp.le(x, y) && sp.le(y, x))
        throw std::runtime_error("relation is not antisymmetric: " + sp.points_[x] +
                                 " and " + sp.points_[y]);
  sp.finish();
  return sp;
}

FiniteSpace FiniteSpace::from_relation_named(
    std::vector<std::string> points,
    const std::vector<std::pair<std::string, std::string>>& le_pairs) {
  std::map<std::string, int> index;
  for (size_t i = 0; i < points.size(); ++i) {
    if (index.count(points[i])) throw std::runtime_error("duplicate point: " + points[i]);
    index[points[i]] = static_cast<int>(i);
  }
  std::vector<std::pair<int, int>> pairs;
  for (const auto& [a, b] : le_pairs) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end())
      throw std::runtime_error("relation mentions unknown point");
    pairs.emplace_back(ia->second, ib->second);
  }
  return from_relation(std::move(points), pairs);
}

void FiniteSpace::finish() {
  int n = size();
  all_ = (n == 31) ? 0x7fffffffu : ((1u << n) - 1);
  down_.assign(n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (le(x, y)) down_[y] |= 1u << x;
  strict_pairs_.clear();
  pair_index_.assign(n * n, -1);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && le(x, y)) {
        pair_index_[x * n + y] = static_cast<int>(strict_pairs_.size());
        strict_pairs_.emplace_back(x, y);
      }
}

int FiniteSpace::point_index(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (points_[i] == name) return i;
  throw std::runtime_error("unknown point: " + name);
}

bool FiniteSpace::is_open(PointSet s) const {
  for (int x = 0; x < size(); ++x)
    if ((s >> x) & 1u)
      if ((up_[x] & ~s) != 0) return false;
  return true;
}

PointSet FiniteSpace::interior(PointSet s) const {
  PointSet out = 0;
  for (int x = 0; x < size(); ++x)
    if ((up_[x] & ~s) == 0) out |= 1u << x;
  return out & s;
}

PointSet FiniteSpace::closure(PointSet s) const {
  PointSet out = 0;
  for (int x = 0; x < size(); ++x)
    if ((s >> x) & 1u) out |= down_[x];
  return out;
}

const std::vector<PointSet>& FiniteSpace::opens() const {
  if (opens_cache_.empty()) {
    for (PointSet s = 0; s <= all_; ++s)
      if (is_open(s)) opens_cache_.push_back(s);
  }
  return opens_cache_;
}

std::vector<PointSet> FiniteSpace::regular_opens() const {
  std::vector<PointSet> out;
  for (PointSet s : opens())
    if (is_regular_open(s)) out.push_back(s);
  return out;
}

std::string FiniteSpace::canonical_key() const {
  int n = size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    std::string key(n * n, '0');
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (le(perm[x], perm[y])) key[x * n + y] = '1';
    if (best.empty() || key < best) best = key;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool FiniteSpace::isomorphic_to(const FiniteSpace& other) const {
  return size() == other.size() && canonical_key() == other.canonical_key();
}

std::string FiniteSpace::set_to_string(PointSet s) const {
  std::string out = "{";
  bool first = true;
  for (int x = 0; x < size(); ++x)
    if ((s >> x) & 1u) {
      if (!first) out += ",";
      out += points_[x];
      first = false;
    }
  out += "}";
  return out;
}

std::vector<FiniteSpace> enumerate_spaces(int max_points) {
  if (max_points < 1) throw std::runtime_error("max_points must be >= 1");
  std::vector<FiniteSpace> out;
  for (int n = 1; n <= max_points; ++n) {
    // Candidate strict relations are subsets of the off-diagonal pairs.
    std::vector<std::pair<int, int>> slots;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (x != y) slots.emplace_back(x, y);
    std::set<std::string> seen;
    std::vector<std::pair<std::string, FiniteSpace>> found;
    uint64_t limit = 1ull << slots.size();
    for (uint64_t bits = 0; bits < limit; ++bits) {
      // Quick antisymmetry filter before building.
      bool anti_ok = true;
      for (size_t i = 0; i < slots.size() && anti_ok; ++i) {
        if (!((bits >> i) & 1ull)) continue;
        auto [x, y] = slots[i];
        for (size_t j = 0; j < slots.size(); ++j)
          if (((bits >> j) & 1ull) && slots[j].first == y && slots[j].second == x) {
            anti_ok = false;
            break;
          }
      }
      if (!anti_ok) continue;
      // Require transitivity of the given pairs so each poset is generated
      // exactly once from its full strict relation.
      std::vector<PointSet> up(n);
      for (int x = 0; x < n; ++x) up[x] = 1u << x;
      for (size_t i = 0; i < slots.size(); ++i)
        if ((bits >> i) & 1ull) up[slots[i].first] |= 1u << slots[i].second;
      bool transitive = true;
      for (int x = 0; x < n && transitive; ++x)
        for (int y = 0; y < n && transitive; ++y)
          if (x != y && ((up[x] >> y) & 1u))
            if ((up[x] | up[y]) != up[x]) transitive = false;
      if (!transitive) continue;

      std::vector<std::string> names(n);
      for (int i = 0; i < n; ++i) names[i] = "x" + std::to_string(i);
      std::vector<std::pair<int, int>> pairs;
      for (size_t i = 0; i < slots.size(); ++i)
        if ((bits >> i) & 1ull) pairs.push_back(slots[i]);
      FiniteSpace sp = FiniteSpace::from_relation(names, pairs);
      std::string key = sp.canonical_key();
      if (seen.insert(key).second) found.emplace_back(key, std::move(sp));
    }
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [key, sp] : found) out.push_back(std::move(sp));
  }
  return out;
}

namespace spaces {

FiniteSpace i3() {
  return FiniteSpace::from_relation_named({"l", "m", "r"}, {{"l", "m"}, {"r", "m"}});
}

FiniteSpace v3() {
  return FiniteSpace::from_relation_named({"b", "t1", "t2"}, {{"b", "t1"}, {"b", "t2"}});
}

FiniteSpace b4() {
  return FiniteSpace::from_relation_named(
      {"b", "l", "r", "m"},
      {{"b", "l"}, {"b", "r"}, {"l", "m"}, {"r", "m"}});
}

FiniteSpace chain(int n) {
  std::vector<std::string> names(n);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) names[i] = "c" + std::to_string(i);
  for (int i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
  return FiniteSpace::from_relation(names, pairs);
}

FiniteSpace antichain(int n) {
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) names[i] = "a" + std::to_string(i);
  return FiniteSpace::from_relation(names, {});
}

FiniteSpace point() { return antichain(1); }

}  // namespace spaces

}  // namespace qhc
