#include "qhc/sheaf.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace qhc {

namespace {

// Points of region ordered maximal-first: since x < y implies |up(x)| > |up(y)|,
// ascending popcount of up() is a reverse linear extension.
std::vector<int> descending_points(const FiniteSpace& X, PointSet region) {
  std::vector<int> pts;
  for (int x = 0; x < X.size(); ++x)
    if ((region >> x) & 1u) pts.push_back(x);
  std::stable_sort(pts.begin(), pts.end(), [&](int a, int b) {
    return __builtin_popcount(X.up(a)) < __builtin_popcount(X.up(b));
  });
  return pts;
}

void append_u32(std::string& s, uint32_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
  s.push_back(static_cast<char>((v >> 16) & 0xff));
  s.push_back(static_cast<char>((v >> 24) & 0xff));
}

uint32_t read_u32(const std::string& s, size_t pos) {
  uint32_t v = 0;
  for (int b = 3; b >= 0; --b) v = (v << 8) | static_cast<uint8_t>(s[pos + b]);
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// StalkSheaf

StalkSheaf::StalkSheaf(SpacePtr base, std::vector<uint32_t> sizes,
                       std::map<std::pair<int, int>, std::vector<uint32_t>> maps)
    : base_(std::move(base)), sizes_(std::move(sizes)) {
  const FiniteSpace& X = *base_;
  if (static_cast<int>(sizes_.size()) != X.size())
    throw SheafError("stalk count does not match the space");
  maps_.assign(X.strict_pairs().size(), {});
  for (auto& [pair, table] : maps) {
    int idx = X.pair_index(pair.first, pair.second);
    if (idx < 0) throw SheafError("restriction map given for unrelated points");
    maps_[idx] = std::move(table);
  }
  for (size_t i = 0; i < X.strict_pairs().size(); ++i) {
    auto [x, y] = X.strict_pairs()[i];
    if (maps_[i].size() != sizes_[x])
      throw SheafError("restriction map has wrong source size");
    for (uint32_t v : maps_[i])
      if (v >= sizes_[y]) throw SheafError("restriction map image out of range");
  }
}

uint32_t StalkSheaf::restrict_elem(int x, int y, uint32_t e) const {
  if (x == y) return e;
  return maps_[base_->pair_index(x, y)][e];
}

const std::vector<uint32_t>& StalkSheaf::map(int x, int y) const {
  int idx = base_->pair_index(x, y);
  if (idx < 0) throw SheafError("points are not related");
  return maps_[idx];
}

void StalkSheaf::validate() const {
  const FiniteSpace& X = *base_;
  for (auto [x, y] : X.strict_pairs())
    if (sizes_[x] > 0 && sizes_[y] == 0)
      throw SheafError("nonempty stalk maps into empty stalk");
  for (auto [x, y] : X.strict_pairs())
    for (int z = 0; z < X.size(); ++z) {
      if (z == y || z == x || !X.le(y, z)) continue;
      for (uint32_t e = 0; e < sizes_[x]; ++e)
        if (restrict_elem(y, z, restrict_elem(x, y, e)) != restrict_elem(x, z, e))
          throw SheafError("restriction maps do not compose at " + X.points()[x] +
                           "<=" + X.points()[y] + "<=" + X.points()[z]);
    }
  if (!X.is_open(support())) throw SheafError("support is not open");
}

PointSet StalkSheaf::support() const {
  PointSet s = 0;
  for (int x = 0; x < static_cast<int>(sizes_.size()); ++x)
    if (sizes_[x] > 0) s |= 1u << x;
  return s;
}

uint64_t StalkSheaf::total_elements() const {
  uint64_t t = 0;
  for (uint32_t s : sizes_) t += s;
  return t;
}

std::string StalkSheaf::serialize() const {
  std::string out;
  for (uint32_t s : sizes_) append_u32(out, s);
  for (const auto& table : maps_) {
    append_u32(out, 0xffffffffu);
    for (uint32_t v : table) append_u32(out, v);
  }
  return out;
}

StalkSheaf characteristic(SpacePtr base, PointSet open_u) {
  const FiniteSpace& X = *base;
  if (!X.is_open(open_u)) throw SheafError("characteristic sheaf needs an open set");
  StalkSheaf s;
  s.base_ = std::move(base);
  s.sizes_.assign(X.size(), 0);
  for (int x = 0; x < X.size(); ++x)
    if ((open_u >> x) & 1u) s.sizes_[x] = 1;
  s.maps_.assign(X.strict_pairs().size(), {});
  for (size_t i = 0; i < X.strict_pairs().size(); ++i) {
    auto [x, y] = X.strict_pairs()[i];
    if (s.sizes_[x] == 1) s.maps_[i] = {0};
  }
  return s;
}

StalkSheaf empty_sheaf(SpacePtr base) { return characteristic(std::move(base), 0); }

StalkSheaf product(const StalkSheaf& f, const StalkSheaf& g) {
  return product_family({&f, &g});
}

StalkSheaf product_family(const std::vector<const StalkSheaf*>& fs) {
  if (fs.empty()) throw SheafError("product of an empty family needs a base");
  SpacePtr base = fs[0]->base();
  const FiniteSpace& X = *base;
  std::vector<uint32_t> sizes(X.size(), 1);
  for (int x = 0; x < X.size(); ++x)
    for (const auto* f : fs) sizes[x] *= f->stalk_size(x);
  std::map<std::pair<int, int>, std::vector<uint32_t>> maps;
  for (auto [x, y] : X.strict_pairs()) {
    std::vector<uint32_t> table(sizes[x]);
    for (uint32_t e = 0; e < sizes[x]; ++e) {
      std::vector<uint32_t> comps(fs.size());
      uint32_t rem = e;
      for (size_t i = fs.size(); i-- > 0;) {
        uint32_t sz = fs[i]->stalk_size(x);
        comps[i] = rem % sz;
        rem /= sz;
      }
      uint32_t out = 0;
      for (size_t i = 0; i < fs.size(); ++i)
        out = out * fs[i]->stalk_size(y) + fs[i]->restrict_elem(x, y, comps[i]);
      table[e] = out;
    }
    maps[{x, y}] = std::move(table);
  }
  return StalkSheaf(base, std::move(sizes), std::move(maps));
}

StalkSheaf coproduct(const StalkSheaf& f, const StalkSheaf& g) {
  return coproduct_family({&f, &g});
}

StalkSheaf coproduct_family(const std::vector<const StalkSheaf*>& fs) {
  if (fs.empty()) throw SheafError("coproduct of an empty family needs a base");
  SpacePtr base = fs[0]->base();
  const FiniteSpace& X = *base;
  std::vector<uint32_t> sizes(X.size(), 0);
  for (int x = 0; x < X.size(); ++x)
    for (const auto* f : fs) sizes[x] += f->stalk_size(x);
  std::map<std::pair<int, int>, std::vector<uint32_t>> maps;
  for (auto [x, y] : X.strict_pairs()) {
    std::vector<uint32_t> table;
    table.reserve(sizes[x]);
    uint32_t offset_y = 0;
    for (const auto* f : fs) {
      for (uint32_t e = 0; e < f->stalk_size(x); ++e)
        table.push_back(offset_y + f->restrict_elem(x, y, e));
      offset_y += f->stalk_size(y);
    }
    maps[{x, y}] = std::move(table);
  }
  return StalkSheaf(base, std::move(sizes), std::move(maps));
}

PointSet support(const StalkSheaf& f) { return f.support(); }

// ---------------------------------------------------------------------------
// Natural-family search, shared by hom stalks, sections and morphism
// existence. Points are processed maximal-first, so each element's candidate
// set is an intersection of restriction fibers over already-fixed values.

namespace {

struct SourceView {
  const FiniteSpace* X;
  std::vector<const StalkSheaf*> parts;  // implicit product; empty = terminal

  uint64_t size(int x) const {
    uint64_t s = 1;
    for (const auto* p : parts) s *= p->stalk_size(x);
    return s;
  }
  uint64_t push(int x, int y, uint64_t e) const {
    if (parts.empty()) return 0;
    uint64_t out = 0;
    // Decode right-to-left, re-encode left-to-right.
    std::vector<uint32_t> comps(parts.size());
    uint64_t rem = e;
    for (size_t i = parts.size(); i-- > 0;) {
      uint32_t sz = parts[i]->stalk_size(x);
      comps[i] = static_cast<uint32_t>(rem % sz);
      rem /= sz;
    }
    for (size_t i = 0; i < parts.size(); ++i)
      out = out * parts[i]->stalk_size(y) + parts[i]->restrict_elem(x, y, comps[i]);
    return out;
  }
};

template <typename Callback>
uint64_t search_natural(const FiniteSpace& X, const SourceView& src, const StalkSheaf& tgt,
                        PointSet region, bool first_only, uint64_t budget,
                        Callback&& on_solution) {
  std::vector<int> pts = descending_points(X, region);
  std::vector<std::vector<int64_t>> tables(X.size());
  for (int y : pts) tables[y].assign(static_cast<size_t>(src.size(y)), -1);

  std::vector<std::pair<int, uint64_t>> slots;
  for (int y : pts)
    for (uint64_t e = 0; e < src.size(y); ++e) slots.emplace_back(y, e);

  uint64_t found = 0, steps = 0;
  std::vector<std::vector<uint32_t>> cands(slots.size());
  std::vector<size_t> cursor(slots.size(), 0);

  auto compute_candidates = [&](size_t i) {
    auto [y, e] = slots[i];
    cands[i].clear();
    uint32_t tg = tgt.stalk_size(y);
    for (uint32_t t = 0; t < tg; ++t) {
      bool ok = true;
      for (int z = 0; z < X.size() && ok; ++z) {
        if (z == y || !X.le(y, z) || !((region >> z) & 1u)) continue;
        int64_t above = tables[z][static_cast<size_t>(src.push(y, z, e))];
        if (above >= 0 && tgt.restrict_elem(y, z, t) != static_cast<uint32_t>(above))
          ok = false;
      }
      if (ok) cands[i].push_back(t);
    }
  };

  size_t i = 0;
  if (!slots.empty()) cursor[0] = 0;
  while (true) {
    if (++steps > budget) throw SheafError("natural-family search budget exceeded");
    if (i == slots.size()) {
      ++found;
      on_solution(tables);
      if (first_only || slots.empty()) return found;
      --i;
      tables[slots[i].first][slots[i].second] = -1;
      ++cursor[i];
      continue;
    }
    if (cursor[i] == 0) compute_candidates(i);
    if (cursor[i] >= cands[i].size()) {
      cursor[i] = 0;
      if (i == 0) return found;
      --i;
      tables[slots[i].first][slots[i].second] = -1;
      ++cursor[i];
      continue;
    }
    tables[slots[i].first][slots[i].second] = cands[i][cursor[i]];
    ++i;
    if (i < slots.size()) cursor[i] = 0;
  }
}

std::string encode_family(const FiniteSpace& X, PointSet region,
                          const std::vector<std::vector<int64_t>>& tables) {
  std::string out;
  for (int y = 0; y < X.size(); ++y) {
    if (!((region >> y) & 1u)) continue;
    append_u32(out, 0xfffffffeu);
    for (int64_t v : tables[y]) append_u32(out, static_cast<uint32_t>(v));
  }
  return out;
}

}  // namespace

StalkSheaf hom(const StalkSheaf& f, const StalkSheaf& g, HomTables* out_tables) {
  SpacePtr base = f.base();
  const FiniteSpace& X = *base;
  int n = X.size();

  std::vector<std::vector<std::string>> fam_keys(n);
  std::vector<std::unordered_map<std::string, uint32_t>> fam_index(n);
  if (out_tables) {
    out_tables->at.assign(n, {});
    out_tables->src_sizes.assign(n, 0);
    for (int x = 0; x < n; ++x) out_tables->src_sizes[x] = f.stalk_size(x);
  }

  SourceView src{&X, {&f}};
  for (int x = 0; x < n; ++x) {
    PointSet region = X.up(x);
    search_natural(X, src, g, region, /*first_only=*/false, (1ull << 34),
                   [&](const std::vector<std::vector<int64_t>>& tables) {
                     std::string key = encode_family(X, region, tables);
                     if (fam_index[x].emplace(key, fam_keys[x].size()).second) {
                       fam_keys[x].push_back(std::move(key));
                       if (out_tables)
                         for (int64_t v : tables[x])
                           out_tables->at[x].push_back(static_cast<uint32_t>(v));
                     }
                   });
  }

  std::vector<uint32_t> sizes(n);
  for (int x = 0; x < n; ++x) sizes[x] = static_cast<uint32_t>(fam_keys[x].size());

  auto decode_tables = [&](int x, const std::string& key) {
    std::vector<std::vector<int64_t>> tables(n);
    size_t pos = 0;
    for (int p = 0; p < n; ++p) {
      if (!((X.up(x) >> p) & 1u)) continue;
      pos += 4;  // separator
      tables[p].assign(f.stalk_size(p), -1);
      for (uint32_t i = 0; i < f.stalk_size(p); ++i) {
        tables[p][i] = read_u32(key, pos);
        pos += 4;
      }
    }
    return tables;
  };

  // Restriction along x <= y is truncation of the family to up(y).
  std::map<std::pair<int, int>, std::vector<uint32_t>> maps;
  for (auto [x, y] : X.strict_pairs()) {
    std::vector<uint32_t> table(sizes[x]);
    for (uint32_t e = 0; e < sizes[x]; ++e) {
      std::string sub = encode_family(X, X.up(y), decode_tables(x, fam_keys[x][e]));
      auto it = fam_index[y].find(sub);
      if (it == fam_index[y].end()) throw SheafError("hom restriction lookup failed");
      table[e] = it->second;
    }
    maps[{x, y}] = std::move(table);
  }
  return StalkSheaf(base, std::move(sizes), std::move(maps));
}

std::vector<std::vector<int32_t>> sections(const StalkSheaf& f, PointSet open_u) {
  const FiniteSpace& X = f.space();
  if (!X.is_open(open_u)) throw SheafError("sections over a non-open set");
  SourceView terminal{&X, {}};
  std::vector<std::vector<int32_t>> out;
  search_natural(X, terminal, f, open_u, /*first_only=*/false, (1ull << 34),
                 [&](const std::vector<std::vector<int64_t>>& tables) {
                   std::vector<int32_t> sec(X.size(), -1);
                   for (int y = 0; y < X.size(); ++y)
                     if ((open_u >> y) & 1u) sec[y] = static_cast<int32_t>(tables[y][0]);
                   out.push_back(std::move(sec));
                 });
  std::sort(out.begin(), out.end());
  return out;
}

bool has_global_section(const StalkSheaf& f) {
  const FiniteSpace& X = f.space();
  SourceView terminal{&X, {}};
  return search_natural(X, terminal, f, X.all(), /*first_only=*/true, (1ull << 34),
                        [](const std::vector<std::vector<int64_t>>&) {}) > 0;
}

bool isomorphic(const StalkSheaf& f, const StalkSheaf& g) {
  const FiniteSpace& X = f.space();
  if (f.sizes() != g.sizes()) return false;
  std::vector<int> pts = descending_points(X, X.all());
  std::vector<std::vector<int>> perm(X.size());

  // Stalkwise bijections commuting with restrictions; points above are
  // assigned before points below, so constraints look upward only.
  std::function<bool(size_t)> dfs = [&](size_t i) -> bool {
    if (i == pts.size()) return true;
    int y = pts[i];
    uint32_t sz = f.stalk_size(y);
    std::vector<int> p(sz);
    std::iota(p.begin(), p.end(), 0);
    do {
      bool ok = true;
      for (int z = 0; z < X.size() && ok; ++z) {
        if (z == y || !X.le(y, z)) continue;
        for (uint32_t e = 0; e < sz && ok; ++e) {
          uint32_t lhs = g.restrict_elem(y, z, static_cast<uint32_t>(p[e]));
          uint32_t rhs = static_cast<uint32_t>(perm[z][f.restrict_elem(y, z, e)]);
          if (lhs != rhs) ok = false;
        }
      }
      if (ok) {
        perm[y] = p;
        if (dfs(i + 1)) return true;
        perm[y].clear();
      }
    } while (std::next_permutation(p.begin(), p.end()));
    return false;
  };
  return dfs(0);
}

// ---------------------------------------------------------------------------
// OpenPresheaf

OpenPresheaf::OpenPresheaf(SpacePtr base, std::vector<uint32_t> sizes,
                           std::map<std::pair<PointSet, PointSet>, std::vector<uint32_t>> maps)
    : base_(std::move(base)), sizes_(std::move(sizes)) {
  const auto& os = base_->opens();
  if (sizes_.size() != os.size()) throw SheafError("presheaf sizes do not match opens");
  maps_.assign(os.size() * os.size(), {});
  for (auto& [uv, table] : maps) {
    if (uv.second & ~uv.first)
      throw SheafError("presheaf restriction map for a non-subset pair");
    int u = open_index(uv.first), v = open_index(uv.second);
    maps_[pair_idx(u, v)] = std::move(table);
  }
  for (size_t u = 0; u < os.size(); ++u) {
    auto& id = maps_[pair_idx(static_cast<int>(u), static_cast<int>(u))];
    if (id.empty()) {
      id.resize(sizes_[u]);
      std::iota(id.begin(), id.end(), 0);
    }
  }
}

const std::vector<PointSet>& OpenPresheaf::opens() const { return base_->opens(); }

int OpenPresheaf::open_index(PointSet u) const {
  const auto& os = base_->opens();
  auto it = std::lower_bound(os.begin(), os.end(), u);
  if (it == os.end() || *it != u) throw SheafError("not an open set of the base");
  return static_cast<int>(it - os.begin());
}

uint32_t OpenPresheaf::size_at(PointSet u) const { return sizes_[open_index(u)]; }

int OpenPresheaf::pair_idx(int u, int v) const {
  return u * static_cast<int>(base_->opens().size()) + v;
}

uint32_t OpenPresheaf::restrict_elem(PointSet u, PointSet v, uint32_t e) const {
  if (v & ~u) throw SheafError("presheaf restriction to a non-subset");
  const auto& table = maps_[pair_idx(open_index(u), open_index(v))];
  if (table.size() != size_at(u)) throw SheafError("missing presheaf restriction map");
  return table[e];
}

void OpenPresheaf::validate() const {
  const auto& os = base_->opens();
  for (PointSet u : os)
    for (PointSet v : os) {
      if (v & ~u) continue;
      for (uint32_t e = 0; e < size_at(u); ++e) {
        uint32_t uv = restrict_elem(u, v, e);
        if (uv >= size_at(v)) throw SheafError("presheaf restriction out of range");
        for (PointSet w : os) {
          if (w & ~v) continue;
          if (restrict_elem(v, w, uv) != restrict_elem(u, w, e))
            throw SheafError("presheaf restrictions do not compose");
        }
      }
    }
}

OpenPresheaf sections_of(const StalkSheaf& f) {
  SpacePtr base = f.base();
  const FiniteSpace& X = *base;
  const auto& os = X.opens();
  std::vector<std::vector<std::vector<int32_t>>> secs(os.size());
  std::vector<std::map<std::vector<int32_t>, uint32_t>> index(os.size());
  std::vector<uint32_t> sizes(os.size());
  for (size_t u = 0; u < os.size(); ++u) {
    secs[u] = sections(f, os[u]);
    sizes[u] = static_cast<uint32_t>(secs[u].size());
    for (uint32_t i = 0; i < sizes[u]; ++i) index[u][secs[u][i]] = i;
  }
  std::map<std::pair<PointSet, PointSet>, std::vector<uint32_t>> maps;
  for (size_t u = 0; u < os.size(); ++u)
    for (size_t v = 0; v < os.size(); ++v) {
      if (u == v || (os[v] & ~os[u])) continue;
      std::vector<uint32_t> table(sizes[u]);
      for (uint32_t e = 0; e < sizes[u]; ++e) {
        std::vector<int32_t> cut = secs[u][e];
        for (int x = 0; x < X.size(); ++x)
          if (!((os[v] >> x) & 1u)) cut[x] = -1;
        table[e] = index[v].at(cut);
      }
      maps[{os[u], os[v]}] = std::move(table);
    }
  return OpenPresheaf(base, std::move(sizes), std::move(maps));
}

StalkSheaf sheafify(const OpenPresheaf& p) {
  SpacePtr base = p.base();
  const FiniteSpace& X = *base;
  std::vector<uint32_t> sizes(X.size());
  for (int x = 0; x < X.size(); ++x) sizes[x] = p.size_at(X.up(x));
  std::map<std::pair<int, int>, std::vector<uint32_t>> maps;
  for (auto [x, y] : X.strict_pairs()) {
    std::vector<uint32_t> table(sizes[x]);
    for (uint32_t e = 0; e < sizes[x]; ++e)
      table[e] = p.restrict_elem(X.up(x), X.up(y), e);
    maps[{x, y}] = std::move(table);
  }
  return StalkSheaf(base, std::move(sizes), std::move(maps));
}

PointSet presheaf_support(const OpenPresheaf& p) {
  const FiniteSpace& X = *p.base();
  PointSet s = 0;
  for (int x = 0; x < X.size(); ++x)
    if (p.size_at(X.up(x)) > 0) s |= 1u << x;
  return s;
}

bool is_sheaf(const OpenPresheaf& p) {
  const FiniteSpace& X = *p.base();
  if (p.size_at(0) != 1) return false;
  StalkSheaf sh = sheafify(p);
  for (PointSet u : X.opens()) {
    // Matching families for the cover of u by minimal opens are exactly the
    // sections of the sheafification; gluing holds iff the canonical map to
    // them is bijective.
    auto secs = sections(sh, u);
    std::vector<std::vector<int32_t>> images;
    for (uint32_t e = 0; e < p.size_at(u); ++e) {
      std::vector<int32_t> img(X.size(), -1);
      for (int x = 0; x < X.size(); ++x)
        if ((u >> x) & 1u) img[x] = static_cast<int32_t>(p.restrict_elem(u, X.up(x), e));
      images.push_back(std::move(img));
    }
    std::sort(images.begin(), images.end());
    if (std::adjacent_find(images.begin(), images.end()) != images.end()) return false;
    if (images != secs) return false;
  }
  return true;
}

OpenPresheaf presheaf_characteristic(SpacePtr base, PointSet open_u) {
  return sections_of(characteristic(std::move(base), open_u));
}

OpenPresheaf presheaf_product(const OpenPresheaf& p, const OpenPresheaf& q) {
  SpacePtr base = p.base();
  const auto& os = base->opens();
  std::vector<uint32_t> sizes(os.size());
  for (size_t u = 0; u < os.size(); ++u) sizes[u] = p.size_at(os[u]) * q.size_at(os[u]);
  std::map<std::pair<PointSet, PointSet>, std::vector<uint32_t>> maps;
  for (PointSet u : os)
    for (PointSet v : os) {
      if (u == v || (v & ~u)) continue;
      std::vector<uint32_t> table(p.size_at(u) * q.size_at(u));
      for (uint32_t e = 0; e < table.size(); ++e) {
        uint32_t i = e / q.size_at(u), j = e % q.size_at(u);
        table[e] = p.restrict_elem(u, v, i) * q.size_at(v) + q.restrict_elem(u, v, j);
      }
      maps[{u, v}] = std::move(table);
    }
  return OpenPresheaf(base, std::move(sizes), std::move(maps));
}

OpenPresheaf presheaf_coproduct(const OpenPresheaf& p, const OpenPresheaf& q) {
  // Objectwise; in particular the value at the empty open doubles, which is
  // exactly where the coproduct stops being a sheaf.
  SpacePtr base = p.base();
  const auto& os = base->opens();
  std::vector<uint32_t> sizes(os.size());
  for (size_t u = 0; u < os.size(); ++u) sizes[u] = p.size_at(os[u]) + q.size_at(os[u]);
  std::map<std::pair<PointSet, PointSet>, std::vector<uint32_t>> maps;
  for (PointSet u : os)
    for (PointSet v : os) {
      if (u == v || (v & ~u)) continue;
      std::vector<uint32_t> table(p.size_at(u) + q.size_at(u));
      for (uint32_t e = 0; e < table.size(); ++e) {
        if (e < p.size_at(u)) table[e] = p.restrict_elem(u, v, e);
        else table[e] = p.size_at(v) + q.restrict_elem(u, v, e - p.size_at(u));
      }
      maps[{u, v}] = std::move(table);
    }
  return OpenPresheaf(base, std::move(sizes), std::move(maps));
}

OpenPresheaf presheaf_hom(const OpenPresheaf& p, const OpenPresheaf& q) {
  SpacePtr base = p.base();
  const FiniteSpace& X = *base;
  const auto& os = X.opens();
  size_t m = os.size();

  // Hom(P,Q)(U) is the set of natural families (psi_V : P(V) -> Q(V)) over
  // the opens V below U; the open lattice plays the role of the point poset.
  std::vector<size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    int pa = __builtin_popcount(os[a]), pb = __builtin_popcount(os[b]);
    return pa != pb ? pa > pb : os[a] < os[b];
  });

  std::vector<std::vector<std::string>> fam_keys(m);
  std::vector<std::map<std::string, uint32_t>> fam_index(m);

  auto encode = [&](size_t u, const std::vector<std::vector<int64_t>>& tab) {
    std::string key;
    for (size_t v = 0; v < m; ++v) {
      if (os[v] & ~os[u]) continue;
      append_u32(key, 0xfffffffeu);
      for (int64_t x : tab[v]) append_u32(key, static_cast<uint32_t>(x));
    }
    return key;
  };

  for (size_t u : order) {
    std::vector<size_t> vs;
    for (size_t v : order)
      if (!(os[v] & ~os[u])) vs.push_back(v);  // larger opens first

    std::vector<std::vector<int64_t>> tab(m);
    for (size_t v : vs) tab[v].assign(p.size_at(os[v]), -1);

    struct Slot { size_t v; uint32_t e; };
    std::vector<Slot> slots;
    for (size_t v : vs)
      for (uint32_t e = 0; e < p.size_at(os[v]); ++e) slots.push_back({v, e});

    std::function<void(size_t)> dfs = [&](size_t i) {
      if (i == slots.size()) {
        std::string key = encode(u, tab);
        if (fam_index[u].emplace(key, fam_keys[u].size()).second)
          fam_keys[u].push_back(std::move(key));
        return;
      }
      auto [v, e] = slots[i];
      for (uint32_t t = 0; t < q.size_at(os[v]); ++t) {
        bool ok = true;
        for (size_t w : vs) {
          if (w == v || (os[v] & ~os[w])) continue;  // need V below W
          // psi_V(P-restr(ew)) = Q-restr(psi_W(ew)) whenever the restriction
          // of ew lands on e.
          for (uint32_t ew = 0; ew < p.size_at(os[w]) && ok; ++ew) {
            if (tab[w].empty() || tab[w][ew] < 0) continue;
            if (p.restrict_elem(os[w], os[v], ew) == e &&
                q.restrict_elem(os[w], os[v], static_cast<uint32_t>(tab[w][ew])) != t)
              ok = false;
          }
          if (!ok) break;
        }
        if (!ok) continue;
        tab[v][e] = t;
        dfs(i + 1);
        tab[v][e] = -1;
      }
    };
    dfs(0);
  }

  std::vector<uint32_t> sizes(m);
  for (size_t u = 0; u < m; ++u) sizes[u] = static_cast<uint32_t>(fam_keys[u].size());

  std::map<std::pair<PointSet, PointSet>, std::vector<uint32_t>> maps;
  for (size_t u = 0; u < m; ++u)
    for (size_t v = 0; v < m; ++v) {
      if (u == v || (os[v] & ~os[u])) continue;
      std::vector<uint32_t> table(sizes[u]);
      for (uint32_t e = 0; e < sizes[u]; ++e) {
        const std::string& key = fam_keys[u][e];
        std::vector<std::vector<int64_t>> tab(m);
        size_t pos = 0;
        for (size_t w = 0; w < m; ++w) {
          if (os[w] & ~os[u]) continue;
          pos += 4;
          tab[w].assign(p.size_at(os[w]), -1);
          for (uint32_t i2 = 0; i2 < p.size_at(os[w]); ++i2) {
            tab[w][i2] = read_u32(key, pos);
            pos += 4;
          }
        }
        table[e] = fam_index[v].at(encode(v, tab));
      }
      maps[{os[u], os[v]}] = std::move(table);
    }
  return OpenPresheaf(base, std::move(sizes), std::move(maps));
}

bool presheaf_isomorphic(const OpenPresheaf& p, const OpenPresheaf& q) {
  const FiniteSpace& X = *p.base();
  const auto& os = X.opens();
  for (PointSet u : os)
    if (p.size_at(u) != q.size_at(u)) return false;
  std::vector<size_t> order(os.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    int pa = __builtin_popcount(os[a]), pb = __builtin_popcount(os[b]);
    return pa != pb ? pa > pb : os[a] < os[b];
  });
  std::vector<std::vector<int>> perm(os.size());
  std::function<bool(size_t)> dfs = [&](size_t i) -> bool {
    if (i == order.size()) return true;
    size_t u = order[i];
    uint32_t sz = p.size_at(os[u]);
    std::vector<int> pm(sz);
    std::iota(pm.begin(), pm.end(), 0);
    do {
      bool ok = true;
      for (size_t j = 0; j < i && ok; ++j) {
        size_t w = order[j];  // assigned; os[w] is not below os[u] unless equal
        if (os[u] & ~os[w]) continue;
        // u below w: check naturality along the restriction w -> u.
        for (uint32_t e = 0; e < p.size_at(os[w]) && ok; ++e) {
          uint32_t lhs = q.restrict_elem(os[w], os[u], static_cast<uint32_t>(perm[w][e]));
          uint32_t rhs = static_cast<uint32_t>(pm[p.restrict_elem(os[w], os[u], e)]);
          if (lhs != rhs) ok = false;
        }
      }
      if (ok) {
        perm[u] = pm;
        if (dfs(i + 1)) return true;
        perm[u].clear();
      }
    } while (std::next_permutation(pm.begin(), pm.end()));
    return false;
  };
  return dfs(0);
}

// ---------------------------------------------------------------------------
// SheafAlgebra

SheafAlgebra::SheafAlgebra(SpacePtr space, uint64_t stalk_budget)
    : space_(std::move(space)), stalk_budget_(stalk_budget) {}

SheafAlgebra::Id SheafAlgebra::intern(const StalkSheaf& s) {
  std::string key = s.serialize();
  auto it = intern_.find(key);
  if (it != intern_.end()) return it->second;
  Id id = static_cast<Id>(values_.size());
  values_.push_back(s);
  supports_.push_back(s.support());
  has_section_.push_back(std::nullopt);
  intern_.emplace(std::move(key), id);
  return id;
}

SheafAlgebra::Id SheafAlgebra::characteristic(PointSet open_u) {
  auto it = chars_.find(open_u);
  if (it != chars_.end()) return it->second;
  Id id = intern(qhc::characteristic(space_, open_u));
  chars_[open_u] = id;
  return id;
}

SheafAlgebra::Id SheafAlgebra::product(Id a, Id b) {
  auto key = std::make_pair(a, b);
  auto it = product_memo_.find(key);
  if (it != product_memo_.end()) return it->second;
  Id id = intern(qhc::product(values_[a], values_[b]));
  product_memo_[key] = id;
  return id;
}

SheafAlgebra::Id SheafAlgebra::coproduct(Id a, Id b) {
  auto key = std::make_pair(a, b);
  auto it = coproduct_memo_.find(key);
  if (it != coproduct_memo_.end()) return it->second;
  Id id = intern(qhc::coproduct(values_[a], values_[b]));
  coproduct_memo_[key] = id;
  return id;
}

SheafAlgebra::Id SheafAlgebra::hom(Id a, Id b) {
  auto key = std::make_pair(a, b);
  auto it = hom_memo_.find(key);
  if (it != hom_memo_.end()) return it->second;
  HomTables tables;
  StalkSheaf h = qhc::hom(values_[a], values_[b], &tables);
  if (h.total_elements() > stalk_budget_)
    throw SheafError("hom sheaf exceeds the stalk budget");
  Id id = intern(h);
  hom_memo_[key] = id;
  hom_tables_.emplace(key, std::move(tables));
  return id;
}

uint32_t SheafAlgebra::hom_apply(Id f, Id g, int x, uint32_t elem, uint32_t arg) {
  auto it = hom_tables_.find({f, g});
  if (it == hom_tables_.end()) throw SheafError("hom(f, g) was never computed");
  const HomTables& t = it->second;
  return t.at[x][elem * t.src_sizes[x] + arg];
}

void SheafAlgebra::verify_hom_naturality(Id f, Id g) {
  if (hom_verified_.count({f, g})) return;
  Id h = hom(f, g);
  const StalkSheaf& hf = values_[f];
  const StalkSheaf& hg = values_[g];
  const StalkSheaf& hh = values_[h];
  for (auto [x, y] : space_->strict_pairs())
    for (uint32_t e = 0; e < hh.stalk_size(x); ++e)
      for (uint32_t a = 0; a < hf.stalk_size(x); ++a) {
        uint32_t lhs = hg.restrict_elem(x, y, hom_apply(f, g, x, e, a));
        uint32_t rhs =
            hom_apply(f, g, y, hh.restrict_elem(x, y, e), hf.restrict_elem(x, y, a));
        if (lhs != rhs) throw SheafError("hom application is not natural");
      }
  hom_verified_.insert({f, g});
}

PointSet SheafAlgebra::hom_support(Id a, Id b) {
  auto key = std::make_pair(a, b);
  auto it = hom_support_memo_.find(key);
  if (it != hom_support_memo_.end()) return it->second;
  PointSet out = 0;
  {
    auto mat = hom_memo_.find(key);
    if (mat != hom_memo_.end()) {
      out = supports_[mat->second];
      hom_support_memo_[key] = out;
      return out;
    }
  }
  const FiniteSpace& X = *space_;
  SourceView src{space_.get(), {&values_[a]}};
  for (int x = 0; x < X.size(); ++x) {
    if (search_natural(X, src, values_[b], X.up(x), /*first_only=*/true, (1ull << 34),
                       [](const std::vector<std::vector<int64_t>>&) {}) > 0)
      out |= 1u << x;
  }
  hom_support_memo_[key] = out;
  return out;
}

bool SheafAlgebra::has_global_section(Id id) {
  if (has_section_[id]) return *has_section_[id];
  bool b = qhc::has_global_section(values_[id]);
  has_section_[id] = b;
  return b;
}

bool SheafAlgebra::morphism_exists(const std::vector<Id>& sources, Id target) {
  auto key = std::make_pair(sources, target);
  auto it = morphism_memo_.find(key);
  if (it != morphism_memo_.end()) return it->second;
  SourceView src{space_.get(), {}};
  for (Id s : sources) src.parts.push_back(&values_[s]);
  bool ok = search_natural(*space_, src, values_[target], space_->all(),
                           /*first_only=*/true, (1ull << 34),
                           [](const std::vector<std::vector<int64_t>>&) {}) > 0;
  morphism_memo_[key] = ok;
  return ok;
}

bool SheafAlgebra::isomorphic(Id a, Id b) {
  if (a == b) return true;
  return qhc::isomorphic(values_[a], values_[b]);
}

}  // namespace qhc
