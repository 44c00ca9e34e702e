#include "qhc/corpus.hpp"

#include <algorithm>
#include <numeric>

#include "qhc/transforms.hpp"

namespace qhc {

const char* to_string(ModelClass c) {
  switch (c) {
    case ModelClass::ET: return "et";
    case ModelClass::TK: return "tk";
    case ModelClass::Sheaf: return "sheaf";
  }
  return "?";
}

ModelClass model_class_from_string(const std::string& s) {
  if (s == "et") return ModelClass::ET;
  if (s == "tk") return ModelClass::TK;
  if (s == "sheaf") return ModelClass::Sheaf;
  throw std::runtime_error("unknown model class: " + s);
}

Signature corpus_signature() {
  return Signature({{"a", Sort::Problem, 1}, {"p", Sort::Proposition, 1}});
}

// ---------------------------------------------------------------------------
// Sheaf enumeration up to isomorphism

namespace {

std::string canonical_sheaf_key(const StalkSheaf& s) {
  const FiniteSpace& X = s.space();
  int n = X.size();
  // Minimize the serialization over independent relabelings of each stalk.
  std::vector<std::vector<std::vector<uint32_t>>> perms(n);
  for (int x = 0; x < n; ++x) {
    std::vector<uint32_t> p(s.stalk_size(x));
    std::iota(p.begin(), p.end(), 0);
    do {
      perms[x].push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  std::string best;
  std::vector<size_t> pick(n, 0);
  for (;;) {
    std::string key;
    for (int x = 0; x < n; ++x) key += static_cast<char>(s.stalk_size(x));
    for (auto [x, y] : X.strict_pairs()) {
      key += '|';
      const auto& px = perms[x][pick[x]];
      const auto& py = perms[y][pick[y]];
      // relabeled map: e -> py[map(px^-1(e))]; build px inverse inline.
      std::vector<uint32_t> inv(px.size());
      for (uint32_t i = 0; i < px.size(); ++i) inv[px[i]] = i;
      for (uint32_t e = 0; e < s.stalk_size(x); ++e)
        key += static_cast<char>(py[s.restrict_elem(x, y, inv[e])]);
    }
    if (best.empty() || key < best) best = key;
    int i = 0;
    for (; i < n; ++i) {
      if (++pick[i] < perms[i].size()) break;
      pick[i] = 0;
    }
    if (i == n) break;
  }
  return best;
}

// Hasse covers of the poset: x < y with nothing strictly between.
std::vector<std::pair<int, int>> cover_pairs(const FiniteSpace& X) {
  std::vector<std::pair<int, int>> out;
  for (auto [x, y] : X.strict_pairs()) {
    bool cover = true;
    for (int z = 0; z < X.size() && cover; ++z)
      if (z != x && z != y && X.le(x, z) && X.le(z, y)) cover = false;
    if (cover) out.emplace_back(x, y);
  }
  return out;
}

}  // namespace

std::vector<StalkSheaf> enumerate_sheaves(const SpacePtr& space, int max_stalk) {
  const FiniteSpace& X = *space;
  int n = X.size();
  auto covers = cover_pairs(X);

  std::vector<StalkSheaf> out;
  std::set<std::string> seen;

  // All stalk-size assignments with nonemptiness propagating upward.
  std::vector<uint32_t> sizes(n, 0);
  std::function<void(int)> size_rec = [&](int i) {
    if (i == n) {
      bool ok = true;
      for (auto [x, y] : X.strict_pairs())
        if (sizes[x] > 0 && sizes[y] == 0) ok = false;
      if (!ok) return;

      // Enumerate the cover maps; derive and check the composites.
      std::vector<std::vector<uint32_t>> cmap(covers.size());
      std::function<void(size_t)> map_rec = [&](size_t ci) {
        if (ci == covers.size()) {
          // Derive maps for all strict pairs along cover chains; all paths
          // must agree or the candidate is not functorial.
          std::map<std::pair<int, int>, std::vector<uint32_t>> maps;
          for (size_t k = 0; k < covers.size(); ++k) maps[covers[k]] = cmap[k];
          bool consistent = true;
          // Sort strict pairs by interval size so composites build bottom-up.
          auto pairs = X.strict_pairs();
          std::stable_sort(pairs.begin(), pairs.end(), [&](auto a, auto b) {
            return __builtin_popcount(X.up(a.first) & X.down(a.second)) <
                   __builtin_popcount(X.up(b.first) & X.down(b.second));
          });
          for (auto [x, y] : pairs) {
            if (maps.count({x, y})) continue;
            std::optional<std::vector<uint32_t>> composite;
            for (auto [cx, cy] : covers) {
              if (cx != x || !X.le(cy, y) || cy == y) continue;
              auto upper = maps.find({cy, y});
              if (upper == maps.end()) continue;
              std::vector<uint32_t> via(sizes[x]);
              const auto& first = maps.at({cx, cy});
              for (uint32_t e = 0; e < sizes[x]; ++e) via[e] = upper->second[first[e]];
              if (!composite) composite = via;
              else if (*composite != via) { consistent = false; break; }
            }
            if (!consistent) break;
            if (!composite) { consistent = false; break; }
            maps[{x, y}] = *composite;
          }
          if (!consistent) return;
          StalkSheaf s(space, sizes, maps);
          std::string key = canonical_sheaf_key(s);
          if (seen.insert(key).second) out.push_back(std::move(s));
          return;
        }
        auto [x, y] = covers[ci];
        uint32_t sx = sizes[x], sy = sizes[y];
        if (sx == 0) {
          cmap[ci] = {};
          map_rec(ci + 1);
          return;
        }
        // All functions [sx] -> [sy].
        std::vector<uint32_t> f(sx, 0);
        for (;;) {
          cmap[ci] = f;
          map_rec(ci + 1);
          uint32_t i = 0;
          for (; i < sx; ++i) {
            if (++f[i] < sy) break;
            f[i] = 0;
          }
          if (i == sx) break;
        }
      };
      map_rec(0);
      return;
    }
    for (uint32_t s = 0; s <= static_cast<uint32_t>(max_stalk); ++s) {
      sizes[i] = s;
      size_rec(i + 1);
    }
    sizes[i] = 0;
  };
  size_rec(0);

  std::sort(out.begin(), out.end(), [](const StalkSheaf& a, const StalkSheaf& b) {
    if (a.sizes() != b.sizes()) return a.sizes() < b.sizes();
    return a.serialize() < b.serialize();
  });
  return out;
}

// ---------------------------------------------------------------------------
// Instance pools and rules

InstanceGen InstanceGen::standard() {
  Signature sig = corpus_signature();
  InstanceGen g;
  for (const char* text : {"a(x)", "!p(x)", "~a(x)", "nabla a(x)", "bot", "~bot"})
    g.problem_pool.push_back(parse(text, sig));
  for (const char* text : {"p(x)", "?a(x)", "~p(x)", "box p(x)", "ff", "tt"})
    g.prop_pool.push_back(parse(text, sig));
  return g;
}

namespace {

Formula meta0(const char* name, Sort s) { return Formula::atom(name, {}, s); }
Formula meta1v(const char* name, Sort s) { return Formula::atom(name, {"v"}, s); }

std::vector<RuleScheme> build_rules() {
  std::vector<RuleScheme> out;
  for (Sort s : {Sort::Problem, Sort::Proposition}) {
    std::string suffix = s == Sort::Problem ? "@prob" : "@prop";
    Formula A = meta0("A", s), B = meta0("B", s), S = meta0("S", s), Av = meta1v("A", s);
    MetaVarDecl a{"A", s, 0}, b{"B", s, 0}, sv{"S", s, 0}, a1{"A", s, 1};

    out.push_back({"mp" + suffix, {a, b}, {A, Formula::imp(A, B)}, B});
    out.push_back({"gen" + suffix, {a1}, {Av}, Formula::forall("v", Av)});
    out.push_back({"gen-under-imp" + suffix,
                   {sv, a1},
                   {Formula::imp(S, Av)},
                   Formula::imp(S, Formula::forall("v", Av))});
    out.push_back({"gen-exists" + suffix,
                   {sv, a1},
                   {Formula::imp(Av, S)},
                   Formula::imp(Formula::exists("v", Av), S)});
  }
  {
    MetaVarDecl p{"P", Sort::Proposition, 0};
    Formula P = meta0("P", Sort::Proposition);
    out.push_back({"nec-bang", {p}, {P}, Formula::bang(P)});
  }
  {
    MetaVarDecl a{"A", Sort::Problem, 0};
    Formula A = meta0("A", Sort::Problem);
    out.push_back({"nec-quest", {a}, {A}, Formula::quest(A)});
  }
  return out;
}

}  // namespace

const std::vector<RuleScheme>& inference_rules() {
  static const std::vector<RuleScheme> rules = build_rules();
  return rules;
}

// ---------------------------------------------------------------------------
// Model enumeration

uint64_t for_each_model(ModelClass cls, const SpacePtr& space, int domain_size,
                        int max_stalk, bool dedupe, const ModelVisitor& visitor) {
  const FiniteSpace& X = *space;
  Signature sig = corpus_signature();
  std::vector<std::string> domain;
  for (int d = 0; d < domain_size; ++d) domain.push_back("d" + std::to_string(d));

  std::vector<PointSet> subsets;
  for (PointSet s = 0; s <= X.all(); ++s) subsets.push_back(s);
  const std::vector<PointSet>& opens = X.opens();
  std::vector<PointSet> regs = X.regular_opens();

  uint64_t visited = 0;

  auto domain_swap_skip = [&](const std::vector<int>& a_idx,
                              const std::vector<int>& p_idx) {
    if (!dedupe || domain_size != 2) return false;
    // Keep only the lexicographically least representative under the swap.
    std::vector<int> key = {a_idx[0], a_idx[1], p_idx[0], p_idx[1]};
    std::vector<int> swp = {a_idx[1], a_idx[0], p_idx[1], p_idx[0]};
    return swp < key;
  };

  auto tuples = [&](size_t base, int k) {
    // All k-tuples over [0, base) in lexicographic order, most significant
    // first.
    std::vector<std::vector<int>> out;
    std::vector<int> t(k, 0);
    for (;;) {
      out.push_back(t);
      int i = k - 1;
      for (; i >= 0; --i) {
        if (++t[i] < static_cast<int>(base)) break;
        t[i] = 0;
      }
      if (i < 0) break;
    }
    return out;
  };

  if (cls == ModelClass::Sheaf) {
    std::vector<StalkSheaf> sheaves = enumerate_sheaves(space, max_stalk);
    SheafModel m;
    m.space = space;
    m.domain = domain;
    m.signature = sig;
    auto a_tuples = tuples(sheaves.size(), domain_size);
    auto p_tuples = tuples(subsets.size(), domain_size);
    for (const auto& at : a_tuples)
      for (const auto& pt : p_tuples) {
        if (domain_swap_skip(at, pt)) continue;
        for (int d = 0; d < domain_size; ++d) {
          m.prob_atoms["a"][{d}] = sheaves[at[d]];
          m.prop_atoms["p"][{d}] = subsets[pt[d]];
        }
        ++visited;
        if (!visitor.sheaf(m)) return visited;
      }
    return visited;
  }

  if (cls == ModelClass::ET) {
    ETModel m;
    m.space = space;
    m.domain = domain;
    m.signature = sig;
    auto a_tuples = tuples(opens.size(), domain_size);
    auto p_tuples = tuples(subsets.size(), domain_size);
    for (const auto& at : a_tuples)
      for (const auto& pt : p_tuples) {
        if (domain_swap_skip(at, pt)) continue;
        for (int d = 0; d < domain_size; ++d) {
          m.prob_atoms["a"][{d}] = opens[at[d]];
          m.prop_atoms["p"][{d}] = subsets[pt[d]];
        }
        ++visited;
        if (!visitor.et(m)) return visited;
      }
    return visited;
  }

  TKModel m;
  m.space = space;
  m.domain = domain;
  m.signature = sig;
  auto a_tuples = tuples(opens.size(), domain_size);
  auto p_tuples = tuples(regs.size(), domain_size);
  for (const auto& at : a_tuples)
    for (const auto& pt : p_tuples) {
      if (domain_swap_skip(at, pt)) continue;
      for (int d = 0; d < domain_size; ++d) {
        m.prob_atoms["a"][{d}] = opens[at[d]];
        m.prop_atoms["p"][{d}] = regs[pt[d]];
      }
      ++visited;
      if (!visitor.tk(m)) return visited;
    }
  return visited;
}

// ---------------------------------------------------------------------------
// The soundness sweep

namespace {

struct BuiltInstance {
  std::string description;
  std::string schema_name;
  std::vector<Formula> premises;  // empty for axioms
  Formula conclusion;             // closed for axioms; open allowed for rules
  bool is_rule = false;
  MetaAssignment assignment;
  // Metavariable assignment summary, used for the per-model value key.
  std::vector<std::pair<Sort, int>> pool_choice;  // per metavar: sort + pool idx
};

// Enumerate metavariable assignments over the pools; 0-ary metavariables get
// their own free variable so the closure quantifies them independently.
void build_assignments(const std::vector<MetaVarDecl>& metavars, const InstanceGen& gen,
                       std::vector<MetaAssignment>& assignments,
                       std::vector<std::vector<std::pair<Sort, int>>>& choices) {
  std::vector<int> pick(metavars.size(), 0);
  for (;;) {
    MetaAssignment ma;
    std::vector<std::pair<Sort, int>> choice;
    for (size_t i = 0; i < metavars.size(); ++i) {
      const MetaVarDecl& mv = metavars[i];
      const Formula& body = gen.pool(mv.sort)[pick[i]];
      choice.emplace_back(mv.sort, pick[i]);
      if (mv.arity == 0) {
        Var fresh = "x" + mv.name;
        ma.formulas[mv.name] = {{}, substitute(body, {{"x", fresh}})};
      } else {
        ma.formulas[mv.name] = {{"x"}, body};
      }
    }
    ma.terms["t"] = "y";
    assignments.push_back(std::move(ma));
    choices.push_back(std::move(choice));
    size_t i = 0;
    for (; i < metavars.size(); ++i) {
      if (++pick[i] < static_cast<int>(gen.pool(metavars[i].sort).size())) break;
      pick[i] = 0;
    }
    if (i == metavars.size()) break;
  }
}

std::vector<BuiltInstance> build_instances(const InstanceGen& gen) {
  std::vector<BuiltInstance> out;
  for (const Schema& schema : axiom_schemata()) {
    std::vector<MetaAssignment> assignments;
    std::vector<std::vector<std::pair<Sort, int>>> choices;
    build_assignments(schema.metavars, gen, assignments, choices);
    for (size_t i = 0; i < assignments.size(); ++i) {
      BuiltInstance inst;
      inst.schema_name = schema.name;
      inst.conclusion = instantiate_schema(schema, assignments[i], /*close=*/true);
      inst.description = schema.name + ": " + print(inst.conclusion);
      inst.assignment = assignments[i];
      inst.pool_choice = choices[i];
      out.push_back(std::move(inst));
    }
  }
  for (const RuleScheme& rule : inference_rules()) {
    std::vector<MetaAssignment> assignments;
    std::vector<std::vector<std::pair<Sort, int>>> choices;
    build_assignments(rule.metavars, gen, assignments, choices);
    for (size_t i = 0; i < assignments.size(); ++i) {
      BuiltInstance inst;
      inst.schema_name = rule.name;
      inst.is_rule = true;
      inst.assignment = assignments[i];
      Schema shell{rule.name, rule.metavars, {}, {}};
      for (const Formula& prem : rule.premises) {
        shell.pattern = prem;
        inst.premises.push_back(instantiate_schema(shell, assignments[i], /*close=*/false));
      }
      shell.pattern = rule.conclusion;
      inst.conclusion = instantiate_schema(shell, assignments[i], /*close=*/false);
      inst.description = rule.name + ": " + print(inst.conclusion);
      inst.pool_choice = choices[i];
      out.push_back(std::move(inst));
    }
  }
  return out;
}

struct FamilyKey {
  // One 64-bit value id per (sort, pool index) and domain element.
  std::vector<uint64_t> problem_ids;
  std::vector<uint64_t> prop_ids;
  int domain_size = 1;
  uint64_t id_of(Sort s, int pool_idx, int d) const {
    const auto& v = s == Sort::Problem ? problem_ids : prop_ids;
    return v[pool_idx * domain_size + d];
  }
};

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

using AxiomOverride = std::function<std::optional<bool>(const BuiltInstance&)>;

template <typename ValidAllEnv, typename Valid>
void run_instances(const std::vector<BuiltInstance>& instances, const FamilyKey& fams,
                   std::set<uint64_t>& seen, SweepCensus& census,
                   const std::string& model_desc, Valid&& valid_closed,
                   ValidAllEnv&& valid_open, const AxiomOverride& override = {}) {
  for (size_t idx = 0; idx < instances.size(); ++idx) {
    const BuiltInstance& inst = instances[idx];
    uint64_t key = mix(0xcbf29ce484222325ull, idx);
    for (const auto& [sort, pool_idx] : inst.pool_choice)
      for (int d = 0; d < fams.domain_size; ++d)
        key = mix(key, fams.id_of(sort, pool_idx, d));
    if (!seen.insert(key).second) {
      ++census.skipped;
      continue;
    }
    ++census.checks;
    if (!inst.is_rule) {
      bool ok;
      std::optional<bool> special = override ? override(inst) : std::nullopt;
      ok = special ? *special : valid_closed(inst.conclusion);
      if (!ok)
        census.violations.push_back(model_desc + " refutes " + inst.description);
      continue;
    }
    bool premises_ok = true;
    for (const Formula& prem : inst.premises)
      if (!valid_open(prem)) {
        premises_ok = false;
        break;
      }
    if (premises_ok && !valid_open(inst.conclusion))
      census.violations.push_back(model_desc + " refutes rule " + inst.description);
  }
}

// ---------------------------------------------------------------------------
// Realizer-guided validity for the base intuitionistic axioms on sheaf
// models. The canonical witness is constructed elementwise from projections,
// injections, pairing, case analysis and hom application, then verified to be
// total and natural. This sidesteps the blind search that nested homs would
// otherwise force.

struct RealizerCheck {
  SheafAlgebra* alg = nullptr;
  std::vector<SheafAlgebra::Id> sources;
  SheafAlgebra::Id target = 0;
  std::function<uint32_t(int x, const std::vector<uint32_t>& comps)> eta;

  bool verify() const {
    const FiniteSpace& X = *alg->space();
    uint64_t work = 0;
    const uint64_t budget = 1ull << 24;
    for (int x = 0; x < X.size(); ++x) {
      uint64_t count = 1;
      for (auto s : sources) count *= alg->value(s).stalk_size(x);
      if (count == 0) continue;
      if (alg->value(target).stalk_size(x) == 0) return false;
      std::vector<uint32_t> comps(sources.size(), 0);
      for (uint64_t e = 0; e < count; ++e) {
        if ((work += 1 + X.size()) > budget)
          throw SheafError("realizer verification budget exceeded");
        uint32_t t = eta(x, comps);
        if (t >= alg->value(target).stalk_size(x)) return false;
        for (int y = 0; y < X.size(); ++y) {
          if (y == x || !X.le(x, y)) continue;
          std::vector<uint32_t> pushed(sources.size());
          for (size_t i = 0; i < sources.size(); ++i)
            pushed[i] = alg->value(sources[i]).restrict_elem(x, y, comps[i]);
          if (eta(y, pushed) != alg->value(target).restrict_elem(x, y, t))
            return false;
        }
        for (size_t i = sources.size(); i-- > 0;) {
          if (++comps[i] < alg->value(sources[i]).stalk_size(x)) break;
          comps[i] = 0;
        }
      }
    }
    return true;
  }
};

// Left-fold layouts used by the quantifier clauses of the evaluator.
uint32_t fold_product_decode(SheafAlgebra& alg, const std::vector<SheafAlgebra::Id>& ids,
                             int x, uint32_t e, int component) {
  for (int i = static_cast<int>(ids.size()) - 1; i >= 1; --i) {
    uint32_t sz = alg.value(ids[i]).stalk_size(x);
    uint32_t c = e % sz;
    e /= sz;
    if (i == component) return c;
  }
  return e;
}

uint32_t fold_coproduct_offset(SheafAlgebra& alg, const std::vector<SheafAlgebra::Id>& ids,
                               int x, int component) {
  uint32_t off = 0;
  for (int i = 0; i < component; ++i) off += alg.value(ids[i]).stalk_size(x);
  return off;
}

class SheafAxiomRealizers {
 public:
  SheafAxiomRealizers(const SheafModel& m, const InstanceGen& gen) : m_(m), gen_(gen) {}

  std::optional<bool> check(const BuiltInstance& inst) {
    static const std::set<std::string> covered = {
        "k@prob",          "s@prob",          "and-intro@prob", "and-elim-l@prob",
        "and-elim-r@prob", "or-intro-l@prob", "or-intro-r@prob", "or-elim@prob",
        "ex-falso@prob",   "forall-elim@prob", "exists-intro@prob"};
    if (!covered.count(inst.schema_name)) return std::nullopt;

    // All closure variables range over the domain.
    std::set<Var> fv = free_vars_of_assignment(inst);
    std::vector<Var> vars(fv.begin(), fv.end());
    int n = static_cast<int>(m_.domain.size());
    std::vector<int> pick(vars.size(), 0);
    for (;;) {
      Env env;
      for (size_t i = 0; i < vars.size(); ++i) env[vars[i]] = pick[i];
      if (!check_env(inst, env)) return false;
      size_t i = 0;
      for (; i < pick.size(); ++i) {
        if (++pick[i] < n) break;
        pick[i] = 0;
      }
      if (i == pick.size()) break;
    }
    return true;
  }

 private:
  using Id = SheafAlgebra::Id;

  std::set<Var> free_vars_of_assignment(const BuiltInstance& inst) const {
    std::set<Var> fv;
    for (const auto& [name, fam] : inst.assignment.formulas) {
      std::set<Var> bodyfv = free_vars(fam.body);
      for (const auto& p : fam.params) bodyfv.erase(p);
      fv.insert(bodyfv.begin(), bodyfv.end());
    }
    for (const auto& [name, v] : inst.assignment.terms) fv.insert(v);
    return fv;
  }

  Id value_of(const std::string& metavar, const BuiltInstance& inst, const Env& env,
              int param = -1) {
    const FormulaFamily& fam = inst.assignment.formulas.at(metavar);
    Env e = env;
    if (!fam.params.empty()) e[fam.params[0]] = param;
    return eval_sheaf(m_, fam.body, e).sheaf;
  }

  bool check_env(const BuiltInstance& inst, const Env& env) {
    SheafAlgebra& alg = m_.algebra();
    const std::string& name = inst.schema_name;
    RealizerCheck rc;
    rc.alg = &alg;

    if (name == "k@prob") {
      Id a = value_of("A", inst, env), b = value_of("B", inst, env);
      rc.sources = {a, b};
      rc.target = a;
      rc.eta = [](int, const std::vector<uint32_t>& c) { return c[0]; };
    } else if (name == "s@prob") {
      Id a = value_of("A", inst, env), b = value_of("B", inst, env),
         c = value_of("C", inst, env);
      Id hbc = alg.hom(b, c);
      Id h1 = alg.hom(a, hbc);
      Id h2 = alg.hom(a, b);
      alg.verify_hom_naturality(b, c);
      alg.verify_hom_naturality(a, hbc);
      alg.verify_hom_naturality(a, b);
      rc.sources = {h1, h2, a};
      rc.target = c;
      rc.eta = [&alg, a, b, c, hbc](int x, const std::vector<uint32_t>& cm) {
        uint32_t inner = alg.hom_apply(a, hbc, x, cm[0], cm[2]);
        uint32_t barg = alg.hom_apply(a, b, x, cm[1], cm[2]);
        return alg.hom_apply(b, c, x, inner, barg);
      };
    } else if (name == "and-intro@prob") {
      Id a = value_of("A", inst, env), b = value_of("B", inst, env);
      rc.sources = {a, b};
      rc.target = alg.product(a, b);
      rc.eta = [&alg, b](int x, const std::vector<uint32_t>& c) {
        return c[0] * alg.value(b).stalk_size(x) + c[1];
      };
    } else if (name == "and-elim-l@prob" || name == "and-elim-r@prob") {
      Id a = value_of("A", inst, env), b = value_of("B", inst, env);
      bool left = name == "and-elim-l@prob";
      rc.sources = {alg.product(a, b)};
      rc.target = left ? a : b;
      rc.eta = [&alg, b, left](int x, const std::vector<uint32_t>& c) {
        uint32_t sb = alg.value(b).stalk_size(x);
        return left ? c[0] / sb : c[0] % sb;
      };
    } else if (name == "or-intro-l@prob" || name == "or-intro-r@prob") {
      Id a = value_of("A", inst, env), b = value_of("B", inst, env);
      bool left = name == "or-intro-l@prob";
      rc.sources = {left ? a : b};
      rc.target = alg.coproduct(a, b);
      rc.eta = [&alg, a, left](int x, const std::vector<uint32_t>& c) {
        return left ? c[0] : alg.value(a).stalk_size(x) + c[0];
      };
    } else if (name == "or-elim@prob") {
      Id a = value_of("A", inst, env), b = value_of("B", inst, env),
         c = value_of("C", inst, env);
      Id hac = alg.hom(a, c), hbc = alg.hom(b, c);
      alg.verify_hom_naturality(a, c);
      alg.verify_hom_naturality(b, c);
      rc.sources = {hac, hbc, alg.coproduct(a, b)};
      rc.target = c;
      rc.eta = [&alg, a, b, c](int x, const std::vector<uint32_t>& cm) {
        uint32_t sa = alg.value(a).stalk_size(x);
        return cm[2] < sa ? alg.hom_apply(a, c, x, cm[0], cm[2])
                          : alg.hom_apply(b, c, x, cm[1], cm[2] - sa);
      };
    } else if (name == "ex-falso@prob") {
      Id a = value_of("A", inst, env);
      rc.sources = {alg.empty()};
      rc.target = a;
      rc.eta = [](int, const std::vector<uint32_t>&) { return 0u; };
    } else if (name == "forall-elim@prob" || name == "exists-intro@prob") {
      int nd = static_cast<int>(m_.domain.size());
      std::vector<Id> family;
      for (int d = 0; d < nd; ++d) family.push_back(value_of("A", inst, env, d));
      int td = env.at(inst.assignment.terms.at("t"));
      std::optional<Id> folded;
      for (Id v : family)
        folded = folded ? (name == "forall-elim@prob" ? alg.product(*folded, v)
                                                      : alg.coproduct(*folded, v))
                        : v;
      if (name == "forall-elim@prob") {
        rc.sources = {*folded};
        rc.target = family[td];
        rc.eta = [&alg, family, td](int x, const std::vector<uint32_t>& c) {
          return fold_product_decode(alg, family, x, c[0], td);
        };
      } else {
        rc.sources = {family[td]};
        rc.target = *folded;
        rc.eta = [&alg, family, td](int x, const std::vector<uint32_t>& c) {
          return fold_coproduct_offset(alg, family, x, td) + c[0];
        };
      }
    } else {
      return true;  // unreachable given the covered-set gate
    }
    return rc.verify();
  }

  const SheafModel& m_;
  const InstanceGen& gen_;
};

std::string describe_model(const SetModel& m, ModelClass cls) {
  std::string out = std::string(to_string(cls)) + " model on " +
                    std::to_string(m.space->size()) + " points [a:";
  for (int d = 0; d < static_cast<int>(m.domain.size()); ++d)
    out += " " + m.space->set_to_string(m.prob_atoms.at("a").at({d}));
  out += "; p:";
  for (int d = 0; d < static_cast<int>(m.domain.size()); ++d)
    out += " " + m.space->set_to_string(m.prop_atoms.at("p").at({d}));
  return out + "]";
}

std::string describe_model(const SheafModel& m) {
  std::string out = "sheaf model on " + std::to_string(m.space->size()) + " points [a:";
  for (int d = 0; d < static_cast<int>(m.domain.size()); ++d) {
    const auto& sh = m.prob_atoms.at("a").at({d});
    out += " (";
    for (int x = 0; x < m.space->size(); ++x) {
      if (x) out += ",";
      out += std::to_string(sh.stalk_size(x));
    }
    out += ")";
  }
  out += "; p:";
  for (int d = 0; d < static_cast<int>(m.domain.size()); ++d)
    out += " " + m.space->set_to_string(m.prop_atoms.at("p").at({d}));
  return out + "]";
}

template <typename Model, typename Eval>
FamilyKey family_key(const Model& m, const InstanceGen& gen, Eval&& eval_value) {
  FamilyKey k;
  k.domain_size = static_cast<int>(m.domain.size());
  for (const Formula& f : gen.problem_pool)
    for (int d = 0; d < k.domain_size; ++d) k.problem_ids.push_back(eval_value(f, d));
  for (const Formula& f : gen.prop_pool)
    for (int d = 0; d < k.domain_size; ++d) k.prop_ids.push_back(eval_value(f, d));
  return k;
}

}  // namespace

SweepCensus soundness_sweep(ModelClass cls, const CorpusBounds& bounds,
                            const InstanceGen& gen) {
  SweepCensus census;
  std::vector<BuiltInstance> instances = build_instances(gen);

  for (FiniteSpace raw : enumerate_spaces(bounds.max_points)) {
    ++census.spaces;
    SpacePtr space = std::make_shared<const FiniteSpace>(std::move(raw));
    std::set<uint64_t> seen;
    for (int dsize = 1; dsize <= bounds.max_domain; ++dsize) {
      ModelVisitor visitor;
      visitor.et = [&](const ETModel& m) {
        FamilyKey fams = family_key(m, gen, [&](const Formula& f, int d) {
          return static_cast<uint64_t>(eval_et(m, f, {{"x", d}}));
        });
        run_instances(instances, fams, seen, census, describe_model(m, cls),
                      [&](const Formula& f) { return valid(m, f); },
                      [&](const Formula& f) { return valid_all_env(m, f); });
        return true;
      };
      visitor.tk = [&](const TKModel& m) {
        FamilyKey fams = family_key(m, gen, [&](const Formula& f, int d) {
          return static_cast<uint64_t>(eval_tk(m, f, {{"x", d}}));
        });
        run_instances(instances, fams, seen, census, describe_model(m, cls),
                      [&](const Formula& f) { return valid(m, f); },
                      [&](const Formula& f) { return valid_all_env(m, f); });
        return true;
      };
      visitor.sheaf = [&](const SheafModel& m) {
        FamilyKey fams = family_key(m, gen, [&](const Formula& f, int d) {
          SheafValue v = eval_sheaf(m, f, {{"x", d}});
          return v.sort == Sort::Problem ? (0x100000000ull | v.sheaf)
                                         : static_cast<uint64_t>(v.set);
        });
        SheafAxiomRealizers realizers(m, gen);
        run_instances(instances, fams, seen, census, describe_model(m),
                      [&](const Formula& f) { return valid_sheaf(m, f); },
                      [&](const Formula& f) { return valid_sheaf_all_env(m, f); },
                      [&](const BuiltInstance& i) { return realizers.check(i); });
        return true;
      };
      census.models +=
          for_each_model(cls, space, dsize, bounds.max_stalk, /*dedupe=*/true, visitor);
    }
  }
  return census;
}

SweepCensus transported_sweep_nabla(const CorpusBounds& bounds, const InstanceGen& gen) {
  SweepCensus census;
  std::vector<BuiltInstance> instances = build_instances(gen);
  for (FiniteSpace raw : enumerate_spaces(bounds.max_points)) {
    ++census.spaces;
    SpacePtr space = std::make_shared<const FiniteSpace>(std::move(raw));
    std::set<uint64_t> seen;
    for (int dsize = 1; dsize <= bounds.max_domain; ++dsize) {
      ModelVisitor visitor;
      visitor.sheaf = [&](const SheafModel& sm) {
        ETModel m = nabla_model(sm);
        FamilyKey fams = family_key(m, gen, [&](const Formula& f, int d) {
          return static_cast<uint64_t>(eval_et(m, f, {{"x", d}}));
        });
        run_instances(instances, fams, seen, census,
                      "transported " + describe_model(m, ModelClass::ET),
                      [&](const Formula& f) { return valid(m, f); },
                      [&](const Formula& f) { return valid_all_env(m, f); });
        return true;
      };
      census.models += for_each_model(ModelClass::Sheaf, space, dsize, bounds.max_stalk,
                                      /*dedupe=*/true, visitor);
    }
  }
  return census;
}

SweepCensus transported_sweep_diamond(const CorpusBounds& bounds, const InstanceGen& gen) {
  SweepCensus census;
  std::vector<BuiltInstance> instances = build_instances(gen);
  for (FiniteSpace raw : enumerate_spaces(bounds.max_points)) {
    ++census.spaces;
    SpacePtr space = std::make_shared<const FiniteSpace>(std::move(raw));
    std::set<uint64_t> seen;
    for (int dsize = 1; dsize <= bounds.max_domain; ++dsize) {
      ModelVisitor visitor;
      visitor.et = [&](const ETModel& em) {
        TKModel m = diamond_model(em);
        FamilyKey fams = family_key(m, gen, [&](const Formula& f, int d) {
          return static_cast<uint64_t>(eval_tk(m, f, {{"x", d}}));
        });
        run_instances(instances, fams, seen, census,
                      "transported " + describe_model(m, ModelClass::TK),
                      [&](const Formula& f) { return valid(m, f); },
                      [&](const Formula& f) { return valid_all_env(m, f); });
        return true;
      };
      census.models += for_each_model(ModelClass::ET, space, dsize, bounds.max_stalk,
                                      /*dedupe=*/true, visitor);
    }
  }
  return census;
}

}  // namespace qhc
