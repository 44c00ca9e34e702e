#include "qhc/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qhc {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// ---------------------------------------------------------------------------
// Signatures

Signature signature_from_json(const std::string& text) {
  json doc = json::parse(text);
  Signature sig;
  for (const auto& a : doc.at("atoms")) {
    std::string sort = a.at("sort").get<std::string>();
    if (sort != "prop" && sort != "proposition" && sort != "prob" && sort != "problem")
      throw IOError("unknown sort: " + sort);
    sig.add({a.at("name").get<std::string>(),
             (sort == "prob" || sort == "problem") ? Sort::Problem : Sort::Proposition,
             a.at("arity").get<int>()});
  }
  return sig;
}

std::string signature_to_json(const Signature& sig) {
  json atoms = json::array();
  for (const auto& a : sig.atoms())
    atoms.push_back({{"name", a.name},
                     {"sort", a.sort == Sort::Problem ? "prob" : "prop"},
                     {"arity", a.arity}});
  return json{{"atoms", atoms}}.dump(2);
}

// ---------------------------------------------------------------------------
// Spaces

FiniteSpace space_from_json_text(const std::string& text) {
  json doc = json::parse(text);
  std::vector<std::string> points;
  for (const auto& p : doc.at("points")) points.push_back(p.get<std::string>());
  std::vector<std::pair<std::string, std::string>> le;
  if (doc.contains("le"))
    for (const auto& pair : doc.at("le"))
      le.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
  return FiniteSpace::from_relation_named(std::move(points), le);
}

namespace {

json space_json(const FiniteSpace& space) {
  json points = json::array();
  for (const auto& p : space.points()) points.push_back(p);
  json le = json::array();
  for (auto [x, y] : space.strict_pairs())
    le.push_back({space.points()[x], space.points()[y]});
  return json{{"points", points}, {"le", le}};
}

std::string tuple_key(const std::vector<int>& tuple, const std::vector<std::string>& domain) {
  std::string out;
  for (size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ",";
    out += domain[tuple[i]];
  }
  return out;
}

std::vector<int> tuple_from_key(const std::string& key,
                                const std::vector<std::string>& domain) {
  std::vector<int> out;
  if (key.empty()) return out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto it = std::find(domain.begin(), domain.end(), part);
    if (it == domain.end()) throw IOError("tuple mentions unknown domain element " + part);
    out.push_back(static_cast<int>(it - domain.begin()));
  }
  return out;
}

json pointset_json(const FiniteSpace& space, PointSet s) {
  json out = json::array();
  for (int x = 0; x < space.size(); ++x)
    if ((s >> x) & 1u) out.push_back(space.points()[x]);
  return out;
}

PointSet pointset_from_json(const FiniteSpace& space, const json& arr) {
  PointSet s = 0;
  for (const auto& p : arr) s |= 1u << space.point_index(p.get<std::string>());
  return s;
}

json sheaf_json(const StalkSheaf& sheaf) {
  const FiniteSpace& X = sheaf.space();
  json stalks = json::object();
  for (int x = 0; x < X.size(); ++x) {
    json elems = json::array();
    for (uint32_t e = 0; e < sheaf.stalk_size(x); ++e)
      elems.push_back("e" + std::to_string(e));
    stalks[X.points()[x]] = elems;
  }
  json maps = json::object();
  for (auto [x, y] : X.strict_pairs()) {
    if (sheaf.stalk_size(x) == 0) continue;
    json table = json::object();
    for (uint32_t e = 0; e < sheaf.stalk_size(x); ++e)
      table["e" + std::to_string(e)] = "e" + std::to_string(sheaf.restrict_elem(x, y, e));
    maps[X.points()[x] + "<=" + X.points()[y]] = table;
  }
  return json{{"stalks", stalks}, {"maps", maps}};
}

StalkSheaf sheaf_from_json(const SpacePtr& space, const json& doc) {
  const FiniteSpace& X = *space;
  std::vector<uint32_t> sizes(X.size(), 0);
  std::vector<std::map<std::string, uint32_t>> elem_index(X.size());
  for (const auto& [point, elems] : doc.at("stalks").items()) {
    int x = X.point_index(point);
    for (const auto& e : elems) {
      std::string name = e.get<std::string>();
      if (elem_index[x].count(name))
        throw IOError("duplicate stalk element " + name + " at " + point);
      elem_index[x][name] = sizes[x]++;
    }
  }
  std::map<std::pair<int, int>, std::vector<uint32_t>> maps;
  if (doc.contains("maps"))
    for (const auto& [pair_name, table] : doc.at("maps").items()) {
      auto sep = pair_name.find("<=");
      if (sep == std::string::npos) throw IOError("bad map key " + pair_name);
      int x = X.point_index(pair_name.substr(0, sep));
      int y = X.point_index(pair_name.substr(sep + 2));
      if (!X.le(x, y) || x == y) throw IOError("map between unrelated points " + pair_name);
      std::vector<uint32_t> t(sizes[x]);
      std::vector<bool> seen(sizes[x], false);
      for (const auto& [from, to] : table.items()) {
        auto fi = elem_index[x].find(from);
        auto ti = elem_index[y].find(to.get<std::string>());
        if (fi == elem_index[x].end() || ti == elem_index[y].end())
          throw IOError("map " + pair_name + " mentions unknown elements");
        t[fi->second] = ti->second;
        seen[fi->second] = true;
      }
      for (bool b : seen)
        if (!b) throw IOError("map " + pair_name + " is not total");
      maps[{x, y}] = std::move(t);
    }
  StalkSheaf s(space, std::move(sizes), std::move(maps));
  s.validate();
  return s;
}

}  // namespace

std::string space_to_json(const FiniteSpace& space) { return space_json(space).dump(2); }

std::string sheaf_to_json(const StalkSheaf& sheaf) { return sheaf_json(sheaf).dump(2); }

// ---------------------------------------------------------------------------
// Models

namespace {

template <typename Model>
void fill_common(Model& m, const json& doc) {
  m.space = std::make_shared<const FiniteSpace>(space_from_json_text(doc.at("space").dump()));
  for (const auto& d : doc.at("domain")) m.domain.push_back(d.get<std::string>());
  if (doc.contains("signature"))
    m.signature = signature_from_json(doc.at("signature").dump());
}

json common_json(const std::string& cls, const FiniteSpace& space,
                 const std::vector<std::string>& domain, const Signature& sig) {
  json domain_json = json::array();
  for (const auto& d : domain) domain_json.push_back(d);
  return json{{"class", cls},
              {"space", space_json(space)},
              {"domain", domain_json},
              {"signature", json::parse(signature_to_json(sig))}};
}

template <typename Model>
json set_tables_json(const Model& m) {
  json prob = json::object(), prop = json::object();
  for (const auto& [name, table] : m.prob_atoms) {
    json t = json::object();
    for (const auto& [tuple, value] : table)
      t[tuple_key(tuple, m.domain)] = pointset_json(*m.space, value);
    prob[name] = t;
  }
  for (const auto& [name, table] : m.prop_atoms) {
    json t = json::object();
    for (const auto& [tuple, value] : table)
      t[tuple_key(tuple, m.domain)] = pointset_json(*m.space, value);
    prop[name] = t;
  }
  return json{{"prob_atoms", prob}, {"prop_atoms", prop}};
}

}  // namespace

std::string model_to_json(const ETModel& m) {
  json doc = common_json("et", *m.space, m.domain, m.signature);
  doc.update(set_tables_json(m));
  return doc.dump(2);
}

std::string model_to_json(const TKModel& m) {
  json doc = common_json("tk", *m.space, m.domain, m.signature);
  doc.update(set_tables_json(m));
  return doc.dump(2);
}

std::string model_to_json(const SheafModel& m) {
  json doc = common_json("sheaf", *m.space, m.domain, m.signature);
  json prob = json::object(), prop = json::object();
  for (const auto& [name, table] : m.prob_atoms) {
    json t = json::object();
    for (const auto& [tuple, sheaf] : table) t[tuple_key(tuple, m.domain)] = sheaf_json(sheaf);
    prob[name] = t;
  }
  for (const auto& [name, table] : m.prop_atoms) {
    json t = json::object();
    for (const auto& [tuple, value] : table)
      t[tuple_key(tuple, m.domain)] = pointset_json(*m.space, value);
    prop[name] = t;
  }
  doc["prob_atoms"] = prob;
  doc["prop_atoms"] = prop;
  return doc.dump(2);
}

AnyModel model_from_json_text(const std::string& text) {
  json doc = json::parse(text);
  std::string cls = doc.value("class", "et");

  auto load_set_model = [&](SetModel& m) {
    fill_common(m, doc);
    if (doc.contains("prob_atoms"))
      for (const auto& [name, table] : doc.at("prob_atoms").items())
        for (const auto& [key, value] : table.items())
          m.prob_atoms[name][tuple_from_key(key, m.domain)] =
              pointset_from_json(*m.space, value);
    if (doc.contains("prop_atoms"))
      for (const auto& [name, table] : doc.at("prop_atoms").items())
        for (const auto& [key, value] : table.items())
          m.prop_atoms[name][tuple_from_key(key, m.domain)] =
              pointset_from_json(*m.space, value);
  };

  if (cls == "et") {
    ETModel m;
    load_set_model(m);
    m.validate();
    return m;
  }
  if (cls == "tk") {
    TKModel m;
    load_set_model(m);
    m.validate();
    return m;
  }
  if (cls == "sheaf") {
    SheafModel m;
    fill_common(m, doc);
    if (doc.contains("prob_atoms"))
      for (const auto& [name, table] : doc.at("prob_atoms").items())
        for (const auto& [key, value] : table.items()) {
          try {
            m.prob_atoms[name][tuple_from_key(key, m.domain)] =
                sheaf_from_json(m.space, value);
          } catch (const SheafError& e) {
            throw IOError("problem atom " + name + "(" + key + "): " + e.what());
          }
        }
    if (doc.contains("prop_atoms"))
      for (const auto& [name, table] : doc.at("prop_atoms").items())
        for (const auto& [key, value] : table.items())
          m.prop_atoms[name][tuple_from_key(key, m.domain)] =
              pointset_from_json(*m.space, value);
    m.validate();
    return m;
  }
  throw IOError("unknown model class: " + cls);
}

AnyModel load_model_file(const std::string& path) {
  return model_from_json_text(read_file(path));
}

// ---------------------------------------------------------------------------
// Theories

Theory theory_from_json_text(const std::string& text) {
  json doc = json::parse(text);
  Theory t;
  t.name = doc.value("name", "theory");
  t.signature = signature_from_json(doc.at("signature").dump());
  auto read = [&](const char* key, std::vector<std::pair<std::string, Formula>>& out) {
    if (!doc.contains(key)) return;
    for (const auto& [name, f] : doc.at(key).items())
      out.emplace_back(name, parse(f.get<std::string>(), t.signature));
  };
  read("axioms", t.axioms);
  read("postulates", t.postulates);
  read("mixed", t.mixed);
  t.validate();
  return t;
}

Theory load_theory_file(const std::string& path) {
  return theory_from_json_text(read_file(path));
}

// ---------------------------------------------------------------------------
// Proof scripts

namespace {

FormulaFamily family_from_json(const json& j, const Signature& sig) {
  if (j.is_string()) return {{}, parse(j.get<std::string>(), sig)};
  FormulaFamily fam;
  for (const auto& p : j.at("params")) fam.params.push_back(p.get<std::string>());
  fam.body = parse(j.at("formula").get<std::string>(), sig);
  return fam;
}

Justification justification_from_json(const json& by, const Signature& sig) {
  if (by.contains("schema")) {
    ByScheme s;
    s.schema = by.at("schema").get<std::string>();
    if (by.contains("inst"))
      for (const auto& [name, j] : by.at("inst").items())
        s.assignment.formulas[name] = family_from_json(j, sig);
    if (by.contains("terms"))
      for (const auto& [name, v] : by.at("terms").items())
        s.assignment.terms[name] = v.get<std::string>();
    return s;
  }
  if (by.contains("axiom")) return ByTheoryAxiom{by.at("axiom").get<std::string>()};
  if (by.contains("hyp")) return ByHypothesis{by.at("hyp").get<size_t>()};
  if (by.contains("mp")) {
    const auto& pair = by.at("mp");
    return ByModusPonens{pair.at(0).get<int64_t>(), pair.at(1).get<int64_t>()};
  }
  if (by.contains("gen")) {
    const auto& g = by.at("gen");
    return ByGeneralization{g.at("from").get<int64_t>(), g.at("var").get<std::string>()};
  }
  if (by.contains("bang")) return ByNecessitation{by.at("bang").get<int64_t>(), true};
  if (by.contains("quest")) return ByNecessitation{by.at("quest").get<int64_t>(), false};
  throw IOError("unrecognized justification: " + by.dump());
}

json justification_to_json(const Justification& by) {
  if (const auto* s = std::get_if<ByScheme>(&by)) {
    json inst = json::object();
    for (const auto& [name, fam] : s->assignment.formulas) {
      if (fam.params.empty()) {
        inst[name] = print(fam.body);
      } else {
        json params = json::array();
        for (const auto& p : fam.params) params.push_back(p);
        inst[name] = json{{"params", params}, {"formula", print(fam.body)}};
      }
    }
    json out{{"schema", s->schema}, {"inst", inst}};
    if (!s->assignment.terms.empty()) {
      json terms = json::object();
      for (const auto& [name, v] : s->assignment.terms) terms[name] = v;
      out["terms"] = terms;
    }
    return out;
  }
  if (const auto* a = std::get_if<ByTheoryAxiom>(&by)) return json{{"axiom", a->name}};
  if (const auto* h = std::get_if<ByHypothesis>(&by)) return json{{"hyp", h->index}};
  if (const auto* m = std::get_if<ByModusPonens>(&by))
    return json{{"mp", {m->premise, m->implication}}};
  if (const auto* g = std::get_if<ByGeneralization>(&by))
    return json{{"gen", {{"from", g->from}, {"var", g->var}}}};
  const auto& n = std::get<ByNecessitation>(by);
  return n.bang ? json{{"bang", n.from}} : json{{"quest", n.from}};
}

}  // namespace

ProofScript script_from_json_lines(const std::string& text, const Signature& sig) {
  ProofScript script;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    json doc = json::parse(line);
    if (doc.contains("theory")) {
      script.theory = doc.at("theory").get<std::string>();
      continue;
    }
    if (doc.contains("hypotheses")) {
      for (const auto& h : doc.at("hypotheses"))
        script.hypotheses.push_back(parse(h.get<std::string>(), sig));
      continue;
    }
    ProofLine pl;
    pl.id = doc.at("id").get<int64_t>();
    pl.formula = parse(doc.at("formula").get<std::string>(), sig);
    pl.by = justification_from_json(doc.at("by"), sig);
    script.lines.push_back(std::move(pl));
  }
  return script;
}

ProofScript load_script_file(const std::string& path, const Signature& sig) {
  return script_from_json_lines(read_file(path), sig);
}

std::string script_to_json_lines(const ProofScript& script) {
  std::string out;
  if (!script.theory.empty()) out += json{{"theory", script.theory}}.dump() + "\n";
  if (!script.hypotheses.empty()) {
    json hyps = json::array();
    for (const auto& h : script.hypotheses) hyps.push_back(print(h));
    out += json{{"hypotheses", hyps}}.dump() + "\n";
  }
  for (const auto& l : script.lines) {
    out += json{{"id", l.id}, {"formula", print(l.formula)}, {"by", justification_to_json(l.by)}}
               .dump() +
           "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Search outcomes

std::string search_outcome_to_json(const SearchOutcome& outcome) {
  json doc;
  doc["status"] = outcome.found ? "found" : "exhausted";
  doc["census"] = {{"spaces", outcome.census.spaces},
                   {"models", outcome.census.models},
                   {"checks", outcome.census.checks}};
  if (outcome.found) {
    json inst;
    inst["premises"] = outcome.counterinstance.premises;
    inst["statement"] = outcome.counterinstance.statement;
    doc["instance"] = inst;
    if (outcome.et) doc["model"] = json::parse(model_to_json(*outcome.et));
    if (outcome.tk) doc["model"] = json::parse(model_to_json(*outcome.tk));
    if (outcome.sheaf) doc["model"] = json::parse(model_to_json(*outcome.sheaf));
  } else if (!outcome.exhaustion_note.empty()) {
    doc["note"] = outcome.exhaustion_note;
  }
  return doc.dump(2);
}

}  // namespace qhc
