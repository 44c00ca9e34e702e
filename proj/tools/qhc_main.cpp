// Command-line workbench for the joint logic of problems and propositions:
// parsing, proof checking, model evaluation, countermodel search, the
// syntactic translations and the planar-geometry theory.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qhc/geometry.hpp"
#include "qhc/json_io.hpp"
#include "qhc/principles.hpp"

using namespace qhc;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitRejected = 2;
constexpr int kExitInvalidInput = 3;
constexpr int kExitExhausted = 4;

Signature default_signature(const std::string& sig_path) {
  if (!sig_path.empty()) return signature_from_json(read_file(sig_path));
  return geometry_signature();
}

int cmd_parse(const std::string& text, const std::string& sig_path, bool as_json) {
  Signature sig = default_signature(sig_path);
  Formula f = parse(text, sig);
  if (as_json) {
    json out{{"formula", print(f)}, {"sort", to_string(f.sort())}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << print(f) << " : " << to_string(f.sort()) << "\n";
  }
  return kExitOk;
}

int cmd_check(const std::string& script_path, const std::string& theory_arg, bool as_json) {
  Theory theory;
  if (theory_arg == "geometry") {
    theory = load_theory().theory;
  } else {
    theory = load_theory_file(theory_arg);
  }
  ProofScript script = load_script_file(script_path, theory.signature);
  Verdict v = check_proof(script, theory);
  if (as_json) {
    json out{{"accepted", v.accepted}};
    if (!v.accepted) {
      out["line"] = v.line_id;
      out["reason"] = v.reason;
    }
    std::cout << out.dump(2) << "\n";
  } else if (v.accepted) {
    std::cout << "accepted (" << script.lines.size() << " lines)\n";
  } else {
    std::cout << "rejected at line " << v.line_id << ": " << v.reason << "\n";
  }
  return v.accepted ? kExitOk : kExitRejected;
}

int cmd_eval(const std::string& model_path, const std::string& formula_text,
             const std::string& cls_flag, bool as_json) {
  AnyModel any = load_model_file(model_path);
  if (!cls_flag.empty()) {
    std::string actual = std::holds_alternative<ETModel>(any)  ? "et"
                         : std::holds_alternative<TKModel>(any) ? "tk"
                                                                : "sheaf";
    if (actual != cls_flag)
      throw IOError("model file has class " + actual + ", not " + cls_flag);
  }
  bool ok = false;
  json value;
  std::visit(
      [&](const auto& m) {
        Formula f = parse(formula_text, m.signature);
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, SheafModel>) {
          ok = valid_sheaf(m, f);
          SheafValue v = eval_sheaf(m, f);
          if (v.sort == Sort::Problem) {
            value = json::parse(sheaf_to_json(m.algebra().value(v.sheaf)));
          } else {
            json pts = json::array();
            for (int x = 0; x < m.space->size(); ++x)
              if ((v.set >> x) & 1u) pts.push_back(m.space->points()[x]);
            value = pts;
          }
        } else {
          PointSet v;
          if constexpr (std::is_same_v<M, ETModel>) v = eval_et(m, f);
          else v = eval_tk(m, f);
          ok = v == m.space->all();
          json pts = json::array();
          for (int x = 0; x < m.space->size(); ++x)
            if ((v >> x) & 1u) pts.push_back(m.space->points()[x]);
          value = pts;
        }
      },
      any);
  if (as_json) {
    std::cout << json{{"valid", ok}, {"value", value}}.dump(2) << "\n";
  } else {
    std::cout << (ok ? "valid" : "invalid") << "\n" << value.dump(2) << "\n";
  }
  return ok ? kExitOk : kExitRejected;
}

int cmd_translate(const std::string& target, const std::string& formula_text,
                  const std::string& sig_path) {
  Signature sig = default_signature(sig_path);
  Formula f = parse(formula_text, sig);
  if (target == "qc") {
    std::cout << print(erase_to_qc(f)) << "\n";
  } else if (target == "qh") {
    std::cout << print(retract_to_qh(f)) << "\n";
  } else if (target == "s4") {
    std::cout << print(box_translate(f)) << "\n";
  } else {
    throw IOError("unknown translation target: " + target);
  }
  return kExitOk;
}

int cmd_countermodel(const std::string& principle, const std::string& cls_name,
                     SearchBounds bounds, bool as_json) {
  const Principle* pr = find_principle(principle);
  if (!pr) throw IOError("unknown principle: " + principle);
  ModelClass cls = model_class_from_string(cls_name);
  SearchOutcome outcome = find_countermodel(*pr, cls, bounds);
  if (as_json) {
    std::cout << search_outcome_to_json(outcome) << "\n";
  } else if (outcome.found) {
    std::cout << "countermodel found\n";
    for (const auto& p : outcome.counterinstance.premises)
      std::cout << "  premise:   " << p << "\n";
    std::cout << "  statement: " << outcome.counterinstance.statement << "\n";
    if (outcome.et) std::cout << model_to_json(*outcome.et) << "\n";
    if (outcome.tk) std::cout << model_to_json(*outcome.tk) << "\n";
    if (outcome.sheaf) std::cout << model_to_json(*outcome.sheaf) << "\n";
  } else {
    std::cout << "exhausted after " << outcome.census.models << " candidate models";
    if (!outcome.exhaustion_note.empty()) std::cout << "\n" << outcome.exhaustion_note;
    std::cout << "\n";
  }
  return outcome.found ? kExitOk : kExitExhausted;
}

int cmd_principles_status(const CorpusBounds& corpus, const SearchBounds& search,
                          bool as_json) {
  StatusReport report = principles_status(corpus, search);
  if (as_json) {
    json rows = json::array();
    for (const auto& r : report.rows)
      rows.push_back({{"principle", r.entry.principle},
                      {"class", to_string(r.entry.model_class)},
                      {"expected", r.entry.expected == Expectation::HoldsInAll
                                       ? "holds-in-all"
                                       : "fails-somewhere"},
                      {"refutability",
                       r.entry.expected == Expectation::HoldsInAll ? ""
                       : r.entry.refutability == Refutability::FiniteWitness
                           ? "finite-witness"
                           : "requires-infinite"},
                      {"computed", r.computed},
                      {"matches", r.matches}});
    std::cout << json{{"rows", rows}, {"ok", report.ok()}}.dump(2) << "\n";
  } else {
    for (const auto& r : report.rows) {
      std::cout << (r.matches ? "  ok   " : " FAIL  ") << r.entry.principle << " @ "
                << to_string(r.entry.model_class) << ": expected "
                << (r.entry.expected == Expectation::HoldsInAll ? "holds-in-all"
                                                                : "fails-somewhere");
      if (r.entry.expected == Expectation::FailsSomewhere)
        std::cout << " ("
                  << (r.entry.refutability == Refutability::FiniteWitness
                          ? "finite witness"
                          : "requires an infinite space")
                  << ")";
      std::cout << "; " << r.computed << "\n";
    }
    std::cout << (report.ok() ? "status matrix reproduced\n" : "MISMATCHES FOUND\n");
  }
  return report.ok() ? kExitOk : kExitRejected;
}

Signature with_notions_signature();

int cmd_rewrite(const std::string& pass, const std::string& formula_text,
                const std::string& entry_id, bool certifiable, bool no_stability,
                bool as_json) {
  GeometryTheory t = load_theory();
  Formula input;
  if (!entry_id.empty()) {
    const TheoryEntry* e = t.entry(entry_id);
    if (!e) throw IOError("no theory entry " + entry_id);
    input = e->formula;
  } else {
    Signature sig = with_notions_signature();
    input = universal_closure(expand_notions(parse(formula_text, sig), t.notions));
  }

  if (pass == "push-wn") {
    PushResult r = push_wn(input);
    if (as_json) {
      json residue = json::array();
      for (const auto& p : r.residue) residue.push_back(print(p));
      std::cout << json{{"proposition", print(r.proposition)}, {"residue", residue}}.dump(2)
                << "\n";
    } else {
      std::cout << print(r.proposition) << "\n";
      for (const auto& p : r.residue)
        std::cout << "residue (requires certifiability): " << print(p) << "\n";
    }
    return kExitOk;
  }
  if (pass == "shadow") {
    Formula out = classical_shadow(input, certifiable);
    std::cout << print(out) << "\n";
    return kExitOk;
  }
  if (pass == "pure-simple") {
    Formula out = pure_simple_normal_form(input, !no_stability);
    std::cout << print(out) << "\n";
    return kExitOk;
  }
  if (pass == "lift") {
    if (entry_id.empty()) throw IOError("lift works on theory entries; pass --entry");
    ProofScript script = derive_intuitionistic_lift(t.theory, entry_id);
    std::cout << script_to_json_lines(script);
    return kExitOk;
  }
  throw IOError("unknown pass: " + pass);
}

Signature with_notions_signature() {
  GeometryTheory t = load_theory();
  Signature sig = geometry_signature();
  for (const auto& n : t.notions)
    sig.add({n.name, Sort::Proposition, static_cast<int>(n.params.size())});
  return sig;
}

int cmd_theory_verify(bool with_extension, bool as_json) {
  GeometryTheory t = load_theory(with_extension);
  auto scripts = bundled_derivations(t);
  json rows = json::array();
  bool all_ok = true;
  for (const auto& [name, script] : scripts) {
    Verdict v = check_proof(script, t.theory);
    all_ok = all_ok && v.accepted;
    rows.push_back({{"derivation", name},
                    {"lines", script.lines.size()},
                    {"accepted", v.accepted}});
    if (!as_json)
      std::cout << (v.accepted ? "  ok   " : " FAIL  ") << name << " ("
                << script.lines.size() << " lines)\n";
  }
  // Cross-checks of the rewriting pipeline.
  bool pipeline_ok = true;
  for (const char* id : {"6", "7", "8", "11", "12"}) {
    const TheoryEntry* e = t.entry(id);
    bool classy = classify_problem(e->formula) == ProblemClass::Euclidean;
    bool shadow_ok = classical_shadow(e->formula, true) == erase_to_qc(e->formula);
    bool nf_ok = classify_problem(pure_simple_normal_form(e->formula, true)) ==
                 ProblemClass::PureSimple;
    pipeline_ok = pipeline_ok && classy && shadow_ok && nf_ok;
    if (!as_json)
      std::cout << (classy && shadow_ok && nf_ok ? "  ok   " : " FAIL  ")
                << "postulate " << id << ": euclidean, shadow = erasure, normal form\n";
  }
  if (as_json)
    std::cout << json{{"derivations", rows}, {"pipeline_ok", pipeline_ok}}.dump(2) << "\n";
  else
    std::cout << (all_ok && pipeline_ok ? "theory verified\n" : "verification FAILED\n");
  return all_ok && pipeline_ok ? kExitOk : kExitRejected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for the joint logic of problems and propositions"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  int default_points = 4;
  if (const char* env = std::getenv("QHC_MAX_POINTS")) default_points = std::atoi(env);

  // parse
  std::string parse_text, parse_sig;
  auto* sub_parse = app.add_subcommand("parse", "parse a formula and report its sort");
  sub_parse->add_option("formula", parse_text)->required();
  sub_parse->add_option("--sig", parse_sig, "signature JSON file");

  // check
  std::string check_script, check_theory;
  auto* sub_check = app.add_subcommand("check", "check a proof script against a theory");
  sub_check->add_option("script", check_script)->required();
  sub_check->add_option("--theory", check_theory, "theory JSON file or 'geometry'")
      ->required();

  // eval
  std::string eval_model, eval_formula, eval_class;
  auto* sub_eval = app.add_subcommand("eval", "evaluate a formula in a model");
  sub_eval->add_option("--model", eval_model)->required();
  sub_eval->add_option("--formula", eval_formula)->required();
  sub_eval->add_option("--class", eval_class, "et|tk|sheaf (validated against the file)");

  // countermodel
  std::string cm_principle, cm_class;
  SearchBounds cm_bounds;
  cm_bounds.max_points = default_points;
  auto* sub_cm = app.add_subcommand("countermodel", "search for a principle countermodel");
  sub_cm->add_option("--principle", cm_principle)->required();
  sub_cm->add_option("--class", cm_class)->required();
  sub_cm->add_option("--max-points", cm_bounds.max_points);
  sub_cm->add_option("--max-domain", cm_bounds.max_domain);
  sub_cm->add_option("--max-stalk", cm_bounds.max_stalk);
  sub_cm->add_option("--jobs", cm_bounds.jobs);

  // translate
  std::string tr_target, tr_formula, tr_sig;
  auto* sub_tr = app.add_subcommand("translate", "apply a syntactic translation");
  sub_tr->add_option("--to", tr_target, "qc|qh|s4")->required();
  sub_tr->add_option("formula", tr_formula)->required();
  sub_tr->add_option("--sig", tr_sig, "signature JSON file");

  // rewrite
  std::string rw_pass, rw_formula, rw_entry;
  bool rw_cert = false, rw_nostab = false;
  auto* sub_rw = app.add_subcommand("rewrite", "run a rewriting pass of the geometry theory");
  sub_rw->add_option("--pass", rw_pass, "push-wn|shadow|lift|pure-simple")->required();
  sub_rw->add_option("formula", rw_formula);
  sub_rw->add_option("--entry", rw_entry, "use a theory entry as input");
  sub_rw->add_flag("--certifiable", rw_cert, "discharge premise certificates");
  sub_rw->add_flag("--no-stability", rw_nostab, "forbid the stability rewrite");

  // principles
  auto* sub_pr = app.add_subcommand("principles", "principle catalog commands");
  CorpusBounds pr_corpus;
  SearchBounds pr_search;
  pr_search.max_points = default_points;
  auto* sub_status = sub_pr->add_subcommand("status", "expected-versus-computed matrix");
  sub_status->add_option("--max-points", pr_search.max_points);
  sub_status->add_option("--max-domain", pr_search.max_domain);
  sub_status->add_option("--max-stalk", pr_search.max_stalk);
  sub_status->add_option("--jobs", pr_search.jobs);
  sub_status->add_option("--corpus-points", pr_corpus.max_points);

  // theory
  auto* sub_th = app.add_subcommand("theory", "bundled theory commands");
  auto* sub_verify = sub_th->add_subcommand("verify", "validate a bundled theory");
  std::string verify_name;
  bool verify_ext = false;
  sub_verify->add_option("name", verify_name)->required();
  sub_verify->add_flag("--extension", verify_ext, "include the triangle-copying axiom");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sub_parse) return cmd_parse(parse_text, parse_sig, as_json);
    if (*sub_check) return cmd_check(check_script, check_theory, as_json);
    if (*sub_eval) return cmd_eval(eval_model, eval_formula, eval_class, as_json);
    if (*sub_cm) return cmd_countermodel(cm_principle, cm_class, cm_bounds, as_json);
    if (*sub_tr) return cmd_translate(tr_target, tr_formula, tr_sig);
    if (*sub_rw)
      return cmd_rewrite(rw_pass, rw_formula, rw_entry, rw_cert, rw_nostab, as_json);
    if (*sub_status) return cmd_principles_status(pr_corpus, pr_search, as_json);
    if (*sub_verify) {
      if (verify_name != "geometry") throw IOError("unknown theory: " + verify_name);
      return cmd_theory_verify(verify_ext, as_json);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const TranslationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const FragmentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const IOError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const SheafError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
