#include <benchmark/benchmark.h>

#include "qhc/geometry.hpp"
#include "qhc/principles.hpp"

using namespace qhc;

namespace {

SpacePtr shared_space(FiniteSpace sp) {
  return std::make_shared<const FiniteSpace>(std::move(sp));
}

void BM_EnumerateSpaces(benchmark::State& state) {
  for (auto _ : state) {
    auto spaces = enumerate_spaces(static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(spaces.size());
  }
}
BENCHMARK(BM_EnumerateSpaces)->Arg(3)->Arg(4);

void BM_EnumerateSheaves(benchmark::State& state) {
  SpacePtr b4 = shared_space(spaces::b4());
  for (auto _ : state) {
    auto sheaves = enumerate_sheaves(b4, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(sheaves.size());
  }
}
BENCHMARK(BM_EnumerateSheaves)->Arg(1)->Arg(2);

void BM_HomOfBranching(benchmark::State& state) {
  SpacePtr i3 = shared_space(spaces::i3());
  StalkSheaf branch = coproduct(characteristic(i3, i3->up(i3->point_index("l"))),
                                characteristic(i3, i3->up(i3->point_index("r"))));
  for (auto _ : state) {
    StalkSheaf h = hom(branch, branch);
    benchmark::DoNotOptimize(h.total_elements());
  }
}
BENCHMARK(BM_HomOfBranching);

void BM_SheafEval(benchmark::State& state) {
  SpacePtr i3 = shared_space(spaces::i3());
  Signature sig = corpus_signature();
  SheafModel m;
  m.space = i3;
  m.domain = {"d0", "d1"};
  m.signature = sig;
  auto sheaves = enumerate_sheaves(i3, 2);
  m.prob_atoms["a"][{0}] = sheaves[sheaves.size() / 2];
  m.prob_atoms["a"][{1}] = sheaves.back();
  m.prop_atoms["p"][{0}] = 1;
  m.prop_atoms["p"][{1}] = i3->all();
  Formula f = parse("forall x. (?(a(x) -> a(x)) <-> ?!(?a(x) -> ?a(x)))", sig);
  for (auto _ : state) {
    benchmark::DoNotOptimize(valid_sheaf(m, f));
  }
}
BENCHMARK(BM_SheafEval);

void BM_CountermodelTopRule(benchmark::State& state) {
  const Principle* pr = find_principle("top-rule");
  SearchBounds bounds;
  bounds.max_points = 3;
  for (auto _ : state) {
    SearchOutcome o = find_countermodel(*pr, ModelClass::Sheaf, bounds);
    benchmark::DoNotOptimize(o.found);
  }
}
BENCHMARK(BM_CountermodelTopRule);

void BM_ProofCheckLift(benchmark::State& state) {
  GeometryTheory t = load_theory();
  ProofScript script = derive_intuitionistic_lift(t.theory, "5");
  for (auto _ : state) {
    Verdict v = check_proof(script, t.theory);
    benchmark::DoNotOptimize(v.accepted);
  }
}
BENCHMARK(BM_ProofCheckLift);

}  // namespace

BENCHMARK_MAIN();
