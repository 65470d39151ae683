#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "posyn/constraint.hpp"
#include "posyn/expr.hpp"
#include "posyn/serialization.hpp"
#include "posyn/session.hpp"

using namespace posyn;

namespace {

std::string readData(const std::string& name) {
  std::ifstream in(std::string(POSYN_DATA_DIR) + "/" + name, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Project& aircraft() {
  static const Project p = loadProject(readData("aircraft.posyn.json"));
  return p;
}

constexpr const char* kSeatsX = "2 * this.model.getChildren('seats').getValue()";

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(expr::parse(kSeatsX));
}
BENCHMARK(BM_Parse);

void BM_Evaluate(benchmark::State& state) {
  const Project& p = aircraft();
  const expr::ExprPtr ast = expr::parse(kSeatsX);
  NodeLayout self = layoutOf(p, "o2");
  EvalContext ctx;
  ctx.model = &p.model;
  ctx.element = "o2";
  ctx.self = &self;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(*ast, ctx));
}
BENCHMARK(BM_Evaluate);

void BM_Enforce(benchmark::State& state) {
  const Project& p = aircraft();
  const Constraint c = makeConstraint(LayoutProperty::X, ConstraintOp::Eq, kSeatsX);
  NodeLayout start = layoutOf(p, "o2");
  start.x = 310;
  for (auto _ : state) {
    NodeLayout l = start;
    EvalContext ctx;
    ctx.model = &p.model;
    ctx.element = "o2";
    ctx.self = &l;
    benchmark::DoNotOptimize(enforce(c, l, ctx));
  }
}
BENCHMARK(BM_Enforce);

void BM_ReplaySnap(benchmark::State& state) {
  const auto events = parseScript(readData("snap.jsonl"));
  for (auto _ : state) benchmark::DoNotOptimize(replay(aircraft(), events));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(events.size()));
}
BENCHMARK(BM_ReplaySnap);

void BM_SaveLoad(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(loadProject(saveProject(aircraft())));
}
BENCHMARK(BM_SaveLoad);

}  // namespace
BENCHMARK_MAIN();
