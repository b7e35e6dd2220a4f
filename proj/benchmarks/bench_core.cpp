#include <random>

#include <benchmark/benchmark.h>

#include "safeseek/harness.hpp"
#include "safeseek/safeqp.hpp"
#include "safeseek/scenario.hpp"

using namespace safeseek;

namespace {

void BM_ClosestObstacle(benchmark::State& state) {
  const auto s = builtin_scenario("fig2a");
  const Vec2 p(6.0, 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(closest_obstacle(p, s.env, 0.0));
}
BENCHMARK(BM_ClosestObstacle);

void BM_LieDerivatives(benchmark::State& state) {
  const auto s = builtin_scenario("fig2a");
  const auto dfn = s.sim.controller.d_function(s.env);
  const auto st = ExtendedState::from_pose(6.0, 8.0, 2.5, 0.7);
  const auto q = *closest_obstacle(st.position(), s.env, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(lie_derivatives(st, q, 0.1, dfn));
}
BENCHMARK(BM_LieDerivatives);

void BM_ZcbfQp(benchmark::State& state) {
  BarrierEval e;
  e.Lfh = -0.8;
  e.Lgh = Vec2(-0.05, 0.4);
  e.alpha_h = 0.1;
  const Vec2 u_ref(1.0, -2.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_zcbf_qp(e, u_ref));
}
BENCHMARK(BM_ZcbfQp);

void BM_BoxedQp(benchmark::State& state) {
  BarrierEval e;
  e.Lfh = -0.8;
  e.Lgh = Vec2(-0.05, 0.4);
  e.alpha_h = 0.1;
  const InputBox box{-2, 2, -1.5, 1.5};
  const Vec2 u_ref(1.0, -2.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_boxed_qp(e, u_ref, box));
}
BENCHMARK(BM_BoxedQp);

void BM_OracleQp(benchmark::State& state) {
  std::vector<LinearInequality> cons;
  Eigen::VectorXd n(2);
  n << -0.05, 0.4;
  cons.push_back({n, 0.7});
  n << 1, 0;
  cons.push_back({n, -2});
  n << -1, 0;
  cons.push_back({n, -2});
  Eigen::VectorXd target(2);
  target << 1.0, -2.0;
  const auto problem = QpProblem::projection(target, cons);
  for (auto _ : state) benchmark::DoNotOptimize(qp_oracle(problem));
}
BENCHMARK(BM_OracleQp);

void BM_RunScenario(benchmark::State& state, const char* name) {
  const auto s = builtin_scenario(name);
  const auto env = s.environment_for_seed(s.seed);
  const auto field = s.field();
  std::size_t steps = 0;
  for (auto _ : state) {
    const auto log = run(s.sim, env, field);
    steps += log.records.size();
  }
  state.counters["steps/s"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}
BENCHMARK_CAPTURE(BM_RunScenario, fig2a, "fig2a")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunScenario, fig2b, "fig2b")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunScenario, gazebo_replica, "gazebo_replica")->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  McConfig c = paper_mc_config(1);
  c.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_monte_carlo(c));
}
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
