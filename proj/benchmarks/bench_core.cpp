#include <benchmark/benchmark.h>

#include <random>

#include "codesign/bayesopt.hpp"
#include "codesign/evaluate.hpp"
#include "codesign/gp.hpp"
#include "codesign/pareto.hpp"
#include "codesign/perfmodel.hpp"
#include "codesign/problem.hpp"

using namespace codesign;

namespace {

std::vector<Objectives> random_front(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Objectives> pts(n);
    for (auto& p : pts) p = {u(gen), u(gen), u(gen)};
    return pts;
}

void BM_Hypervolume3D(benchmark::State& state) {
    const auto pts = random_front(std::size_t(state.range(0)), 1);
    const Objectives ref{1.1, 1.1, 1.1};
    for (auto _ : state) benchmark::DoNotOptimize(hypervolume(pts, ref));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hypervolume3D)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_ParetoFilter(benchmark::State& state) {
    const auto pts = random_front(std::size_t(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(pareto_filter(pts));
}
BENCHMARK(BM_ParetoFilter)->RangeMultiplier(4)->Range(16, 4096);

void BM_GpFit(benchmark::State& state) {
    const auto n = Eigen::Index(state.range(0));
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd x(n, 10);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < 10; ++j) x(i, j) = u(gen);
        y[i] = std::sin(3 * x(i, 0)) + x(i, 1) * x(i, 2);
    }
    for (auto _ : state) benchmark::DoNotOptimize(GpModel::fit(x, y, GpOptions{}, 1));
}
BENCHMARK(BM_GpFit)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ModelLatency(benchmark::State& state) {
    const ModelSpec model;
    AccelConfig accel;
    accel.dataflow = state.range(0) ? Dataflow::weight_stationary : Dataflow::output_stationary;
    for (auto _ : state) benchmark::DoNotOptimize(model_latency(model, accel));
}
BENCHMARK(BM_ModelLatency)->Arg(0)->Arg(1);

void BM_EvaluateDesign(benchmark::State& state) {
    const auto problem = load_problem(CODESIGN_CONFIG_DIR "/nano-60.json");
    const Evaluator ev(problem);
    std::uint64_t i = 0;
    const std::uint64_t n = problem.search.space.size();
    for (auto _ : state) benchmark::DoNotOptimize(ev.evaluate((i++ * 7919) % n));
}
BENCHMARK(BM_EvaluateDesign);

void BM_SmsEgoScore(benchmark::State& state) {
    const auto front = random_front(std::size_t(state.range(0)), 4);
    const auto probes = random_front(256, 5);
    const Objectives ref{1.1, 1.1, 1.1};
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sms_ego_score(probes[i++ % probes.size()], front, ref));
}
BENCHMARK(BM_SmsEgoScore)->Arg(8)->Arg(32)->Arg(128);

}  // namespace
BENCHMARK_MAIN();
