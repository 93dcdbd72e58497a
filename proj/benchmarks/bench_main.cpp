#include <benchmark/benchmark.h>

#include <random>

#include "head/cost_model.hpp"
#include "head/gating.hpp"
#include "head/pfi.hpp"

namespace {

void BM_SimulateTimeSaved(benchmark::State& state) {
  head::CostModelParams c;
  c.p_complete = 0.3;
  c.profile = {0.934, 0.7695, ""};
  c.num_objects = int(state.range(0));
  c.critical_timestep = 25;
  const head::RngStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(head::simulate_time_saved(c, 100'000, rng));
  state.SetItemsProcessed(state.iterations() * 100'000);
}
BENCHMARK(BM_SimulateTimeSaved)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ClosedForm(benchmark::State& state) {
  head::CostModelParams c;
  c.p_complete = 0.3;
  c.profile = {0.934, 0.7695, ""};
  c.num_objects = 4;
  c.critical_timestep = 25;
  for (auto _ : state) benchmark::DoNotOptimize(head::expected_time_saved_closed_form(c));
}
BENCHMARK(BM_ClosedForm);

void BM_GateJoint(benchmark::State& state) {
  const auto k = std::size_t(state.range(0));
  std::vector<head::PresencePrediction> preds;
  head::CentroidMap centroids;
  std::vector<head::RelationSpec> relations;
  for (std::size_t i = 0; i < k; ++i) {
    preds.push_back({{i, "object"}, true});
    centroids.emplace(i, head::Centroid(double(i) / double(k), 0.5));
    if (i > 0) relations.push_back({i - 1, i, head::RelationKind::left});
  }
  for (auto _ : state) benchmark::DoNotOptimize(head::gate_joint(preds, relations, centroids, 0.01));
}
BENCHMARK(BM_GateJoint)->Arg(2)->Arg(5)->Arg(16);

void BM_PredictX0(benchmark::State& state) {
  const auto schedule = head::NoiseSchedule::scaled_linear(50);
  const auto dim = std::size_t(state.range(0));
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n01;
  std::vector<double> z(dim), eps(dim);
  for (auto& v : z) v = n01(gen);
  for (auto& v : eps) v = n01(gen);
  const head::LatentState st{z, 25};
  for (auto _ : state) benchmark::DoNotOptimize(head::predict_x0(st, eps, schedule));
  state.SetBytesProcessed(state.iterations() * std::int64_t(dim * sizeof(double)));
}
BENCHMARK(BM_PredictX0)->Arg(64)->Arg(4 * 64 * 64);

}  // namespace

BENCHMARK_MAIN();
