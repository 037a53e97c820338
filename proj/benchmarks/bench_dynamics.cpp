#include <string>

#include <benchmark/benchmark.h>

#include "vms/inertia.hpp"
#include "vms/integrate.hpp"
#include "vms/kinematics.hpp"
#include "vms/validation.hpp"

namespace {

const char* const kModels[] = {"free_body", "fixed_2link", "planar_2link", "floating_2link"};

vms::VmsModel model_at(const benchmark::State& state) {
  return vms::load_model(std::string(VMS_MODELS_DIR) + "/" + kModels[state.range(0)] + ".json");
}

void label(benchmark::State& state) { state.SetLabel(kModels[state.range(0)]); }

void BM_ForwardKinematics(benchmark::State& state) {
  const vms::VmsModel m = model_at(state);
  const vms::Sample s = vms::StateSampler(m, 1).next();
  for (auto _ : state) benchmark::DoNotOptimize(vms::forward_kinematics(m, s.state.h, s.state.q));
  label(state);
}

void BM_MassBlocks(benchmark::State& state) {
  const vms::VmsModel m = model_at(state);
  const vms::Sample s = vms::StateSampler(m, 1).next();
  for (auto _ : state) benchmark::DoNotOptimize(vms::mass_blocks(m, s.state.q));
  label(state);
}

void BM_MassPartials(benchmark::State& state) {
  const vms::VmsModel m = model_at(state);
  const vms::Sample s = vms::StateSampler(m, 1).next();
  for (auto _ : state) benchmark::DoNotOptimize(vms::mass_partials(m, s.state.q));
  label(state);
}

void BM_StandardField(benchmark::State& state) {
  const vms::VmsModel m = model_at(state);
  const vms::Sample s = vms::StateSampler(m, 1).next();
  for (auto _ : state) benchmark::DoNotOptimize(vms::ph_standard_field(m, s.state, s.inputs));
  label(state);
}

void BM_DecoupledField(benchmark::State& state) {
  const vms::VmsModel m = model_at(state);
  const vms::Sample s = vms::StateSampler(m, 1).next();
  const vms::DecoupledState x = vms::decouple(vms::mass_blocks(m, s.state.q), s.state);
  for (auto _ : state) benchmark::DoNotOptimize(vms::ph_decoupled_field(m, x, s.inputs));
  label(state);
}

void BM_ReducedEl(benchmark::State& state) {
  const vms::VmsModel m = model_at(state);
  const vms::Sample s = vms::StateSampler(m, 1).next();
  const vms::VelocityState x = vms::to_velocity_state(vms::mass_blocks(m, s.state.q), s.state);
  for (auto _ : state) benchmark::DoNotOptimize(vms::reduced_el_accelerations(m, x, s.inputs));
  label(state);
}

void BM_StepRk4(benchmark::State& state) {
  const vms::VmsModel m = model_at(state);
  const auto f = static_cast<vms::Formulation>(state.range(1));
  const vms::Sample s = vms::StateSampler(m, 1).next();
  vms::FlowState y = vms::to_flow(m, f, s.state);
  for (auto _ : state) {
    y = vms::step_rk4(m, f, y, s.inputs, 1e-4);
    benchmark::DoNotOptimize(y);
  }
  state.SetLabel(std::string(kModels[state.range(0)]) + "/" + vms::to_string(f));
}

void model_range(benchmark::internal::Benchmark* b) { b->DenseRange(0, 3); }

void model_and_formulation(benchmark::internal::Benchmark* b) {
  for (int m = 0; m < 4; ++m)
    for (int f = 0; f < 3; ++f) b->Args({m, f});
}

}  // namespace

BENCHMARK(BM_ForwardKinematics)->Apply(model_range);
BENCHMARK(BM_MassBlocks)->Apply(model_range);
BENCHMARK(BM_MassPartials)->Apply(model_range);
BENCHMARK(BM_StandardField)->Apply(model_range);
BENCHMARK(BM_DecoupledField)->Apply(model_range);
BENCHMARK(BM_ReducedEl)->Apply(model_range);
BENCHMARK(BM_StepRk4)->Apply(model_and_formulation);
BENCHMARK_MAIN();
