#include <benchmark/benchmark.h>

#include <cmath>

#include "unibound/integrator.hpp"
#include "unibound/models.hpp"

namespace {

using namespace unibound;

PdeParams wave_params(std::size_t modes) {
  PdeParams p;
  p.modes = modes;
  p.grid_points = 3 * modes;
  p.alpha = 1.0;
  p.beta = 2.0;
  return p;
}

State wave_state(std::size_t modes, double amplitude) {
  State s;
  s.u.resize(modes);
  s.v.assign(modes, 0.0);
  for (std::size_t k = 0; k < modes; ++k) s.u[k] = amplitude / std::pow(double(k + 1), 2.0);
  return s;
}

void BM_WaveGradient(benchmark::State& st) {
  const auto modes = static_cast<std::size_t>(st.range(0));
  const auto sys = build_galerkin_wave(wave_params(modes));
  const State s = wave_state(modes, 10.0);
  Vec out(modes);
  for (auto _ : st) {
    sys.grad_potential(s.u, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_WaveGradient)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_WaveDamping(benchmark::State& st) {
  const auto modes = static_cast<std::size_t>(st.range(0));
  const auto sys = build_galerkin_wave(wave_params(modes));
  const State s = wave_state(modes, 10.0);
  Vec out(modes);
  for (auto _ : st) {
    sys.damping(0.0, s.u, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_WaveDamping)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_ScalarStep(benchmark::State& st) {
  const auto sys = build_scalar_ode(1.0, 3.0);
  State s{0.0, {1.0}, {0.0}};
  const Tolerances tol;
  for (auto _ : st) {
    auto out = step(sys, s, 1e-3, tol);
    benchmark::DoNotOptimize(out.state.u.data());
  }
}
BENCHMARK(BM_ScalarStep);

void BM_WaveStep(benchmark::State& st) {
  const auto modes = static_cast<std::size_t>(st.range(0));
  const auto sys = build_galerkin_wave(wave_params(modes));
  const State s = wave_state(modes, 1.0);
  const Tolerances tol;
  for (auto _ : st) {
    auto out = step(sys, s, 1e-4, tol);
    benchmark::DoNotOptimize(out.state.u.data());
  }
}
BENCHMARK(BM_WaveStep)->Arg(16)->Arg(32);

void BM_ScalarIntegrate(benchmark::State& st) {
  const auto sys = build_scalar_ode(1.0, 3.0);
  const State s{0.0, {st.range(0) * 1.0}, {0.0}};
  const Tolerances tol;
  for (auto _ : st) {
    auto traj = integrate(sys, s, 1.0, tol);
    benchmark::DoNotOptimize(traj.samples.data());
  }
}
BENCHMARK(BM_ScalarIntegrate)->Arg(1)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
