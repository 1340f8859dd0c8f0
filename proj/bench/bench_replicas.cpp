// SPDX-License-Identifier: Apache-2.0
//
// Serial vs OpenMP replicas, and fixed-size vs reference kernels.
// Thread count follows OMP_NUM_THREADS / FLAGWALK_THREADS.

#include <benchmark/benchmark.h>

#include "flagwalk/dynamics.hpp"

using namespace flagwalk;

namespace {

void run_qr(benchmark::State& st, Exec exec, Kernel kernel) {
  const WiresModel m(static_cast<int>(st.range(0)), 1.0, 0.1);
  LyapunovOptions o;
  o.n_steps = 20000;
  o.replicas = 8;
  o.burn_in = 0;
  o.exec = exec;
  o.kernel = kernel;
  for (auto _ : st) benchmark::DoNotOptimize(lyapunov_qr(m, o).exponents.front());
  st.SetItemsProcessed(st.iterations() * o.n_steps * o.replicas);
}

void run_volume(benchmark::State& st, Exec exec, Kernel kernel) {
  const WiresModel m(static_cast<int>(st.range(0)), 1.0, 0.1);
  LyapunovOptions o;
  o.n_steps = 20000;
  o.replicas = 8;
  o.burn_in = 0;
  o.exec = exec;
  o.kernel = kernel;
  for (auto _ : st) benchmark::DoNotOptimize(lyapunov_birkhoff_all(m, o).front().mean);
  st.SetItemsProcessed(st.iterations() * o.n_steps * o.replicas);
}

void BM_qr_serial_reference(benchmark::State& s) { run_qr(s, Exec::serial, Kernel::reference); }
void BM_qr_serial_fast(benchmark::State& s) { run_qr(s, Exec::serial, Kernel::fast); }
void BM_qr_parallel_fast(benchmark::State& s) { run_qr(s, Exec::parallel, Kernel::fast); }
void BM_volume_serial_reference(benchmark::State& s) { run_volume(s, Exec::serial, Kernel::reference); }
void BM_volume_serial_fast(benchmark::State& s) { run_volume(s, Exec::serial, Kernel::fast); }
void BM_volume_parallel_fast(benchmark::State& s) { run_volume(s, Exec::parallel, Kernel::fast); }

}  // namespace

BENCHMARK(BM_qr_serial_reference)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_qr_serial_fast)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_qr_parallel_fast)->DenseRange(1, 3)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_volume_serial_reference)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_volume_serial_fast)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_volume_parallel_fast)->DenseRange(1, 3)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
