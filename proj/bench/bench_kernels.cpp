#include <benchmark/benchmark.h>

#include "adlab/kernels.hpp"
#include "adlab/models.hpp"

using namespace adlab;

namespace {

struct Workload {
  HamiltonianSource src;
  TimeGrid grid;
  PropagatorTrace trace;
  EigenFrame frame;

  Workload(std::size_t dim, std::size_t steps)
      : src(dim == 2 ? rotating_hamiltonian({1.0, 0.1, 0.7853981633974483}) : random_smooth_hamiltonian(dim, 17)),
        grid(0.0, 0.01, steps),
        trace(propagate(src, grid)),
        frame(kernels::serial::build_eigenframe(src, grid)) {}
};

const Workload& workload(std::size_t dim) {
  static const Workload two(2, 20000), four(4, 20000), eight(8, 5000);
  return dim == 2 ? two : dim == 4 ? four : eight;
}

template <class Fn>
void run(benchmark::State& state, Fn&& fn) {
  const auto& w = workload(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fn(w));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.grid.nodes()));
  state.counters["threads"] = kernels::max_threads();
}

}  // namespace

#define ADLAB_KERNEL_BENCH(name, expr)                                                          \
  void BM_serial_##name(benchmark::State& s) {                                                  \
    namespace k = kernels::serial;                                                              \
    run(s, [](const Workload& w) { return expr; });                                             \
  }                                                                                             \
  void BM_omp_##name(benchmark::State& s) {                                                     \
    namespace k = kernels::omp;                                                                 \
    run(s, [](const Workload& w) { return expr; });                                             \
  }                                                                                             \
  BENCHMARK(BM_serial_##name)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);           \
  BENCHMARK(BM_omp_##name)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)

ADLAB_KERNEL_BENCH(eigenframe, k::build_eigenframe(w.src, w.grid).nodes());
ADLAB_KERNEL_BENCH(dual_hamiltonian, k::dual_hamiltonian_series(w.src, w.trace).size());
ADLAB_KERNEL_BENCH(equivalence_residual, k::equivalence_residual_series(w.trace, w.frame).back());
ADLAB_KERNEL_BENCH(adiabatic_propagator, k::adiabatic_propagator_series(w.frame).size());

BENCHMARK_MAIN();
