#include <optional>
#include <vector>

#include <benchmark/benchmark.h>

#include "qpigeon/fft.hpp"
#include "qpigeon/operator.hpp"
#include "qpigeon/philox.hpp"
#include "qpigeon/pigeonhole.hpp"
#include "qpigeon/pointer.hpp"
#include "qpigeon/sampling.hpp"
#include "qpigeon/spectrum.hpp"
#include "qpigeon/tsvf.hpp"

namespace qpigeon {
namespace {

void BM_HermitianSpectrum(benchmark::State& state) {
  CounterRng rng(1);
  const Operator a = random_hermitian(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hermitian_spectrum(a));
  }
}
BENCHMARK(BM_HermitianSpectrum)->Arg(8)->Arg(16)->Arg(32);

void BM_WeakValueAllPairs(benchmark::State& state) {
  const PigeonholeScenario scenario = PigeonholeScenario::standard();
  const TwoStateVector tsv = make_tsv(scenario.pre, scenario.post);
  for (auto _ : state) {
    Complex total(0.0, 0.0);
    for (const auto& pair : kPairOrder) {
      total += weak_value(tsv, scenario.pair_projectors.at(pair));
    }
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_WeakValueAllPairs);

void BM_VerifyConundrum(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_conundrum(1e-10));
  }
}
BENCHMARK(BM_VerifyConundrum);

void BM_CoupleAndPostselect(benchmark::State& state) {
  const PigeonholeScenario scenario = PigeonholeScenario::standard();
  const PointerRegister pointer =
      gaussian_pointer(1.0, 10.0, static_cast<int>(state.range(0)));
  const std::vector<PointerRegister> pointers = {pointer, pointer, pointer};
  std::vector<CouplingSpec> couplings;
  for (size_t k = 0; k < kPairOrder.size(); ++k) {
    couplings.push_back(
        {scenario.pair_projectors.at(kPairOrder[k]), 0.1, static_cast<int>(k)});
  }
  for (auto _ : state) {
    const JointState joint = couple(scenario.pre, pointers, couplings);
    benchmark::DoNotOptimize(postselect_pointers(joint, scenario.post));
  }
}
BENCHMARK(BM_CoupleAndPostselect)->Arg(1024)->Arg(4096);

void BM_SampleStrong(benchmark::State& state) {
  const PigeonholeScenario scenario = PigeonholeScenario::standard();
  const long long shots = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample_strong(scenario.pre, scenario.post, scenario.total, shots, 1));
  }
  state.SetItemsProcessed(state.iterations() * shots);
}
BENCHMARK(BM_SampleStrong)->Arg(10000)->Arg(100000);

void BM_FftTranslate(benchmark::State& state) {
  const PointerRegister pointer =
      gaussian_pointer(1.0, 10.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    std::vector<Complex> wave = pointer.amplitudes;
    translate(wave, pointer.spacing, 0.37);
    benchmark::DoNotOptimize(wave);
  }
}
BENCHMARK(BM_FftTranslate)->Arg(1024)->Arg(4096);

}  // namespace
}  // namespace qpigeon

BENCHMARK_MAIN();
