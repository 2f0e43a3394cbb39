#include <benchmark/benchmark.h>

#include "ckem/functional.hpp"
#include "ckem/geometry.hpp"
#include "ckem/integrals.hpp"

using namespace ckem;

namespace {

Polytope blowup() { return make_family(Family::blowup(0.5)); }

void BM_BoundaryIntegral(benchmark::State& state) {
    const Polytope P = blowup();
    const AffineFn f{0.1, -0.2, 0.5};
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(boundary_power_integral(P, f, k));
}
BENCHMARK(BM_BoundaryIntegral)->Arg(2)->Arg(4)->Arg(8);

void BM_InteriorIntegral(benchmark::State& state) {
    const Polytope P = blowup();
    const AffineFn f{0.1, -0.2, 0.5};
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(interior_power_integral(P, f, k));
}
BENCHMARK(BM_InteriorIntegral)->Arg(3)->Arg(4)->Arg(8);

// near-constant f takes the fallback path
void BM_InteriorIntegralFlat(benchmark::State& state) {
    const Polytope P = blowup();
    const AffineFn f{1e-14, 0.0, 0.5};
    for (auto _ : state) benchmark::DoNotOptimize(interior_power_integral(P, f, 4));
}
BENCHMARK(BM_InteriorIntegralFlat);

void BM_QuadratureOracle(benchmark::State& state) {
    const Polytope P = blowup();
    const AffineFn f{0.1, -0.2, 0.5};
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(quadrature_oracle(P, f, 4, {}, n));
}
BENCHMARK(BM_QuadratureOracle)->Arg(16)->Arg(64);

void BM_VolumeFunctional(benchmark::State& state) {
    const Polytope P = blowup();
    const AffineFn f{0.1, -0.2, 0.5};
    for (auto _ : state) benchmark::DoNotOptimize(volume_functional(P, f));
}
BENCHMARK(BM_VolumeFunctional);

void BM_SliceModel(benchmark::State& state) {
    const Family fam = Family::blowup(0.5);
    const Polytope P = make_family(fam);
    const SliceConstraint slice = family_slice(fam, P);
    const AffineFn f = *slice.project(AffineFn{0.1, -0.2, 0.5});
    for (auto _ : state) benchmark::DoNotOptimize(slice_model(P, f, slice));
}
BENCHMARK(BM_SliceModel);

}  // namespace
