// Copyright 2026 The aqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Micro-benchmarks for the numerical kernels: Liouvillian assembly, the
// block-decomposed step propagator, and both integrators.

#include <benchmark/benchmark.h>

#include "aqec/hilbert.hpp"
#include "aqec/lindblad.hpp"
#include "aqec/models.hpp"

namespace {

using namespace aqec;

LindbladModel model_for(int which) {
  switch (which) {
    case 0: return models::build_three_qubit_reduced(models::three_resonator_params(300.0));
    case 1: return models::build_single_qubit_full(models::single_qubit_params());
    default: return models::build_three_resonator_full(models::three_resonator_params(300.0));
  }
}

DensityMatrix logical_on(const LindbladModel& m) {
  DensityMatrix rho = DensityMatrix::pure(models::logical_state());
  const CompositeSpace& s = m.space();
  if (s.num_sites() == 3) return rho;
  std::vector<int> dims, zeros;
  for (std::size_t site = 3; site < s.num_sites(); ++site) {
    dims.push_back(s.dim(site));
    zeros.push_back(0);
  }
  return tensor(rho, DensityMatrix::pure(StateVector::basis(make_space(dims), zeros)));
}

void BM_Liouvillian(benchmark::State& st) {
  const LindbladModel m = model_for(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(liouvillian(m));
  st.SetLabel(m.space().to_string());
}
BENCHMARK(BM_Liouvillian)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_StepPropagator(benchmark::State& st) {
  const LindbladModel m = model_for(static_cast<int>(st.range(0)));
  const SparseMatrix L = liouvillian(m);
  const Vector v = vectorize(logical_on(m).data());
  for (auto _ : st) benchmark::DoNotOptimize(step_propagator(L, 1e-3, v));
  st.SetLabel(m.space().to_string());
}
BENCHMARK(BM_StepPropagator)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_Integrate(benchmark::State& st) {
  const LindbladModel m = model_for(1);
  const DensityMatrix rho0 = logical_on(m);
  IntegrationOptions opt;
  opt.method = st.range(0) == 0 ? Method::ExpmStep : Method::Rk4;
  opt.keep_states = false;
  for (auto _ : st) benchmark::DoNotOptimize(integrate(m, rho0, TimeGrid::uniform(10.0, 200), opt));
  st.SetLabel(st.range(0) == 0 ? "expm" : "rk4");
}
BENCHMARK(BM_Integrate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
