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

#include "aqec/observables.hpp"

#include <cmath>
#include <numbers>

#include "aqec/errors.hpp"
#include "aqec/models.hpp"

namespace aqec::observables {

namespace {

constexpr int kCodeZero = 0;  // |000>
constexpr int kCodeOne = 7;   // |111>

void require_qubits(const CompositeSpace& space) {
  if (space.num_sites() < 3 || space.dim(0) != 2 || space.dim(1) != 2 || space.dim(2) != 2) {
    throw SpaceMismatch("expected three leading qubit sites, got " + space.to_string());
  }
}

double wrap_phase(double phi) {
  phi = std::remainder(phi, 2.0 * std::numbers::pi);
  if (phi <= -std::numbers::pi) phi += 2.0 * std::numbers::pi;
  return phi;
}

}  // namespace

DensityMatrix qubit_marginal(const DensityMatrix& rho) {
  require_qubits(rho.space());
  static constexpr std::array<std::size_t, 3> kQubitSites{0, 1, 2};
  return partial_trace(rho, kQubitSites);
}

double fidelity(const DensityMatrix& rho, const StateVector& psi) {
  if (psi.space() == rho.space()) {
    return (psi.amplitudes().adjoint() * rho.data() * psi.amplitudes())(0, 0).real();
  }
  if (psi.space() == models::qubit_space()) {
    const DensityMatrix q = qubit_marginal(rho);
    return (psi.amplitudes().adjoint() * q.data() * psi.amplitudes())(0, 0).real();
  }
  throw SpaceMismatch("fidelity: state on " + psi.space().to_string() + " vs density matrix on " +
                      rho.space().to_string());
}

double optimal_phase(const DensityMatrix& rho) {
  const DensityMatrix q = qubit_marginal(rho);
  const Complex coherence = q(kCodeZero, kCodeOne);
  if (std::abs(coherence) < 1e-15) return 0.0;
  return wrap_phase(std::numbers::pi / 2.0 - std::arg(coherence));
}

PhasedFidelity compensated_fidelity(const DensityMatrix& rho, std::optional<double> reference_phase) {
  const DensityMatrix q = qubit_marginal(rho);
  const double phi = reference_phase ? *reference_phase : optimal_phase(rho);
  // F(phi) = (p000 + p111) / 2 + Re(-i e^{i phi} <000|rho|111>)
  const Complex coherence = q(kCodeZero, kCodeOne);
  const Complex b = Complex(0.0, -1.0) * std::exp(Complex(0.0, phi));
  const double f = 0.5 * (q(kCodeZero, kCodeZero).real() + q(kCodeOne, kCodeOne).real()) +
                   (b * coherence).real();
  return {f, phi};
}

std::array<double, 4> subspace_populations(const DensityMatrix& rho) {
  const DensityMatrix q = qubit_marginal(rho);
  std::array<double, 4> pops{};
  for (int idx = 0; idx < 8; ++idx) {
    // Syndrome: the qubit that disagrees with the other two, 0 when all agree.
    const int b1 = (idx >> 2) & 1;
    const int b2 = (idx >> 1) & 1;
    const int b3 = idx & 1;
    int syndrome = 0;
    if (b2 == b3 && b1 != b2) syndrome = 1;
    if (b1 == b3 && b2 != b1) syndrome = 2;
    if (b1 == b2 && b3 != b1) syndrome = 3;
    pops[syndrome] += q(idx, idx).real();
  }
  return pops;
}

std::vector<double> photon_numbers(const DensityMatrix& rho) {
  require_qubits(rho.space());
  std::vector<double> out;
  for (std::size_t site = 3; site < rho.space().num_sites(); ++site) {
    const auto pops = fock_populations(rho, static_cast<int>(site - 3));
    double n = 0.0;
    for (std::size_t level = 0; level < pops.size(); ++level) n += static_cast<double>(level) * pops[level];
    out.push_back(n);
  }
  return out;
}

std::vector<double> fock_populations(const DensityMatrix& rho, int resonator) {
  require_qubits(rho.space());
  const std::size_t site = 3 + static_cast<std::size_t>(resonator);
  if (resonator < 0 || site >= rho.space().num_sites()) {
    throw InvalidArgument("resonator " + std::to_string(resonator) + " not present in " +
                          rho.space().to_string());
  }
  const CompositeSpace& space = rho.space();
  std::vector<double> pops(static_cast<std::size_t>(space.dim(site)), 0.0);
  for (int idx = 0; idx < space.total_dim(); ++idx) {
    pops[static_cast<std::size_t>(space.levels_of(idx)[site])] += rho(idx, idx).real();
  }
  return pops;
}

double logical_expectation(const DensityMatrix& rho) {
  const DensityMatrix q = qubit_marginal(rho);
  const Operator sy = sigma(Axis::Y);
  const Operator y_logical = tensor(tensor(sy, sy), sy);
  return q.expectation(y_logical).real();
}

ObservableSet measure(const DensityMatrix& rho, std::optional<double> reference_phase) {
  ObservableSet s;
  s.fidelity_raw = fidelity(rho, models::logical_state());
  const auto comp = compensated_fidelity(rho, reference_phase);
  s.fidelity_compensated = comp.fidelity;
  s.phase = comp.phase;
  s.subspace_pops = subspace_populations(rho);
  s.photon_numbers = photon_numbers(rho);
  s.purity = rho.purity();
  return s;
}

}  // namespace aqec::observables
