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

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "aqec/hilbert.hpp"

namespace aqec::observables {

/// Reduced state of the three qubits (sites 0..2); resonators are traced out.
DensityMatrix qubit_marginal(const DensityMatrix& rho);

/// <psi|rho|psi>. psi may live on the full space or on the qubit factor only.
double fidelity(const DensityMatrix& rho, const StateVector& psi);

struct PhasedFidelity {
  double fidelity = 0.0;
  double phase = 0.0;
};

/**
 * Fidelity to (|000> - i e^{i phi}|111>) / sqrt(2).
 *
 * With a reference phase the family is evaluated at that phi. Without one the
 * maximum over phi is returned, attained at phi = pi/2 - arg <000|rho_q|111>
 * (wrapped to (-pi, pi]); phi = 0 when that coherence vanishes.
 */
PhasedFidelity compensated_fidelity(const DensityMatrix& rho,
                                    std::optional<double> reference_phase = std::nullopt);

/// Phase maximizing the logical-family fidelity of rho.
double optimal_phase(const DensityMatrix& rho);

/// P_Ej = tr(Pi_Ej rho_q), j = 0..3.
std::array<double, 4> subspace_populations(const DensityMatrix& rho);

/// <a_j^dag a_j> for every resonator site (sites 3.. of the space); empty without resonators.
std::vector<double> photon_numbers(const DensityMatrix& rho);

/// Fock-level distribution of resonator `resonator` (0-based).
std::vector<double> fock_populations(const DensityMatrix& rho, int resonator);

/**
 * Expectation of the logical Y operator of the repetition code. In this
 * library's Pauli convention it is sigma_y x sigma_y x sigma_y, and
 * (|000> - i|111>)/sqrt(2) is its -1 eigenstate.
 */
double logical_expectation(const DensityMatrix& rho);

struct ObservableSet {
  double fidelity_raw = 0.0;
  double fidelity_compensated = 0.0;
  double phase = 0.0;
  std::array<double, 4> subspace_pops{};
  std::vector<double> photon_numbers;
  double purity = 0.0;
};

/// Every observable for one state; compensation follows compensated_fidelity.
ObservableSet measure(const DensityMatrix& rho, std::optional<double> reference_phase = std::nullopt);

}  // namespace aqec::observables
