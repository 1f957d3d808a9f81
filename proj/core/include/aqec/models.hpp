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
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aqec/hilbert.hpp"
#include "aqec/lindblad.hpp"

namespace aqec::models {

using Matrix3 = Eigen::Matrix3d;
using Triple = std::array<double, 3>;

struct BareFrequencies {
  Triple resonator{};  // omega_a for resonator j
  Triple qubit{};      // omega_b for qubit j
};

/**
 * Physical constants of the protocol. Rates are angular frequencies; every
 * built-in parameter set uses units of the qubit flip rate (gamma_x = 1),
 * except the single-qubit set which uses units of kappa.
 *
 * Indices are zero-based in code: chi_ab(j, k) couples resonator j to qubit k.
 * `resonators` is 3 for the three-resonator scheme and 1 when only the first
 * row of each chi matrix is physical.
 */
struct SystemParams {
  Matrix3 chi_ab = Matrix3::Zero();
  Matrix3 chi_aa = Matrix3::Zero();
  Matrix3 chi_bb = Matrix3::Zero();
  Triple kappa{};
  Triple gamma_x{};
  Triple omega_p{};
  double g12 = 0.0;
  double g23 = 0.0;
  int n_levels = 2;
  int resonators = 3;
  std::optional<BareFrequencies> bare_freqs;
};

/// chi_ab row (-20, 10, 10) kappa, Omega_p = 0.3 kappa, gamma_x = 0, kappa = 1, one resonator.
SystemParams single_qubit_params();

/**
 * Three-resonator set in units of gamma_x: kappa = 500, every row of chi_ab is
 * (-100, 50, 50) * omega_p, chi_aa = chi_ab / 100.
 */
SystemParams three_resonator_params(double omega_p);

/// One resonator with the first chi_ab row of three_resonator_params, g12 = Gamma_c / 2, g23 = -g12 / sqrt(2).
SystemParams single_resonator_params(double omega_p);

/// Default Omega_p sweep (units of gamma_x); a stand-in, the published legend values are not recoverable.
std::vector<double> default_omega_p_sweep();

struct RatioCheck {
  double ratio = 0.0;
  bool ok = false;
};

/**
 * Regime diagnostics. "Much larger" means a ratio of at least
 * kMuchLargerRatio; "much smaller" the inverse. Only the first
 * `resonators` rows of chi_ab enter the dispersive and degeneracy checks.
 */
struct ValidityReport {
  RatioCheck strong_dispersive;        // min|chi_ab| / max(kappa, gamma_x)
  Triple symmetry_residuals{};         // sum_k chi_ab(j, k)
  std::vector<RatioCheck> degeneracy;  // |sum_k chi_ab(j, k)| / kappa_j, ok when <= 1/10
  RatioCheck kappa_over_gamma;         // min kappa / max gamma_x
  RatioCheck chi_over_kappa;           // min|chi_ab| / max kappa
  RatioCheck pump_below_kappa;         // max Omega_p / kappa over active channels, ok when < 1
  std::vector<std::string> warnings;

  bool all_ok() const;
};

inline constexpr double kMuchLargerRatio = 10.0;

ValidityReport validate_params(const SystemParams& p);

/// The three-qubit space [2, 2, 2].
CompositeSpace qubit_space();

/// Code space E0 = span{|000>, |111>} and error spaces Ej = sigma_x^j E0, j = 1..3.
std::array<StateVector, 2> subspace_basis(int subspace);
Operator subspace_projector(int subspace);

/// (|000> - i e^{i phi} |111>) / sqrt(2); phi = 0 is the protected logical state.
StateVector logical_state(double phi = 0.0);

/// sigma_x^j applied to logical_state(0): (|100> - i|011>) / sqrt(2) for j = 1.
StateVector corrupted_state(int qubit);

/// c_j = sigma_-^j Pi_{00} + sigma_+^j Pi_{11} on the two other qubits; j in {1, 2, 3}.
Operator correction_operator(int qubit, const CompositeSpace& space);

/// Gamma_c = Omega_p^2 / kappa.
double correction_rate(double omega_p, double kappa);

struct PumpTones {
  double sum_tone = 0.0;         // (omega_a + omega_b) / 2 - shift
  double difference_tone = 0.0;  // |(omega_a - omega_b) / 2 - shift|
};

/// Kerr-corrected pump tones for qubit j (1-based); shift = sum_{k != j} chi_bb(j, k).
PumpTones pump_frequencies(const SystemParams& p, int qubit);

/// sqrt(chi_aa chi_ab) |drive / detuning|^2.
double rabi_amplitude(double chi_aa, double chi_ab, Complex drive_amp, double detuning);

struct ResidualRates {
  double gamma_2nd = 0.0;
  double gamma_select = 0.0;
  double gamma_sym = 0.0;
  bool gamma_sym_order_of_magnitude = true;
};

/**
 * gamma_2nd    = sum_j gamma_x_j^2 / Gamma_c_j   (3 gamma_x^2 / Gamma_c for identical channels)
 * gamma_select = sum_j kappa_j Omega_j^2 / (chi_ab(j, j)^2 + kappa_j^2)
 * gamma_sym   ~ sum_j gamma_x_j |sum_k chi_ab(j, k)| / Gamma_c_j
 */
ResidualRates residual_rates(const SystemParams& p);

/// M0 = sqrt(1 - p) I, Mj = sqrt(p / 3) sigma_x^j on the three-qubit space.
std::vector<Operator> bitflip_kraus(double p);
DensityMatrix apply_channel(const std::vector<Operator>& kraus, const DensityMatrix& rho);

// Hamiltonian pieces, exposed for structural checks. `qubit_sites` are 0, 1, 2;
// resonator j sits at site 3 + j.

/// -sum_j n_j sum_k chi_ab(j, k) / 2 sigma_z^k over the first `resonators` rows.
Operator dispersive_hamiltonian(const SystemParams& p, const CompositeSpace& space, int resonators);
/// sum_j Omega_j / 2 (sigma_+^j a_j + sigma_-^j a_j + h.c.).
Operator pump_hamiltonian(const SystemParams& p, const CompositeSpace& space, int resonators);
/// -sum_j chi_aa(j, j) a_j^dag^2 a_j^2 - sum_{j != k} chi_aa(j, k) n_j n_k.
Operator kerr_hamiltonian(const SystemParams& p, const CompositeSpace& space, int resonators);
/// g12 (sigma_+^1 sigma_-^2 + h.c.) + g23 (sigma_+^2 sigma_-^3 + h.c.).
Operator transfer_hamiltonian(const SystemParams& p, const CompositeSpace& space);

/// Three qubits and resonator 1; only qubit 1 flips.
LindbladModel build_single_qubit_full(const SystemParams& p);
/// Gamma_c D[c_1] + gamma_x / 2 D[sigma_x^1].
LindbladModel build_single_qubit_reduced(const SystemParams& p);
/// sum_j Gamma_c^j D[c_j] + gamma_x^j / 2 D[sigma_x^j].
LindbladModel build_three_qubit_reduced(const SystemParams& p);
/// Three qubits and three resonators with dispersive, pump and Kerr terms.
LindbladModel build_three_resonator_full(const SystemParams& p);
/// Three qubits, resonator 1, plus the E3 -> E2 -> E1 transfer couplings.
LindbladModel build_single_resonator(const SystemParams& p);
/// Bit flips only, no correction.
LindbladModel build_uncorrected(const SystemParams& p);

/// Permute qubit labels (and the resonator attached to each qubit): new label perm[k] for old k.
SystemParams permute_labels(const SystemParams& p, const std::array<int, 3>& perm);

}  // namespace aqec::models
