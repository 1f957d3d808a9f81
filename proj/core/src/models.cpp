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

#include "aqec/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "aqec/errors.hpp"

namespace aqec::models {

namespace {

constexpr int kQubits = 3;
const Complex kI(0.0, 1.0);

void check_ranges(const SystemParams& p) {
  auto nonneg = [](const Triple& t, const char* name) {
    for (double v : t) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string(name) + " entries must be finite and >= 0");
      }
    }
  };
  nonneg(p.kappa, "kappa");
  nonneg(p.gamma_x, "gamma_x");
  nonneg(p.omega_p, "omega_p");
  if (p.n_levels < 2) throw InvalidArgument("n_levels must be >= 2");
  if (p.resonators != 1 && p.resonators != 3) throw InvalidArgument("resonators must be 1 or 3");
  if (!p.chi_ab.allFinite() || !p.chi_aa.allFinite() || !p.chi_bb.allFinite()) {
    throw InvalidArgument("chi matrices must be finite");
  }
  if (!std::isfinite(p.g12) || !std::isfinite(p.g23)) throw InvalidArgument("g12, g23 must be finite");
}

void check_qubit(int qubit) {
  if (qubit < 1 || qubit > kQubits) {
    throw InvalidArgument("qubit index " + std::to_string(qubit) + " outside 1..3");
  }
}

CompositeSpace joint_space(int resonators, int n_levels) {
  std::vector<int> dims(kQubits, 2);
  for (int j = 0; j < resonators; ++j) dims.push_back(n_levels);
  return CompositeSpace(std::move(dims));
}

Operator qubit_op(Axis axis, int site, const CompositeSpace& space) {
  return embed(sigma(axis), static_cast<std::size_t>(site), space);
}

Operator mode_op(const Operator& local, int resonator, const CompositeSpace& space) {
  return embed(local, static_cast<std::size_t>(kQubits + resonator), space);
}

// |0><0| and |1><1| on a qubit site.
Operator ground_proj(int site, const CompositeSpace& space) {
  return 0.5 * (Operator::identity(space) - qubit_op(Axis::Z, site, space));
}
Operator excited_proj(int site, const CompositeSpace& space) {
  return 0.5 * (Operator::identity(space) + qubit_op(Axis::Z, site, space));
}

double ratio_or_inf(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

SystemParams single_qubit_params() {
  SystemParams p;
  p.resonators = 1;
  p.n_levels = 3;
  p.kappa = {1.0, 0.0, 0.0};
  p.gamma_x = {0.0, 0.0, 0.0};
  p.omega_p = {0.3, 0.0, 0.0};
  p.chi_ab.row(0) << -20.0, 10.0, 10.0;
  return p;
}

SystemParams three_resonator_params(double omega_p) {
  SystemParams p;
  p.resonators = 3;
  p.n_levels = 2;
  p.kappa = {500.0, 500.0, 500.0};
  p.gamma_x = {1.0, 1.0, 1.0};
  p.omega_p = {omega_p, omega_p, omega_p};
  const double chi = 100.0 * omega_p;
  for (int j = 0; j < 3; ++j) p.chi_ab.row(j) << -chi, chi / 2.0, chi / 2.0;
  p.chi_aa = p.chi_ab / 100.0;
  return p;
}

SystemParams single_resonator_params(double omega_p) {
  SystemParams p;
  p.resonators = 1;
  p.n_levels = 3;
  p.kappa = {500.0, 0.0, 0.0};
  p.gamma_x = {1.0, 1.0, 1.0};
  p.omega_p = {omega_p, 0.0, 0.0};
  const double chi = 100.0 * omega_p;
  p.chi_ab.row(0) << -chi, chi / 2.0, chi / 2.0;
  p.g12 = correction_rate(omega_p, p.kappa[0]) / 2.0;
  p.g23 = -p.g12 / std::sqrt(2.0);
  return p;
}

std::vector<double> default_omega_p_sweep() { return {50.0, 100.0, 200.0, 300.0, 400.0, 500.0}; }

bool ValidityReport::all_ok() const {
  bool ok = strong_dispersive.ok && kappa_over_gamma.ok && chi_over_kappa.ok && pump_below_kappa.ok;
  for (const auto& d : degeneracy) ok = ok && d.ok;
  return ok;
}

ValidityReport validate_params(const SystemParams& p) {
  ValidityReport r;
  const int rows = std::clamp(p.resonators, 1, 3);

  double min_chi = std::numeric_limits<double>::infinity();
  double max_kappa = 0.0;
  double min_kappa = std::numeric_limits<double>::infinity();
  double max_gamma = 0.0;
  for (int j = 0; j < rows; ++j) {
    for (int k = 0; k < 3; ++k) min_chi = std::min(min_chi, std::abs(p.chi_ab(j, k)));
    max_kappa = std::max(max_kappa, p.kappa[j]);
    min_kappa = std::min(min_kappa, p.kappa[j]);
  }
  for (double g : p.gamma_x) max_gamma = std::max(max_gamma, g);

  r.strong_dispersive.ratio = ratio_or_inf(min_chi, std::max(max_kappa, max_gamma));
  r.strong_dispersive.ok = r.strong_dispersive.ratio >= kMuchLargerRatio;

  for (int j = 0; j < 3; ++j) r.symmetry_residuals[j] = p.chi_ab.row(j).sum();
  for (int j = 0; j < rows; ++j) {
    RatioCheck d;
    const double residual = std::abs(r.symmetry_residuals[j]);
    d.ratio = p.kappa[j] > 0.0 ? residual / p.kappa[j] : std::numeric_limits<double>::infinity();
    d.ok = d.ratio <= 1.0 / kMuchLargerRatio;
    r.degeneracy.push_back(d);
  }

  r.kappa_over_gamma.ratio = ratio_or_inf(min_kappa, max_gamma);
  r.kappa_over_gamma.ok = r.kappa_over_gamma.ratio >= kMuchLargerRatio;
  r.chi_over_kappa.ratio = ratio_or_inf(min_chi, max_kappa);
  r.chi_over_kappa.ok = r.chi_over_kappa.ratio >= kMuchLargerRatio;

  double pump = 0.0;
  for (int j = 0; j < rows; ++j) {
    const double ratio = p.kappa[j] > 0.0 ? p.omega_p[j] / p.kappa[j]
                                          : std::numeric_limits<double>::infinity();
    pump = std::max(pump, ratio);
  }
  r.pump_below_kappa.ratio = pump;
  r.pump_below_kappa.ok = pump < 1.0;

  if (!r.strong_dispersive.ok) {
    r.warnings.push_back("strong dispersive regime not met: min|chi_ab| / max(kappa, gamma_x) = " +
                         fmt(r.strong_dispersive.ratio));
  }
  for (std::size_t j = 0; j < r.degeneracy.size(); ++j) {
    if (!r.degeneracy[j].ok) {
      r.warnings.push_back("degeneracy condition fails on resonator " + std::to_string(j + 1) +
                           ": |sum_k chi_ab| / kappa = " + fmt(r.degeneracy[j].ratio));
    }
  }
  if (!r.kappa_over_gamma.ok) {
    r.warnings.push_back("hierarchy gamma_x << kappa not met: ratio " + fmt(r.kappa_over_gamma.ratio));
  }
  if (!r.chi_over_kappa.ok) {
    r.warnings.push_back("hierarchy kappa << chi_ab not met: ratio " + fmt(r.chi_over_kappa.ratio));
  }
  if (!r.pump_below_kappa.ok) {
    r.warnings.push_back("saturation regime: Omega_p / kappa = " + fmt(pump) +
                         " >= 1, correction rate no longer follows Omega_p^2 / kappa");
  }
  return r;
}

CompositeSpace qubit_space() { return CompositeSpace({2, 2, 2}); }

std::array<StateVector, 2> subspace_basis(int subspace) {
  if (subspace < 0 || subspace > kQubits) throw InvalidArgument("subspace index outside 0..3");
  const auto space = qubit_space();
  std::array<int, 3> zeros{0, 0, 0};
  std::array<int, 3> ones{1, 1, 1};
  if (subspace > 0) {
    zeros[subspace - 1] ^= 1;
    ones[subspace - 1] ^= 1;
  }
  return {StateVector::basis(space, zeros), StateVector::basis(space, ones)};
}

Operator subspace_projector(int subspace) {
  const auto basis = subspace_basis(subspace);
  return projector(std::span<const StateVector>(basis.data(), basis.size()));
}

StateVector logical_state(double phi) {
  const auto space = qubit_space();
  Vector v = Vector::Zero(8);
  v(0) = 1.0 / std::sqrt(2.0);
  v(7) = -kI * std::exp(kI * phi) / std::sqrt(2.0);
  return StateVector::normalized(space, std::move(v));
}

StateVector corrupted_state(int qubit) {
  check_qubit(qubit);
  const auto space = qubit_space();
  const Operator flip = qubit_op(Axis::X, qubit - 1, space);
  return StateVector::normalized(space, flip.data() * logical_state().amplitudes());
}

Operator correction_operator(int qubit, const CompositeSpace& space) {
  check_qubit(qubit);
  if (!(space == qubit_space())) {
    throw SpaceMismatch("correction operators act on the three-qubit space [2,2,2], got " +
                        space.to_string());
  }
  const int target = qubit - 1;
  const int a = (target + 1) % 3;
  const int b = (target + 2) % 3;
  return qubit_op(Axis::Minus, target, space) * ground_proj(a, space) * ground_proj(b, space) +
         qubit_op(Axis::Plus, target, space) * excited_proj(a, space) * excited_proj(b, space);
}

double correction_rate(double omega_p, double kappa) {
  if (!(kappa > 0.0)) throw InvalidArgument("correction rate needs kappa > 0");
  return omega_p * omega_p / kappa;
}

PumpTones pump_frequencies(const SystemParams& p, int qubit) {
  check_qubit(qubit);
  if (!p.bare_freqs) throw InvalidArgument("pump frequencies need bare resonator and qubit frequencies");
  const int j = qubit - 1;
  double shift = 0.0;
  for (int k = 0; k < 3; ++k) {
    if (k != j) shift += p.chi_bb(j, k);
  }
  const double wa = p.bare_freqs->resonator[j];
  const double wb = p.bare_freqs->qubit[j];
  return {(wa + wb) / 2.0 - shift, std::abs((wa - wb) / 2.0 - shift)};
}

double rabi_amplitude(double chi_aa, double chi_ab, Complex drive_amp, double detuning) {
  if (detuning == 0.0) throw InvalidArgument("pump detuning from the resonator must be nonzero");
  const double product = chi_aa * chi_ab;
  if (product < 0.0) {
    throw InvalidArgument("chi_aa * chi_ab < 0; pass the Kerr and dispersive magnitudes");
  }
  return std::sqrt(product) * std::norm(drive_amp / detuning);
}

ResidualRates residual_rates(const SystemParams& p) {
  ResidualRates r;
  for (int j = 0; j < 3; ++j) {
    const double gamma_c = p.kappa[j] > 0.0 ? correction_rate(p.omega_p[j], p.kappa[j]) : 0.0;
    if (!(gamma_c > 0.0)) {
      throw InvalidArgument("correction rate of channel " + std::to_string(j + 1) + " is zero");
    }
    const double gx = p.gamma_x[j];
    r.gamma_2nd += gx * gx / gamma_c;
    const double chi_jj = p.chi_ab(j, j);
    r.gamma_select += p.kappa[j] * p.omega_p[j] * p.omega_p[j] / (chi_jj * chi_jj + p.kappa[j] * p.kappa[j]);
    r.gamma_sym += gx * std::abs(p.chi_ab.row(j).sum()) / gamma_c;
  }
  return r;
}

std::vector<Operator> bitflip_kraus(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("bit-flip probability must lie in [0, 1]");
  const auto space = qubit_space();
  std::vector<Operator> kraus;
  kraus.push_back(std::sqrt(1.0 - p) * Operator::identity(space));
  for (int j = 0; j < 3; ++j) kraus.push_back(std::sqrt(p / 3.0) * qubit_op(Axis::X, j, space));
  return kraus;
}

DensityMatrix apply_channel(const std::vector<Operator>& kraus, const DensityMatrix& rho) {
  Matrix out = Matrix::Zero(rho.data().rows(), rho.data().cols());
  for (const auto& m : kraus) {
    if (!(m.space() == rho.space())) throw SpaceMismatch("Kraus operator and state spaces differ");
    out += m.data() * rho.data() * m.data().adjoint();
  }
  return DensityMatrix::trusted(rho.space(), std::move(out));
}

Operator dispersive_hamiltonian(const SystemParams& p, const CompositeSpace& space, int resonators) {
  Operator h = Operator::zero(space);
  for (int j = 0; j < resonators; ++j) {
    Operator shift = Operator::zero(space);
    for (int k = 0; k < 3; ++k) shift = shift + (p.chi_ab(j, k) / 2.0) * qubit_op(Axis::Z, k, space);
    h = h - mode_op(number(space.dim(kQubits + j)), j, space) * shift;
  }
  return h;
}

Operator pump_hamiltonian(const SystemParams& p, const CompositeSpace& space, int resonators) {
  Operator h = Operator::zero(space);
  for (int j = 0; j < resonators; ++j) {
    const Operator a = mode_op(annihilate(space.dim(kQubits + j)), j, space);
    const Operator sp_a = qubit_op(Axis::Plus, j, space) * a;
    const Operator sm_a = qubit_op(Axis::Minus, j, space) * a;
    h = h + (p.omega_p[j] / 2.0) * (sp_a + sp_a.adjoint() + sm_a + sm_a.adjoint());
  }
  return h;
}

Operator kerr_hamiltonian(const SystemParams& p, const CompositeSpace& space, int resonators) {
  Operator h = Operator::zero(space);
  std::vector<Operator> a;
  std::vector<Operator> n;
  for (int j = 0; j < resonators; ++j) {
    a.push_back(mode_op(annihilate(space.dim(kQubits + j)), j, space));
    n.push_back(mode_op(number(space.dim(kQubits + j)), j, space));
  }
  for (int j = 0; j < resonators; ++j) {
    const Operator ad = a[j].adjoint();
    h = h - p.chi_aa(j, j) * (ad * ad * a[j] * a[j]);
    for (int k = 0; k < resonators; ++k) {
      if (k != j) h = h - p.chi_aa(j, k) * (n[j] * n[k]);
    }
  }
  return h;
}

Operator transfer_hamiltonian(const SystemParams& p, const CompositeSpace& space) {
  const Operator t12 = qubit_op(Axis::Plus, 0, space) * qubit_op(Axis::Minus, 1, space);
  const Operator t23 = qubit_op(Axis::Plus, 1, space) * qubit_op(Axis::Minus, 2, space);
  return p.g12 * (t12 + t12.adjoint()) + p.g23 * (t23 + t23.adjoint());
}

namespace {

std::vector<Collapse> flip_collapses(const SystemParams& p, const CompositeSpace& space, int qubits) {
  std::vector<Collapse> out;
  for (int j = 0; j < qubits; ++j) {
    out.push_back({qubit_op(Axis::X, j, space), p.gamma_x[j] / 2.0,
                   "flip" + std::to_string(j + 1)});
  }
  return out;
}

void add_size_note(LindbladModel& model) {
  const int d = model.space().total_dim();
  if (d > kDenseExponentialMaxDim) {
    model.add_note("Hilbert dimension " + std::to_string(d) + " exceeds the dense-exponential guard (" +
                   std::to_string(kDenseExponentialMaxDim) + "); integration uses rk4");
  }
}

}  // namespace

LindbladModel build_single_qubit_full(const SystemParams& p) {
  check_ranges(p);
  const auto space = joint_space(1, p.n_levels);
  const Operator h = dispersive_hamiltonian(p, space, 1) + pump_hamiltonian(p, space, 1);
  std::vector<Collapse> c;
  c.push_back({mode_op(annihilate(p.n_levels), 0, space), p.kappa[0], "decay1"});
  c.push_back({qubit_op(Axis::X, 0, space), p.gamma_x[0] / 2.0, "flip1"});
  LindbladModel model(space, h, std::move(c), "single-qubit correction, one resonator");
  add_size_note(model);
  return model;
}

LindbladModel build_single_qubit_reduced(const SystemParams& p) {
  check_ranges(p);
  const auto space = qubit_space();
  std::vector<Collapse> c;
  c.push_back({correction_operator(1, space), correction_rate(p.omega_p[0], p.kappa[0]), "correct1"});
  c.push_back({qubit_op(Axis::X, 0, space), p.gamma_x[0] / 2.0, "flip1"});
  return LindbladModel(space, Operator::zero(space), std::move(c),
                       "single-qubit correction, resonator eliminated");
}

LindbladModel build_three_qubit_reduced(const SystemParams& p) {
  check_ranges(p);
  const auto space = qubit_space();
  std::vector<Collapse> c;
  for (int j = 0; j < 3; ++j) {
    c.push_back({correction_operator(j + 1, space), correction_rate(p.omega_p[j], p.kappa[j]),
                 "correct" + std::to_string(j + 1)});
    c.push_back({qubit_op(Axis::X, j, space), p.gamma_x[j] / 2.0, "flip" + std::to_string(j + 1)});
  }
  return LindbladModel(space, Operator::zero(space), std::move(c),
                       "three-qubit correction, resonators eliminated");
}

LindbladModel build_three_resonator_full(const SystemParams& p) {
  check_ranges(p);
  const auto space = joint_space(3, p.n_levels);
  const Operator h = dispersive_hamiltonian(p, space, 3) + pump_hamiltonian(p, space, 3) +
                     kerr_hamiltonian(p, space, 3);
  auto c = flip_collapses(p, space, 3);
  for (int j = 0; j < 3; ++j) {
    c.push_back({mode_op(annihilate(p.n_levels), j, space), p.kappa[j], "decay" + std::to_string(j + 1)});
  }
  LindbladModel model(space, h, std::move(c), "three-qubit correction, three resonators");
  add_size_note(model);
  return model;
}

LindbladModel build_single_resonator(const SystemParams& p) {
  check_ranges(p);
  const auto space = joint_space(1, p.n_levels);
  const Operator h = dispersive_hamiltonian(p, space, 1) + pump_hamiltonian(p, space, 1) +
                     transfer_hamiltonian(p, space);
  auto c = flip_collapses(p, space, 3);
  c.push_back({mode_op(annihilate(p.n_levels), 0, space), p.kappa[0], "decay1"});
  LindbladModel model(space, h, std::move(c), "three-qubit correction, one resonator with transfers");
  add_size_note(model);
  return model;
}

LindbladModel build_uncorrected(const SystemParams& p) {
  check_ranges(p);
  const auto space = qubit_space();
  return LindbladModel(space, Operator::zero(space), flip_collapses(p, space, 3),
                       "three qubits, bit flips only");
}

SystemParams permute_labels(const SystemParams& p, const std::array<int, 3>& perm) {
  std::array<bool, 3> seen{};
  for (int v : perm) {
    if (v < 0 || v > 2 || seen[v]) throw InvalidArgument("permutation must be a rearrangement of 0, 1, 2");
    seen[v] = true;
  }
  SystemParams q = p;
  for (int j = 0; j < 3; ++j) {
    q.kappa[perm[j]] = p.kappa[j];
    q.gamma_x[perm[j]] = p.gamma_x[j];
    q.omega_p[perm[j]] = p.omega_p[j];
    for (int k = 0; k < 3; ++k) {
      q.chi_ab(perm[j], perm[k]) = p.chi_ab(j, k);
      q.chi_aa(perm[j], perm[k]) = p.chi_aa(j, k);
      q.chi_bb(perm[j], perm[k]) = p.chi_bb(j, k);
    }
  }
  if (p.bare_freqs) {
    for (int j = 0; j < 3; ++j) {
      q.bare_freqs->resonator[perm[j]] = p.bare_freqs->resonator[j];
      q.bare_freqs->qubit[perm[j]] = p.bare_freqs->qubit[j];
    }
  }
  return q;
}

}  // namespace aqec::models
