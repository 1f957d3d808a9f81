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


// Reference implementations for tests. Everything here is written against
// plain Eigen matrices and never calls into the library, so a bug in the
// library cannot hide behind a matching bug in its own oracle.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace aqec::testing {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr C kI{0.0, 1.0};

/// Kronecker product by explicit index arithmetic.
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline Mat kron_all(const std::vector<Mat>& factors) {
  Mat out = Mat::Identity(1, 1);
  for (const Mat& f : factors) out = kron(out, f);
  return out;
}

inline Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
// Basis (|0>, |1>) with |1> excited: sigma_z = diag(-1, +1).
inline Mat pauli_z() {
  Mat m(2, 2);
  m << -1, 0, 0, 1;
  return m;
}
// Fixed by sigma_x sigma_y = i sigma_z.
inline Mat pauli_y() { return -kI * pauli_z() * pauli_x(); }

/// Operator `local` on qubit `k` of an n-qubit register.
inline Mat on_qubit(const Mat& local, int k, int n = 3) {
  std::vector<Mat> f(static_cast<std::size_t>(n), Mat::Identity(2, 2));
  f[static_cast<std::size_t>(k)] = local;
  return kron_all(f);
}

inline Vec basis_vec(int dim, int index) {
  Vec v = Vec::Zero(dim);
  v(index) = 1.0;
  return v;
}

/// (|000> - i e^{i phi} |111>) / sqrt(2)
inline Vec ghz(double phi = 0.0) {
  Vec v = Vec::Zero(8);
  v(0) = 1.0 / std::sqrt(2.0);
  v(7) = -kI * std::exp(kI * phi) / std::sqrt(2.0);
  return v;
}

/// -i[H, rho] + sum_k r_k (L rho L^dag - {L^dag L, rho} / 2), term by term.
inline Mat lindblad_rhs(const Mat& h, const std::vector<std::pair<Mat, double>>& collapses, const Mat& rho) {
  Mat out = -kI * (h * rho - rho * h);
  for (const auto& [l, r] : collapses) {
    const Mat ld = l.adjoint();
    out += r * (l * rho * ld - 0.5 * (ld * l * rho) - 0.5 * (rho * ld * l));
  }
  return out;
}

/// Classical RK4 on the direct right-hand side; tiny steps make it an oracle for small systems.
inline Mat rk4_evolve(const Mat& h, const std::vector<std::pair<Mat, double>>& collapses, Mat rho, double t,
                      int steps) {
  const double dt = t / steps;
  for (int s = 0; s < steps; ++s) {
    const Mat k1 = lindblad_rhs(h, collapses, rho);
    const Mat k2 = lindblad_rhs(h, collapses, rho + 0.5 * dt * k1);
    const Mat k3 = lindblad_rhs(h, collapses, rho + 0.5 * dt * k2);
    const Mat k4 = lindblad_rhs(h, collapses, rho + dt * k3);
    rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

/**
 * Fidelity of the logical state after three independent flip channels of
 * strength gamma_x / 2 each (the solution of (gamma_x / 2) D[sigma_x]),
 * composed one qubit at a time as 8x8 maps.
 */
inline double brute_force_uncorrected(double t, double gamma_x) {
  const double p = 0.5 * (1.0 - std::exp(-gamma_x * t));
  const Vec psi = ghz();
  Mat rho = psi * psi.adjoint();
  for (int k = 0; k < 3; ++k) {
    const Mat x = on_qubit(pauli_x(), k);
    rho = (1.0 - p) * rho + p * x * rho * x;
  }
  return (psi.adjoint() * rho * psi)(0, 0).real();
}

/// Same channel applied as an explicit product of the 64x64 superoperators.
inline double brute_force_uncorrected_superop(double t, double gamma_x) {
  const double p = 0.5 * (1.0 - std::exp(-gamma_x * t));
  Mat total = Mat::Identity(64, 64);
  for (int k = 0; k < 3; ++k) {
    const Mat x = on_qubit(pauli_x(), k);
    // column-stacking: vec(A rho B) = (B^T kron A) vec(rho)
    const Mat s = (1.0 - p) * Mat::Identity(64, 64) + p * kron(x.transpose(), x);
    total = s * total;
  }
  const Vec psi = ghz();
  const Mat rho0 = psi * psi.adjoint();
  const Vec v = total * Eigen::Map<const Vec>(rho0.data(), 64);
  const Mat rho = Eigen::Map<const Mat>(v.data(), 8, 8);
  return (psi.adjoint() * rho * psi)(0, 0).real();
}

/// max over a uniform phi grid of <psi(phi)|rho|psi(phi)>, rho on three qubits.
inline std::pair<double, double> grid_search_phase(const Mat& rho, int points) {
  double best = -1.0;
  double best_phi = 0.0;
  for (int k = 0; k < points; ++k) {
    const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * k / points;
    const Vec psi = ghz(phi);
    const double f = (psi.adjoint() * rho * psi)(0, 0).real();
    if (f > best) {
      best = f;
      best_phi = phi;
    }
  }
  return {best, best_phi};
}

/// Refine a grid maximum by golden-section search on the bracketing cell.
inline double refined_phase_max(const Mat& rho, int points) {
  const auto [f0, phi0] = grid_search_phase(rho, points);
  auto f = [&](double phi) {
    const Vec psi = ghz(phi);
    return (psi.adjoint() * rho * psi)(0, 0).real();
  };
  const double h = 2.0 * std::numbers::pi / points;
  double a = phi0 - h, b = phi0 + h;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (f(c) > f(d)) b = d; else a = c;
  }
  return std::max(f0, f(0.5 * (a + b)));
}

inline Mat random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = C(n(rng), n(rng));
  return 0.5 * (a + a.adjoint());
}

inline Mat random_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = C(n(rng), n(rng));
  return a;
}

/// Random full-rank density matrix G G^dag / tr.
inline Mat random_density(int d, std::mt19937_64& rng) {
  const Mat g = random_matrix(d, rng);
  Mat rho = g * g.adjoint();
  rho /= rho.trace();
  return rho;
}

/// Rabi flopping from |0> under (Omega / 2) sigma_x: excited population.
inline double rabi_excited(double omega, double t) {
  const double s = std::sin(0.5 * omega * t);
  return s * s;
}

}  // namespace aqec::testing
