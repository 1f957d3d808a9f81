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

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace aqec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/**
 * Tensor product of finite-dimensional subsystems.
 *
 * Basis indexing is row-major: the first listed subsystem is the
 * slowest-varying digit. A product state |l0 l1 ... l{n-1}> has index
 * sum_k l_k * stride_k with stride_{n-1} = 1.
 *
 * Every protocol space orders qubits 1, 2, 3 first and resonators after.
 */
class CompositeSpace {
 public:
  /// Throws InvalidSpace on an empty list or any dimension below 2.
  explicit CompositeSpace(std::vector<int> dims);

  const std::vector<int>& dims() const noexcept { return dims_; }
  int dim(std::size_t site) const { return dims_.at(site); }
  std::size_t num_sites() const noexcept { return dims_.size(); }
  int total_dim() const noexcept { return total_dim_; }

  int index_of(std::span<const int> levels) const;
  std::vector<int> levels_of(int index) const;

  friend bool operator==(const CompositeSpace& a, const CompositeSpace& b) {
    return a.dims_ == b.dims_;
  }

  std::string to_string() const;

 private:
  std::vector<int> dims_;
  std::vector<int> strides_;
  int total_dim_ = 0;
};

CompositeSpace make_space(std::vector<int> dims);

/// Concatenation of the factor lists of two spaces.
CompositeSpace tensor(const CompositeSpace& a, const CompositeSpace& b);

/// Square complex matrix tagged with the space it acts on.
class Operator {
 public:
  /// Throws SpaceMismatch if the matrix is not total_dim x total_dim.
  Operator(CompositeSpace space, Matrix data);

  static Operator identity(const CompositeSpace& space);
  static Operator zero(const CompositeSpace& space);

  const CompositeSpace& space() const noexcept { return space_; }
  const Matrix& data() const noexcept { return data_; }
  Complex operator()(int row, int col) const { return data_(row, col); }

  bool is_hermitian(double tol = 1e-10) const;
  Operator adjoint() const;

 private:
  CompositeSpace space_;
  Matrix data_;
};

Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(Complex s, const Operator& a);
Operator operator*(const Operator& a, Complex s);

inline Operator scale(const Operator& a, Complex s) { return s * a; }
inline Operator adjoint(const Operator& a) { return a.adjoint(); }
Operator commutator(const Operator& a, const Operator& b);
Operator tensor(const Operator& a, const Operator& b);

/// Largest entry magnitude.
double max_abs(const Matrix& m);

enum class Axis { X, Y, Z, Plus, Minus };

/**
 * Pauli and ladder matrices of a two-level system in the basis (|0>, |1>),
 * |1> excited: sigma_z|1> = +|1>, sigma_+|0> = |1>. The set satisfies
 * s_i s_j = delta_ij I + i eps_ijk s_k, which fixes
 * sigma_y = [[0, i], [-i, 0]] in this basis order.
 */
Operator sigma(Axis axis);

/// Truncated bosonic lowering operator on n_levels Fock states.
Operator annihilate(int n_levels);
Operator create(int n_levels);
Operator number(int n_levels);

/// Identity on every factor except `site`, where `local` acts.
Operator embed(const Operator& local, std::size_t site, const CompositeSpace& space);

class StateVector {
 public:
  /// Requires unit 2-norm within 1e-12.
  StateVector(CompositeSpace space, Vector amplitudes);

  static StateVector normalized(CompositeSpace space, Vector amplitudes);
  static StateVector basis(const CompositeSpace& space, std::span<const int> levels);
  static StateVector basis(const CompositeSpace& space, std::initializer_list<int> levels) {
    return basis(space, std::span<const int>(levels.begin(), levels.size()));
  }

  const CompositeSpace& space() const noexcept { return space_; }
  const Vector& amplitudes() const noexcept { return amplitudes_; }

 private:
  CompositeSpace space_;
  Vector amplitudes_;
};

StateVector tensor(const StateVector& a, const StateVector& b);
Complex inner(const StateVector& bra, const StateVector& ket);

/// Orthogonal projector onto span(states); states must be orthonormal within 1e-10.
Operator projector(std::span<const StateVector> states);
Operator projector(std::initializer_list<StateVector> states);

struct StateTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-9;
  double positivity = 1e-8;
};

struct StateViolation {
  std::string invariant;
  std::string detail;
};

/// First violated density-matrix invariant (hermiticity, trace, positivity), if any.
std::optional<StateViolation> find_violation(const Matrix& rho,
                                             const StateTolerances& tol = {},
                                             bool check_positivity = true);

class DensityMatrix {
 public:
  /// Validates hermiticity, unit trace and positivity; throws InvalidState.
  DensityMatrix(CompositeSpace space, Matrix data);

  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(const CompositeSpace& space);
  /// Skips validation; for callers that have already checked the invariants.
  static DensityMatrix trusted(CompositeSpace space, Matrix data);

  const CompositeSpace& space() const noexcept { return space_; }
  const Matrix& data() const noexcept { return data_; }
  Complex operator()(int row, int col) const { return data_(row, col); }

  Complex trace() const { return data_.trace(); }
  double purity() const;
  Complex expectation(const Operator& op) const;

 private:
  struct NoCheck {};
  DensityMatrix(CompositeSpace space, Matrix data, NoCheck);

  CompositeSpace space_;
  Matrix data_;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced state on the listed sites (kept in their original order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);

}  // namespace aqec
