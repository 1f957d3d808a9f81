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

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "aqec/hilbert.hpp"

namespace aqec {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

struct Collapse {
  Operator op;
  double rate = 0.0;
  std::string label;
};

/// drho/dt = -i[H, rho] + sum_k rate_k D[op_k](rho), H in angular-frequency units.
class LindbladModel {
 public:
  /// Throws InvalidArgument for a non-Hermitian H or a negative rate and
  /// SpaceMismatch when an operator lives on another space.
  LindbladModel(CompositeSpace space, Operator hamiltonian, std::vector<Collapse> collapses,
                std::string description = {});

  const CompositeSpace& space() const noexcept { return space_; }
  const Operator& hamiltonian() const noexcept { return hamiltonian_; }
  const std::vector<Collapse>& collapses() const noexcept { return collapses_; }
  const std::string& description() const noexcept { return description_; }

  /// Free-form notes attached by model builders (e.g. size warnings).
  const std::vector<std::string>& notes() const noexcept { return notes_; }
  void add_note(std::string note) { notes_.push_back(std::move(note)); }

  double max_rate() const;

 private:
  CompositeSpace space_;
  Operator hamiltonian_;
  std::vector<Collapse> collapses_;
  std::string description_;
  std::vector<std::string> notes_;
};

/// D[o](rho) = o rho o^dag - (o^dag o rho + rho o^dag o) / 2.
Matrix dissipator(const Operator& o, const DensityMatrix& rho);

/// Column-stacking vectorization: vec(rho)[i + j*d] = rho(i, j).
Vector vectorize(const Matrix& rho);
Matrix unvectorize(const Vector& v);

/// Sparse d^2 x d^2 generator acting on vectorize(rho).
SparseMatrix liouvillian(const LindbladModel& model);

/// Largest Hilbert-space dimension accepted by the dense step propagator.
inline constexpr int kDenseExponentialMaxDim = 80;

/**
 * exp(L dt) stored block-diagonally.
 *
 * The Liouvillian of every protocol model splits into independent blocks
 * (parity sectors of the qubit-resonator pairs). The blocks are discovered
 * from the sparsity graph of L and exponentiated separately. A propagator
 * built for a given support only holds the blocks that support touches;
 * applying it to a vector with weight elsewhere throws.
 */
class Propagator {
 public:
  Vector apply(const Vector& v) const;
  Matrix to_dense() const;

  double dt() const noexcept { return dt_; }
  int superdim() const noexcept { return static_cast<int>(block_of_.size()); }
  std::size_t num_blocks() const noexcept { return blocks_.size(); }
  std::size_t num_computed_blocks() const;
  std::size_t largest_block() const;

 private:
  friend Propagator step_propagator(const SparseMatrix&, double, const Vector*);

  struct Block {
    std::vector<int> indices;
    Matrix exp;
    bool computed = false;
  };

  double dt_ = 0.0;
  std::vector<Block> blocks_;
  std::vector<int> block_of_;
};

/// Throws PropagatorTooLarge when the Hilbert dimension exceeds kDenseExponentialMaxDim.
Propagator step_propagator(const SparseMatrix& L, double dt, const Vector* support = nullptr);
inline Propagator step_propagator(const SparseMatrix& L, double dt, const Vector& support) {
  return step_propagator(L, dt, &support);
}

enum class Method { Auto, ExpmStep, Rk4 };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

/// Output grid t_k = t0 + k * step, k = 0..intervals.
struct TimeGrid {
  double t0 = 0.0;
  double step = 0.0;
  int intervals = 0;

  static TimeGrid uniform(double horizon, int intervals);
  double time(int k) const { return t0 + k * step; }
  std::vector<double> times() const;
};

struct IntegrationOptions {
  Method method = Method::Auto;
  /// RK4 internal step; defaults to min(0.02 / max|H_ij|, 0.05 / max_k rate_k |o_k|^2).
  std::optional<double> rk4_dt;
  StateTolerances tolerances;
  bool check_positivity = true;
  bool keep_states = true;
  /// Called for every output time, in order, after the invariants pass.
  std::function<void(double, const DensityMatrix&)> observer;
};

struct IntegrationInfo {
  Method method = Method::Auto;
  double output_step = 0.0;
  double internal_dt = 0.0;
  long internal_steps = 0;
  std::size_t propagator_blocks = 0;
  std::size_t propagator_blocks_computed = 0;
  std::size_t largest_block = 0;
  /// Largest max|rho - rho^dag| seen before each recorded state is re-hermitized.
  double max_hermiticity_drift = 0.0;
  std::string model_description;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  IntegrationInfo info;
};

/// |o|^2 is bounded above by the product of the 1- and infinity-norms.
double default_rk4_dt(const LindbladModel& model);

/**
 * Integrate a time-independent Lindblad model on a uniform output grid.
 *
 * ExpmStep applies exp(L * grid.step) once per output interval; Rk4 takes
 * fixed internal steps that divide the output interval and requires
 * dt * max|H_ij| <= 0.1. Auto picks ExpmStep up to kDenseExponentialMaxDim.
 * Every output state is checked against the density-matrix invariants and
 * an IntegrationFailure names the first violation.
 */
Trajectory integrate(const LindbladModel& model, const DensityMatrix& rho0, const TimeGrid& grid,
                     const IntegrationOptions& options = {});

}  // namespace aqec
