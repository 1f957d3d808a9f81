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

#include "aqec/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "aqec/errors.hpp"

namespace aqec {

CompositeSpace::CompositeSpace(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InvalidSpace("composite space needs at least one subsystem");
  for (int d : dims_) {
    if (d < 2) throw InvalidSpace("subsystem dimension " + std::to_string(d) + " < 2");
  }
  strides_.assign(dims_.size(), 1);
  long total = 1;
  for (std::size_t k = dims_.size(); k-- > 0;) {
    strides_[k] = static_cast<int>(total);
    total *= dims_[k];
    if (total > (1L << 24)) throw InvalidSpace("composite space too large");
  }
  total_dim_ = static_cast<int>(total);
}

int CompositeSpace::index_of(std::span<const int> levels) const {
  if (levels.size() != dims_.size()) {
    throw InvalidArgument("expected " + std::to_string(dims_.size()) + " levels, got " +
                          std::to_string(levels.size()));
  }
  int index = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (levels[k] < 0 || levels[k] >= dims_[k]) {
      throw InvalidArgument("level " + std::to_string(levels[k]) + " out of range on site " +
                            std::to_string(k));
    }
    index += levels[k] * strides_[k];
  }
  return index;
}

std::vector<int> CompositeSpace::levels_of(int index) const {
  if (index < 0 || index >= total_dim_) {
    throw InvalidArgument("basis index " + std::to_string(index) + " out of range");
  }
  std::vector<int> levels(dims_.size());
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    levels[k] = index / strides_[k];
    index %= strides_[k];
  }
  return levels;
}

std::string CompositeSpace::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < dims_.size(); ++k) os << (k ? "," : "") << dims_[k];
  os << ']';
  return os.str();
}

CompositeSpace make_space(std::vector<int> dims) { return CompositeSpace(std::move(dims)); }

CompositeSpace tensor(const CompositeSpace& a, const CompositeSpace& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return CompositeSpace(std::move(dims));
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(CompositeSpace space, Matrix data)
    : space_(std::move(space)), data_(std::move(data)) {
  const int n = space_.total_dim();
  if (data_.rows() != n || data_.cols() != n) {
    throw SpaceMismatch("operator matrix is " + std::to_string(data_.rows()) + "x" +
                        std::to_string(data_.cols()) + ", space " + space_.to_string() +
                        " needs " + std::to_string(n));
  }
}

Operator Operator::identity(const CompositeSpace& space) {
  return Operator(space, Matrix::Identity(space.total_dim(), space.total_dim()));
}

Operator Operator::zero(const CompositeSpace& space) {
  return Operator(space, Matrix::Zero(space.total_dim(), space.total_dim()));
}

bool Operator::is_hermitian(double tol) const { return max_abs(data_ - data_.adjoint()) <= tol; }

Operator Operator::adjoint() const { return Operator(space_, data_.adjoint()); }

namespace {

void require_same_space(const CompositeSpace& a, const CompositeSpace& b, const char* what) {
  if (!(a == b)) {
    throw SpaceMismatch(std::string(what) + ": space " + a.to_string() + " vs " + b.to_string());
  }
}

}  // namespace

Operator operator+(const Operator& a, const Operator& b) {
  require_same_space(a.space(), b.space(), "add");
  return Operator(a.space(), a.data() + b.data());
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_space(a.space(), b.space(), "subtract");
  return Operator(a.space(), a.data() - b.data());
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_space(a.space(), b.space(), "multiply");
  return Operator(a.space(), a.data() * b.data());
}

Operator operator*(Complex s, const Operator& a) { return Operator(a.space(), s * a.data()); }
Operator operator*(const Operator& a, Complex s) { return s * a; }

Operator commutator(const Operator& a, const Operator& b) {
  require_same_space(a.space(), b.space(), "commutator");
  return Operator(a.space(), a.data() * b.data() - b.data() * a.data());
}

Operator tensor(const Operator& a, const Operator& b) {
  return Operator(tensor(a.space(), b.space()),
                  Eigen::kroneckerProduct(a.data(), b.data()).eval());
}

Operator sigma(Axis axis) {
  const CompositeSpace qubit({2});
  const Complex i(0.0, 1.0);
  Matrix m = Matrix::Zero(2, 2);
  switch (axis) {
    case Axis::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Axis::Y:
      m(0, 1) = i;
      m(1, 0) = -i;
      break;
    case Axis::Z:
      m(0, 0) = -1.0;
      m(1, 1) = 1.0;
      break;
    case Axis::Plus:
      m(1, 0) = 1.0;
      break;
    case Axis::Minus:
      m(0, 1) = 1.0;
      break;
  }
  return Operator(qubit, std::move(m));
}

Operator annihilate(int n_levels) {
  if (n_levels < 2) throw InvalidSpace("bosonic mode needs n_levels >= 2");
  Matrix m = Matrix::Zero(n_levels, n_levels);
  for (int n = 1; n < n_levels; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(CompositeSpace({n_levels}), std::move(m));
}

Operator create(int n_levels) { return annihilate(n_levels).adjoint(); }

Operator number(int n_levels) {
  if (n_levels < 2) throw InvalidSpace("bosonic mode needs n_levels >= 2");
  Matrix m = Matrix::Zero(n_levels, n_levels);
  for (int n = 0; n < n_levels; ++n) m(n, n) = static_cast<double>(n);
  return Operator(CompositeSpace({n_levels}), std::move(m));
}

Operator embed(const Operator& local, std::size_t site, const CompositeSpace& space) {
  if (site >= space.num_sites()) {
    throw InvalidArgument("site " + std::to_string(site) + " outside space " + space.to_string());
  }
  if (local.space().total_dim() != space.dim(site)) {
    throw SpaceMismatch("local operator of dimension " +
                        std::to_string(local.space().total_dim()) + " embedded on site " +
                        std::to_string(site) + " of dimension " +
                        std::to_string(space.dim(site)));
  }
  long left = 1;
  long right = 1;
  for (std::size_t k = 0; k < site; ++k) left *= space.dim(k);
  for (std::size_t k = site + 1; k < space.num_sites(); ++k) right *= space.dim(k);
  const Matrix inner = Eigen::kroneckerProduct(local.data(), Matrix::Identity(right, right)).eval();
  return Operator(space, Eigen::kroneckerProduct(Matrix::Identity(left, left), inner).eval());
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(CompositeSpace space, Vector amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != space_.total_dim()) {
    throw SpaceMismatch("state vector of length " + std::to_string(amplitudes_.size()) +
                        " on space " + space_.to_string());
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw InvalidState("state vector norm " + std::to_string(norm) + " != 1");
  }
}

StateVector StateVector::normalized(CompositeSpace space, Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw InvalidState("cannot normalize a zero vector");
  amplitudes /= norm;
  return StateVector(std::move(space), std::move(amplitudes));
}

StateVector StateVector::basis(const CompositeSpace& space, std::span<const int> levels) {
  Vector v = Vector::Zero(space.total_dim());
  v(space.index_of(levels)) = 1.0;
  return StateVector(space, std::move(v));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  Vector v = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes()).eval();
  return StateVector::normalized(tensor(a.space(), b.space()), std::move(v));
}

Complex inner(const StateVector& bra, const StateVector& ket) {
  require_same_space(bra.space(), ket.space(), "inner product");
  return bra.amplitudes().dot(ket.amplitudes());
}

Operator projector(std::span<const StateVector> states) {
  if (states.empty()) throw InvalidArgument("projector needs at least one state");
  const CompositeSpace& space = states.front().space();
  for (std::size_t a = 0; a < states.size(); ++a) {
    require_same_space(space, states[a].space(), "projector");
    for (std::size_t b = a; b < states.size(); ++b) {
      const Complex overlap = inner(states[a], states[b]);
      const double expected = a == b ? 1.0 : 0.0;
      if (std::abs(overlap - expected) > 1e-10) {
        throw InvalidArgument("projector states " + std::to_string(a) + " and " +
                              std::to_string(b) + " are not orthonormal");
      }
    }
  }
  Matrix p = Matrix::Zero(space.total_dim(), space.total_dim());
  for (const auto& s : states) p += s.amplitudes() * s.amplitudes().adjoint();
  return Operator(space, std::move(p));
}

Operator projector(std::initializer_list<StateVector> states) {
  return projector(std::span<const StateVector>(states.begin(), states.size()));
}

// ---------------------------------------------------------------------------
// DensityMatrix

namespace {
std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}
}  // namespace

std::optional<StateViolation> find_violation(const Matrix& rho, const StateTolerances& tol,
                                             bool check_positivity) {
  const double herm = max_abs(rho - rho.adjoint());
  if (!(herm <= tol.hermiticity)) {
    return StateViolation{"hermiticity", "max|rho - rho^dag| = " + sci(herm)};
  }
  const Complex tr = rho.trace();
  const double trace_err = std::abs(tr - 1.0);
  if (!(trace_err <= tol.trace)) {
    return StateViolation{"trace", "|tr(rho) - 1| = " + sci(trace_err)};
  }
  if (check_positivity) {
    const Matrix h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (!(min_eig >= -tol.positivity)) {
      return StateViolation{"positivity", "min eigenvalue = " + sci(min_eig)};
    }
  }
  return std::nullopt;
}

DensityMatrix::DensityMatrix(CompositeSpace space, Matrix data, NoCheck)
    : space_(std::move(space)), data_(std::move(data)) {
  const int n = space_.total_dim();
  if (data_.rows() != n || data_.cols() != n) {
    throw SpaceMismatch("density matrix shape does not match space " + space_.to_string());
  }
}

DensityMatrix::DensityMatrix(CompositeSpace space, Matrix data)
    : DensityMatrix(std::move(space), std::move(data), NoCheck{}) {
  if (auto v = find_violation(data_)) {
    throw InvalidState("density matrix " + v->invariant + " violated: " + v->detail);
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(psi.space(), psi.amplitudes() * psi.amplitudes().adjoint(), NoCheck{});
}

DensityMatrix DensityMatrix::maximally_mixed(const CompositeSpace& space) {
  const int n = space.total_dim();
  return DensityMatrix(space, Matrix::Identity(n, n) / static_cast<double>(n), NoCheck{});
}

DensityMatrix DensityMatrix::trusted(CompositeSpace space, Matrix data) {
  return DensityMatrix(std::move(space), std::move(data), NoCheck{});
}

double DensityMatrix::purity() const {
  // tr(rho^2) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho.
  return (data_.cwiseProduct(data_.transpose())).sum().real();
}

Complex DensityMatrix::expectation(const Operator& op) const {
  require_same_space(space_, op.space(), "expectation");
  return (op.data() * data_).trace();
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::trusted(tensor(a.space(), b.space()),
                                Eigen::kroneckerProduct(a.data(), b.data()).eval());
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const CompositeSpace& space = rho.space();
  if (keep.empty()) throw InvalidArgument("partial trace must keep at least one site");
  std::vector<bool> kept(space.num_sites(), false);
  std::vector<int> kept_dims;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] >= space.num_sites()) throw InvalidArgument("partial trace site out of range");
    if (kept[keep[k]]) throw InvalidArgument("partial trace site listed twice");
    if (k > 0 && keep[k] < keep[k - 1]) throw InvalidArgument("partial trace sites must be sorted");
    kept[keep[k]] = true;
    kept_dims.push_back(space.dim(keep[k]));
  }
  if (keep.size() == space.num_sites()) return rho;

  CompositeSpace reduced_space(kept_dims);
  const int n = space.total_dim();
  // Split every full index into (kept index, traced index).
  std::vector<int> kept_index(n);
  std::vector<int> traced_index(n);
  for (int idx = 0; idx < n; ++idx) {
    const auto levels = space.levels_of(idx);
    int ki = 0;
    int ti = 0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
      if (kept[k]) {
        ki = ki * space.dim(k) + levels[k];
      } else {
        ti = ti * space.dim(k) + levels[k];
      }
    }
    kept_index[idx] = ki;
    traced_index[idx] = ti;
  }
  const int m = reduced_space.total_dim();
  Matrix out = Matrix::Zero(m, m);
  const Matrix& data = rho.data();
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) {
      if (traced_index[row] == traced_index[col]) {
        out(kept_index[row], kept_index[col]) += data(row, col);
      }
    }
  }
  return DensityMatrix::trusted(std::move(reduced_space), std::move(out));
}

}  // namespace aqec
