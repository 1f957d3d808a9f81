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

#include "aqec/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

#include "aqec/errors.hpp"

namespace aqec {

LindbladModel::LindbladModel(CompositeSpace space, Operator hamiltonian,
                             std::vector<Collapse> collapses, std::string description)
    : space_(std::move(space)),
      hamiltonian_(std::move(hamiltonian)),
      collapses_(std::move(collapses)),
      description_(std::move(description)) {
  if (!(hamiltonian_.space() == space_)) {
    throw SpaceMismatch("hamiltonian space " + hamiltonian_.space().to_string() +
                        " differs from model space " + space_.to_string());
  }
  if (!hamiltonian_.is_hermitian(1e-10)) {
    throw InvalidArgument("hamiltonian is not Hermitian");
  }
  for (const auto& c : collapses_) {
    if (!(c.op.space() == space_)) {
      throw SpaceMismatch("collapse operator '" + c.label + "' lives on another space");
    }
    if (!(c.rate >= 0.0) || !std::isfinite(c.rate)) {
      throw InvalidArgument("collapse rate for '" + c.label + "' must be finite and >= 0");
    }
  }
}

double LindbladModel::max_rate() const {
  double r = 0.0;
  for (const auto& c : collapses_) r = std::max(r, c.rate);
  return r;
}

Matrix dissipator(const Operator& o, const DensityMatrix& rho) {
  if (!(o.space() == rho.space())) throw SpaceMismatch("dissipator: operator and state spaces differ");
  const Matrix& a = o.data();
  const Matrix& r = rho.data();
  const Matrix ada = a.adjoint() * a;
  return a * r * a.adjoint() - 0.5 * (ada * r + r * ada);
}

Vector vectorize(const Matrix& rho) {
  return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix unvectorize(const Vector& v) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw SpaceMismatch("vector length is not a perfect square");
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

namespace {

using Triplet = Eigen::Triplet<Complex>;

struct Entry {
  int row;
  int col;
  Complex value;
};

std::vector<Entry> nonzeros(const Matrix& m) {
  std::vector<Entry> out;
  for (int c = 0; c < m.cols(); ++c) {
    for (int r = 0; r < m.rows(); ++r) {
      if (m(r, c) != Complex(0.0, 0.0)) out.push_back({r, c, m(r, c)});
    }
  }
  return out;
}

// Appends scale * (A kron B) for d x d factors.
void add_kron(std::vector<Triplet>& out, const std::vector<Entry>& a, const std::vector<Entry>& b,
              int d, Complex scale) {
  for (const auto& ea : a) {
    for (const auto& eb : b) {
      out.emplace_back(ea.row * d + eb.row, ea.col * d + eb.col, scale * ea.value * eb.value);
    }
  }
}

std::vector<Entry> identity_entries(int d) {
  std::vector<Entry> out;
  out.reserve(d);
  for (int i = 0; i < d; ++i) out.push_back({i, i, Complex(1.0, 0.0)});
  return out;
}

}  // namespace

SparseMatrix liouvillian(const LindbladModel& model) {
  const int d = model.space().total_dim();
  const Complex i(0.0, 1.0);
  const auto id = identity_entries(d);
  std::vector<Triplet> triplets;

  // -i (I kron H - H^T kron I)
  const Matrix& h = model.hamiltonian().data();
  const auto h_entries = nonzeros(h);
  const auto ht_entries = nonzeros(h.transpose());
  add_kron(triplets, id, h_entries, d, -i);
  add_kron(triplets, ht_entries, id, d, i);

  for (const auto& c : model.collapses()) {
    if (c.rate == 0.0) continue;
    const Matrix& o = c.op.data();
    const Matrix ada = o.adjoint() * o;
    add_kron(triplets, nonzeros(o.conjugate()), nonzeros(o), d, c.rate);
    add_kron(triplets, id, nonzeros(ada), d, -0.5 * c.rate);
    add_kron(triplets, nonzeros(ada.transpose()), id, d, -0.5 * c.rate);
  }

  SparseMatrix L(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
  L.setFromTriplets(triplets.begin(), triplets.end());
  L.prune(Complex(0.0, 0.0));
  L.makeCompressed();
  return L;
}

// ---------------------------------------------------------------------------
// Propagator

namespace {

struct DisjointSets {
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;
  }

  std::vector<int> parent;
};

}  // namespace

Propagator step_propagator(const SparseMatrix& L, double dt, const Vector* support) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("propagator step must be > 0");
  if (L.rows() != L.cols()) throw SpaceMismatch("superoperator must be square");
  const int n = static_cast<int>(L.rows());
  const auto d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n) throw SpaceMismatch("superoperator dimension is not a square");
  if (d > kDenseExponentialMaxDim) {
    throw PropagatorTooLarge("Hilbert dimension " + std::to_string(d) +
                             " exceeds the dense-exponential guard of " +
                             std::to_string(kDenseExponentialMaxDim) + "; use the ODE path (rk4)");
  }
  if (support != nullptr && support->size() != n) {
    throw SpaceMismatch("propagator support vector has the wrong length");
  }

  DisjointSets sets(n);
  for (int k = 0; k < L.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(L, k); it; ++it) {
      sets.unite(static_cast<int>(it.row()), static_cast<int>(it.col()));
    }
  }

  Propagator p;
  p.dt_ = dt;
  p.block_of_.assign(n, -1);
  std::vector<int> block_of_root(n, -1);
  for (int idx = 0; idx < n; ++idx) {
    const int root = sets.find(idx);
    if (block_of_root[root] < 0) {
      block_of_root[root] = static_cast<int>(p.blocks_.size());
      p.blocks_.emplace_back();
    }
    const int b = block_of_root[root];
    p.block_of_[idx] = b;
    p.blocks_[b].indices.push_back(idx);
  }

  std::vector<bool> needed(p.blocks_.size(), support == nullptr);
  if (support != nullptr) {
    for (int idx = 0; idx < n; ++idx) {
      if ((*support)(idx) != Complex(0.0, 0.0)) needed[p.block_of_[idx]] = true;
    }
  }

  std::vector<int> local(n, -1);
  for (std::size_t b = 0; b < p.blocks_.size(); ++b) {
    auto& block = p.blocks_[b];
    if (!needed[b]) continue;
    const auto m = static_cast<Eigen::Index>(block.indices.size());
    for (Eigen::Index k = 0; k < m; ++k) local[block.indices[k]] = static_cast<int>(k);
    Matrix dense = Matrix::Zero(m, m);
    for (int col : block.indices) {
      for (SparseMatrix::InnerIterator it(L, col); it; ++it) {
        dense(local[it.row()], local[col]) = it.value() * dt;
      }
    }
    block.exp = dense.exp();
    block.computed = true;
  }
  return p;
}

Vector Propagator::apply(const Vector& v) const {
  if (v.size() != superdim()) throw SpaceMismatch("propagator applied to a vector of wrong size");
  Vector out = Vector::Zero(v.size());
  for (const auto& block : blocks_) {
    const auto m = static_cast<Eigen::Index>(block.indices.size());
    Vector local(m);
    bool any = false;
    for (Eigen::Index k = 0; k < m; ++k) {
      local(k) = v(block.indices[k]);
      any = any || local(k) != Complex(0.0, 0.0);
    }
    if (!any) continue;
    if (!block.computed) {
      throw InvalidArgument("vector has weight in a propagator block that was not computed");
    }
    const Vector result = block.exp * local;
    for (Eigen::Index k = 0; k < m; ++k) out(block.indices[k]) = result(k);
  }
  return out;
}

Matrix Propagator::to_dense() const {
  Matrix out = Matrix::Zero(superdim(), superdim());
  for (const auto& block : blocks_) {
    if (!block.computed) throw InvalidArgument("propagator has uncomputed blocks");
    const auto m = static_cast<Eigen::Index>(block.indices.size());
    for (Eigen::Index c = 0; c < m; ++c) {
      for (Eigen::Index r = 0; r < m; ++r) out(block.indices[r], block.indices[c]) = block.exp(r, c);
    }
  }
  return out;
}

std::size_t Propagator::num_computed_blocks() const {
  return static_cast<std::size_t>(
      std::count_if(blocks_.begin(), blocks_.end(), [](const Block& b) { return b.computed; }));
}

std::size_t Propagator::largest_block() const {
  std::size_t m = 0;
  for (const auto& b : blocks_) m = std::max(m, b.indices.size());
  return m;
}

// ---------------------------------------------------------------------------
// Integration

std::string to_string(Method method) {
  switch (method) {
    case Method::Auto:
      return "auto";
    case Method::ExpmStep:
      return "expm";
    case Method::Rk4:
      return "rk4";
  }
  return "auto";
}

Method method_from_string(const std::string& name) {
  if (name == "auto") return Method::Auto;
  if (name == "expm" || name == "expm-step") return Method::ExpmStep;
  if (name == "rk4") return Method::Rk4;
  throw InvalidArgument("unknown integration method '" + name + "' (auto, expm, rk4)");
}

TimeGrid TimeGrid::uniform(double horizon, int intervals) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("horizon must be > 0");
  if (intervals < 1) throw InvalidArgument("time grid needs at least one interval");
  return TimeGrid{0.0, horizon / intervals, intervals};
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> out(static_cast<std::size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) out[k] = time(k);
  return out;
}

double default_rk4_dt(const LindbladModel& model) {
  const double hmax = max_abs(model.hamiltonian().data());
  // Dissipative scale r ||o||^2, with ||o||_2^2 bounded by ||o||_1 ||o||_inf.
  double rmax = 0.0;
  for (const auto& c : model.collapses()) {
    const Matrix& o = c.op.data();
    const double norm_sq = o.cwiseAbs().colwise().sum().maxCoeff() * o.cwiseAbs().rowwise().sum().maxCoeff();
    rmax = std::max(rmax, c.rate * norm_sq);
  }
  double dt = std::numeric_limits<double>::infinity();
  if (hmax > 0.0) dt = std::min(dt, 0.02 / hmax);
  if (rmax > 0.0) dt = std::min(dt, 0.05 / rmax);
  return dt;
}

namespace {

class Recorder {
 public:
  Recorder(const CompositeSpace& space, const IntegrationOptions& options, Trajectory& traj)
      : space_(space), options_(options), traj_(traj) {}

  // Checks the raw state, then projects it back onto Hermitian matrices so
  // that rounding drift does not accumulate over long stiff runs.
  void record(double t, Vector& v) {
    Matrix rho = unvectorize(v);
    if (auto violation = find_violation(rho, options_.tolerances, options_.check_positivity)) {
      throw IntegrationFailure(violation->invariant, t, violation->detail);
    }
    traj_.info.max_hermiticity_drift = std::max(traj_.info.max_hermiticity_drift, max_abs(rho - rho.adjoint()));
    rho = (0.5 * (rho + rho.adjoint())).eval();
    v = vectorize(rho);
    traj_.times.push_back(t);
    auto state = DensityMatrix::trusted(space_, std::move(rho));
    if (options_.observer) options_.observer(t, state);
    if (options_.keep_states) traj_.states.push_back(std::move(state));
  }

 private:
  const CompositeSpace& space_;
  const IntegrationOptions& options_;
  Trajectory& traj_;
};

}  // namespace

Trajectory integrate(const LindbladModel& model, const DensityMatrix& rho0, const TimeGrid& grid,
                     const IntegrationOptions& options) {
  if (!(rho0.space() == model.space())) {
    throw SpaceMismatch("initial state space " + rho0.space().to_string() +
                        " differs from model space " + model.space().to_string());
  }
  if (!(grid.step > 0.0) || grid.intervals < 1) throw InvalidArgument("invalid time grid");

  Method method = options.method;
  if (method == Method::Auto) {
    method = model.space().total_dim() <= kDenseExponentialMaxDim ? Method::ExpmStep : Method::Rk4;
  }

  Trajectory traj;
  traj.info.method = method;
  traj.info.output_step = grid.step;
  traj.info.model_description = model.description();
  traj.times.reserve(static_cast<std::size_t>(grid.intervals) + 1);
  if (options.keep_states) traj.states.reserve(static_cast<std::size_t>(grid.intervals) + 1);

  Recorder recorder(model.space(), options, traj);
  const SparseMatrix L = liouvillian(model);
  Vector v = vectorize(rho0.data());
  recorder.record(grid.time(0), v);

  if (method == Method::ExpmStep) {
    const Propagator prop = step_propagator(L, grid.step, v);
    traj.info.internal_dt = grid.step;
    traj.info.propagator_blocks = prop.num_blocks();
    traj.info.propagator_blocks_computed = prop.num_computed_blocks();
    traj.info.largest_block = prop.largest_block();
    for (int k = 1; k <= grid.intervals; ++k) {
      v = prop.apply(v);
      ++traj.info.internal_steps;
      recorder.record(grid.time(k), v);
    }
    return traj;
  }

  const double hmax = max_abs(model.hamiltonian().data());
  double dt_target = options.rk4_dt.value_or(default_rk4_dt(model));
  if (!(dt_target > 0.0)) throw InvalidArgument("rk4 step must be > 0");
  if (hmax > 0.0 && dt_target * hmax > 0.1 * (1.0 + 1e-12)) {
    throw InvalidArgument("rk4 step " + std::to_string(dt_target) +
                          " violates the stability guard dt * max|H_ij| <= 0.1");
  }
  const long substeps = std::max(1L, static_cast<long>(std::ceil(grid.step / dt_target - 1e-9)));
  const double dt = grid.step / static_cast<double>(substeps);
  traj.info.internal_dt = dt;

  Vector k1, k2, k3, k4;
  for (int k = 1; k <= grid.intervals; ++k) {
    for (long s = 0; s < substeps; ++s) {
      k1 = L * v;
      k2 = L * (v + (0.5 * dt) * k1);
      k3 = L * (v + (0.5 * dt) * k2);
      k4 = L * (v + dt * k3);
      v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      ++traj.info.internal_steps;
    }
    recorder.record(grid.time(k), v);
  }
  return traj;
}

}  // namespace aqec
