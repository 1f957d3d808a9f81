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


#include "aqec/fit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "aqec/errors.hpp"

namespace aqec {

namespace {

constexpr double kMaxY = 1.05;
constexpr double kNegativeRateTolerance = 1e-9;

// Residuals r_i = model(t_i) - y_i for y = offset + sign * A e^{-rate t}.
struct ExpFunctor : Eigen::DenseFunctor<double> {
  ExpFunctor(const Eigen::VectorXd& t, const Eigen::VectorXd& y, double offset, double sign)
      : Eigen::DenseFunctor<double>(2, static_cast<int>(t.size())), t_(t), y_(y), offset_(offset), sign_(sign) {}

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
    r = (offset_ + sign_ * x(0) * (-x(1) * t_.array()).exp()).matrix() - y_;
    return 0;
  }

  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& j) const {
    const Eigen::ArrayXd e = (-x(1) * t_.array()).exp();
    j.col(0) = (sign_ * e).matrix();
    j.col(1) = (-sign_ * x(0) * t_.array() * e).matrix();
    return 0;
  }

  Eigen::VectorXd t_;
  Eigen::VectorXd y_;
  double offset_;
  double sign_;
};

double checked_rate(double rate) {
  if (rate < 0.0) {
    if (rate < -kNegativeRateTolerance) {
      std::ostringstream os;
      os << "fit_rate: fitted rate " << rate << " is negative; the series moves away from its asymptote";
      throw FitError(os.str());
    }
    rate = 0.0;
  }
  return rate;
}

// Matrix-pencil fit of g_k = sum_m c_m z_m^k on uniform samples.
FitResult slowest_mode(const std::vector<double>& t, const std::vector<double>& y) {
  constexpr double kRankTolerance = 1e-11;
  constexpr Eigen::Index kMaxOrder = 40;
  const auto n = static_cast<Eigen::Index>(t.size());
  const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
  for (Eigen::Index k = 1; k < n; ++k) {
    const double step = t[static_cast<std::size_t>(k)] - t[static_cast<std::size_t>(k - 1)];
    if (std::abs(step - dt) > 1e-6 * dt) throw FitError("fit_rate: slowest_mode needs uniformly spaced samples");
  }
  Eigen::VectorXd g(n);
  for (Eigen::Index k = 0; k < n; ++k) g(k) = 1.0 - y[static_cast<std::size_t>(k)];
  if (g.cwiseAbs().maxCoeff() == 0.0) throw FitError("fit_rate: series already sits at its asymptote");

  const Eigen::Index pencil = n / 3;
  Eigen::MatrixXd hankel(n - pencil, pencil + 1);
  for (Eigen::Index i = 0; i < n - pencil; ++i) {
    for (Eigen::Index j = 0; j <= pencil; ++j) hankel(i, j) = g(i + j);
  }
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(hankel, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index order = 0;
  while (order < sv.size() && order < kMaxOrder && sv(order) > kRankTolerance * sv(0)) ++order;
  if (order == 0) throw FitError("fit_rate: no exponential content found");

  const Eigen::MatrixXd v = svd.matrixV().leftCols(order);
  const Eigen::MatrixXd shift = v.topRows(pencil).completeOrthogonalDecomposition().solve(v.bottomRows(pencil));
  const Eigen::VectorXcd z = shift.eigenvalues();

  Eigen::MatrixXcd basis(n, order);
  for (Eigen::Index m = 0; m < order; ++m) {
    std::complex<double> p(1.0, 0.0);
    for (Eigen::Index k = 0; k < n; ++k) {
      basis(k, m) = p;
      p *= z(m);
    }
  }
  const Eigen::VectorXcd gc = g.cast<std::complex<double>>();
  const Eigen::VectorXcd c = basis.colPivHouseholderQr().solve(gc);
  if (!c.allFinite() || !z.allFinite()) throw FitError("fit_rate: matrix pencil did not converge");

  const double largest = c.cwiseAbs().maxCoeff();
  double rate = std::numeric_limits<double>::infinity();
  double amplitude = 0.0;
  for (Eigen::Index m = 0; m < order; ++m) {
    if (std::abs(c(m)) < kSignificantMode * largest) continue;
    const double r = -std::log(std::abs(z(m))) / dt;
    if (r < rate) {
      rate = r;
      amplitude = std::abs(c(m));
    }
  }

  FitResult out;
  out.rate = checked_rate(rate);
  out.amplitude = amplitude;
  out.offset = 1.0;
  out.residual_rms = (basis * c - gc).norm() / std::sqrt(static_cast<double>(n));
  out.form = FitForm::SlowestMode;
  return out;
}

}  // namespace

std::string to_string(FitForm form) {
  switch (form) {
    case FitForm::Rise: return "rise";
    case FitForm::Decay: return "decay";
    case FitForm::SlowestMode: return "slowest_mode";
  }
  return "unknown";
}

FitForm fit_form_from_string(const std::string& name) {
  if (name == "rise") return FitForm::Rise;
  if (name == "decay") return FitForm::Decay;
  if (name == "slowest_mode") return FitForm::SlowestMode;
  throw InvalidArgument("unknown fit form '" + name + "' (expected rise, decay or slowest_mode)");
}

std::string to_string(const FitWindow& window) {
  std::ostringstream os;
  switch (window.kind) {
    case FitWindow::Kind::All: return "all";
    case FitWindow::Kind::ValueBand: os << "value[" << window.lo << "," << window.hi << "]"; break;
    case FitWindow::Kind::TimeRange: os << "time[" << window.lo << "," << window.hi << "]"; break;
  }
  return os.str();
}

FitWindow default_window(FitForm form) {
  return form == FitForm::Rise ? FitWindow::value_band(0.1, 0.9) : FitWindow::all();
}

FitResult fit_rate(std::span<const double> t, std::span<const double> y, FitForm form,
                   std::optional<FitWindow> window) {
  if (t.size() != y.size()) throw InvalidArgument("fit_rate: t and y lengths differ");
  if (t.empty()) throw FitError("fit_rate: empty series");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(y[i])) throw FitError("fit_rate: non-finite sample");
    if (y[i] < 0.0 || y[i] > kMaxY) {
      std::ostringstream os;
      os << "fit_rate: y = " << y[i] << " at t = " << t[i] << " outside [0, " << kMaxY << "]";
      throw FitError(os.str());
    }
    if (i > 0 && !(t[i] > t[i - 1])) throw FitError("fit_rate: times must be strictly increasing");
  }

  const FitWindow win = window.value_or(default_window(form));
  const double offset = form == FitForm::Decay ? 0.0 : 1.0;
  const double sign = form == FitForm::Decay ? 1.0 : -1.0;

  std::vector<double> tw;
  std::vector<double> yw;
  bool entered = false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    bool keep = true;
    if (win.kind == FitWindow::Kind::TimeRange) {
      keep = t[i] >= win.lo && t[i] <= win.hi;
    } else if (win.kind == FitWindow::Kind::ValueBand) {
      const double progress = form != FitForm::Decay ? y[i] : (y[0] > 0.0 ? 1.0 - y[i] / y[0] : 0.0);
      if (progress > win.hi) break;  // first passage only
      entered = entered || progress >= win.lo;
      keep = entered;
    }
    if (keep) {
      tw.push_back(t[i]);
      yw.push_back(y[i]);
    }
  }
  if (tw.size() < kMinFitPoints) {
    throw FitError("fit_rate: " + std::to_string(tw.size()) + " points in window " + to_string(win) +
                   ", need at least " + std::to_string(kMinFitPoints));
  }

  // A flat series carries no rate information; report it as already settled.
  const auto [ymin, ymax] = std::minmax_element(yw.begin(), yw.end());
  if (*ymax - *ymin <= 1e-12) {
    FitResult out;
    out.amplitude = form == FitForm::Decay ? yw.front() : 1.0 - yw.front();
    out.offset = form == FitForm::Decay ? 0.0 : 1.0;
    out.form = form;
    out.window = win;
    out.points = tw.size();
    return out;
  }

  if (form == FitForm::SlowestMode) {
    FitResult out = slowest_mode(tw, yw);
    out.window = win;
    out.points = tw.size();
    return out;
  }

  const Eigen::Map<const Eigen::VectorXd> tv(tw.data(), static_cast<Eigen::Index>(tw.size()));
  const Eigen::Map<const Eigen::VectorXd> yv(yw.data(), static_cast<Eigen::Index>(yw.size()));

  // Seed: ln|y - offset| = ln A - rate t on the points where the log exists.
  std::vector<double> ls_t;
  std::vector<double> ls_z;
  for (std::size_t i = 0; i < tw.size(); ++i) {
    const double gap = sign * (yw[i] - offset);
    if (gap > 1e-300) {
      ls_t.push_back(tw[i]);
      ls_z.push_back(std::log(gap));
    }
  }
  Eigen::VectorXd x(2);
  x << 1.0, 1.0 / std::max(tw.back() - tw.front(), 1e-300);
  if (ls_t.size() >= 2) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(ls_t.size()), 2);
    Eigen::VectorXd b(static_cast<Eigen::Index>(ls_t.size()));
    for (std::size_t i = 0; i < ls_t.size(); ++i) {
      a(static_cast<Eigen::Index>(i), 0) = 1.0;
      a(static_cast<Eigen::Index>(i), 1) = -ls_t[i];
      b(static_cast<Eigen::Index>(i)) = ls_z[i];
    }
    const Eigen::Vector2d c = a.colPivHouseholderQr().solve(b);
    if (std::isfinite(c(0)) && std::isfinite(c(1))) x << std::exp(c(0)), c(1);
  }

  ExpFunctor functor(tv, yv, offset, sign);
  Eigen::LevenbergMarquardt<ExpFunctor> lm(functor);
  lm.setMaxfev(2000);
  lm.minimize(x);
  if (!x.allFinite()) throw FitError("fit_rate: optimizer diverged");

  const double rate = checked_rate(x(1));

  Eigen::VectorXd r(tv.size());
  functor(x, r);

  FitResult out;
  out.rate = rate;
  out.amplitude = x(0);
  out.offset = offset;
  out.residual_rms = std::sqrt(r.squaredNorm() / static_cast<double>(r.size()));
  out.form = form;
  out.window = win;
  out.points = tw.size();
  return out;
}

}  // namespace aqec
