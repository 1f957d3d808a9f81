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
#include <optional>
#include <span>
#include <string>

namespace aqec {

/**
 * Rise: y = 1 - A e^{-rate t}. Decay: y = A e^{-rate t}.
 * SlowestMode: 1 - y is fitted as a sum of complex exponentials (matrix
 * pencil); rate is the slowest decay among modes carrying at least
 * kSignificantMode of the largest amplitude. Use it when the approach to 1
 * is oscillatory or multi-rate and only the asymptotic rate matters.
 */
enum class FitForm { Rise, Decay, SlowestMode };

std::string to_string(FitForm form);
FitForm fit_form_from_string(const std::string& name);

/**
 * Which samples enter a fit. ValueBand keeps the contiguous stretch from the
 * first sample whose normalized progress reaches lo up to the last one before
 * it first exceeds hi; progress is y for Rise and 1 - y / y(0) for Decay.
 * TimeRange keeps t in [lo, hi].
 */
struct FitWindow {
  enum class Kind { All, ValueBand, TimeRange };
  Kind kind = Kind::All;
  double lo = 0.0;
  double hi = 0.0;

  static FitWindow all() { return {}; }
  static FitWindow value_band(double lo, double hi) { return {Kind::ValueBand, lo, hi}; }
  static FitWindow time_range(double t0, double t1) { return {Kind::TimeRange, t0, t1}; }
};

std::string to_string(const FitWindow& window);

struct FitResult {
  double rate = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double residual_rms = 0.0;
  FitForm form = FitForm::Rise;
  FitWindow window;
  std::size_t points = 0;
};

inline constexpr std::size_t kMinFitPoints = 10;
inline constexpr double kSignificantMode = 0.05;

/// Default windows: Rise uses the [0.1, 0.9] value band, Decay and SlowestMode every point.
FitWindow default_window(FitForm form);

/**
 * Least-squares fit of an exponential approach to its asymptote.
 *
 * Rise and Decay seed (A, rate) by log-linear regression and refine with
 * Levenberg-Marquardt. SlowestMode needs uniformly spaced samples.
 * Requires at least kMinFitPoints in the window, all y in [0, 1.05] and
 * strictly increasing t. A negative rate beyond 1e-9 throws FitError; a
 * smaller one is reported as 0, as is the rate of a flat series.
 */
FitResult fit_rate(std::span<const double> t, std::span<const double> y, FitForm form,
                   std::optional<FitWindow> window = std::nullopt);

}  // namespace aqec
