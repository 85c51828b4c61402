#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "invlab/tails.hpp"

namespace invlab {

struct LevelSample {
  double t = 0;
  double min_E = 0;
  double max_E = 0;
  bool nonempty = false;
};

struct LevelSetTrace {
  double mu = 0;
  std::vector<LevelSample> samples;
};

// All crossings of N(x) = mu by sign change with linear interpolation;
// returns the extreme crossings, or nullopt when the level set is empty.
std::optional<std::pair<double, double>> extract_level_set(std::span<const double> x,
                                                           std::span<const double> N,
                                                           double mu);

struct EnvelopeParams {
  double eps = 0;          // in (0, -lambda0_R)
  double gamma_small = 1;  // level constant of the upper bound
  double Gamma_big = 1;    // level constant of the lower bound
  double lambda0 = 0;
  double lambda0_R = 0;
  double B = 0;
};

// Predicted bracket of the level set at time t:
//   lower = min u_lower^-1(Gamma e^{-(-lambda0_R - eps) t}) / sqrt(1+B^2)
//   upper = max u_upper^-1(gamma e^{-(-lambda0 + eps) t}) / sqrt(1+B^2)
std::pair<double, double> theoretical_envelope(const TailFamily& tail_lower,
                                               const TailFamily& tail_upper,
                                               const EnvelopeParams& p, double t);

enum class RateModel { linear, power_t, exp_t, log_of_front };

struct FitResult {
  double rate = 0;
  double intercept = 0;
  double r_squared = 0;
  int n = 0;
};

// Least squares of the transformed front position against t on [t0, t1]:
// y, y^a, ln y, or ln ln y with y = min_E (max_E when use_max). Needs at
// least 8 nonempty samples in the window.
FitResult fit_rate(const LevelSetTrace& trace, RateModel model, double a, double t0,
                   double t1, bool use_max = false);

// Log-log fit: exponent p in min_E ~ t^p over [t0, t1].
FitResult fit_loglog_exponent(const LevelSetTrace& trace, double t0, double t1);

struct Classification {
  enum class Kind { extinct, ballistic, accelerating, inconclusive };
  Kind kind = Kind::inconclusive;
  double rate = 0;      // decay rate, speed, or last min_E/t
  double r_squared = 0;
  std::string detail;
};

Classification classify_regime(const LevelSetTrace& trace,
                               const std::vector<std::pair<double, double>>& sup_norm);

struct EnvelopeSeries {
  std::vector<double> t;
  std::vector<double> lower;  // NaN where undefined
  std::vector<double> upper;
};

struct ViolationReport {
  int checked = 0;
  int lower_violations = 0;
  int upper_violations = 0;
  double fraction = 0;  // times violating either bound / times checked
  double first_checked_t = 0;
};

// Flags min_E < lower and max_E > upper past the first time both bounds are
// defined. Time grids must match.
ViolationReport envelope_violation_report(const LevelSetTrace& trace,
                                          const EnvelopeSeries& envelopes);

}  // namespace invlab
