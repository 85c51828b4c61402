#include "invlab/levelsets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invlab/errors.hpp"

namespace invlab {

namespace {

struct LeastSquares {
  double slope = 0, intercept = 0, r2 = 0;
  int n = 0;
};

LeastSquares fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  LeastSquares out;
  out.n = static_cast<int>(xs.size());
  if (out.n < 2) return out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < out.n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double n = out.n;
  const double denom = n * sxx - sx * sx;
  out.slope = (n * sxy - sx * sy) / denom;
  out.intercept = (sy - out.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (int i = 0; i < out.n; ++i) {
    const double fit = out.slope * xs[i] + out.intercept;
    ss_res += (ys[i] - fit) * (ys[i] - fit);
    ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
  }
  out.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return out;
}

}  // namespace

std::optional<std::pair<double, double>> extract_level_set(std::span<const double> x,
                                                           std::span<const double> N,
                                                           double mu) {
  if (x.size() != N.size() || x.size() < 2)
    throw InsufficientData("extract_level_set: need a sampled profile");
  if (!(mu > 0)) throw std::invalid_argument("extract_level_set: mu must be > 0");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool found = false;
  const auto note = [&](double c) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    found = true;
  };
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double d0 = N[i] - mu, d1 = N[i + 1] - mu;
    if (d0 == 0.0) note(x[i]);
    if (d1 == 0.0 && i + 2 == x.size()) note(x[i + 1]);
    if (d0 * d1 < 0.0) note(x[i] + (x[i + 1] - x[i]) * d0 / (d0 - d1));
  }
  if (!found) return std::nullopt;
  return std::make_pair(lo, hi);
}

std::pair<double, double> theoretical_envelope(const TailFamily& tail_lower,
                                               const TailFamily& tail_upper,
                                               const EnvelopeParams& p, double t) {
  const double lower_level = p.Gamma_big * std::exp(-(-p.lambda0_R - p.eps) * t);
  const double upper_level = p.gamma_small * std::exp(-(-p.lambda0 + p.eps) * t);
  const double inv_norm = 1.0 / std::sqrt(1.0 + p.B * p.B);
  const double lo = tail_lower.inverse(lower_level).first;
  const double hi = tail_upper.inverse(upper_level).second;
  return {inv_norm * lo, inv_norm * hi};
}

FitResult fit_rate(const LevelSetTrace& trace, RateModel model, double a, double t0,
                   double t1, bool use_max) {
  std::vector<double> ts, zs;
  for (const auto& s : trace.samples) {
    if (s.t < t0 || s.t > t1) continue;
    if (!s.nonempty)
      throw InsufficientData("fit_rate: empty level set inside the fit window");
    const double y = use_max ? s.max_E : s.min_E;
    double z = 0;
    switch (model) {
      case RateModel::linear:
        z = y;
        break;
      case RateModel::power_t:
        if (!(y >= 0)) throw InsufficientData("fit_rate: negative ordinate for power fit");
        z = std::pow(y, a);
        break;
      case RateModel::exp_t:
        if (!(y > 0)) throw InsufficientData("fit_rate: nonpositive ordinate for exp fit");
        z = std::log(y);
        break;
      case RateModel::log_of_front:
        if (!(y > 1)) throw InsufficientData("fit_rate: ordinate must exceed 1 for log-of-front");
        z = std::log(std::log(y));
        break;
    }
    ts.push_back(s.t);
    zs.push_back(z);
  }
  if (ts.size() < 8) throw InsufficientData("fit_rate: fewer than 8 samples in window");
  const auto ls = fit_line(ts, zs);
  return {ls.slope, ls.intercept, ls.r2, ls.n};
}

FitResult fit_loglog_exponent(const LevelSetTrace& trace, double t0, double t1) {
  std::vector<double> ts, zs;
  for (const auto& s : trace.samples) {
    if (s.t < t0 || s.t > t1 || !s.nonempty) continue;
    if (!(s.t > 0) || !(s.min_E > 0)) continue;
    ts.push_back(std::log(s.t));
    zs.push_back(std::log(s.min_E));
  }
  if (ts.size() < 8)
    throw InsufficientData("fit_loglog_exponent: fewer than 8 usable samples");
  const auto ls = fit_line(ts, zs);
  return {ls.slope, ls.intercept, ls.r2, ls.n};
}

Classification classify_regime(const LevelSetTrace& trace,
                               const std::vector<std::pair<double, double>>& sup_norm) {
  Classification out;

  std::vector<const LevelSample*> late;
  for (const auto& s : trace.samples)
    if (s.t > 1.0) late.push_back(&s);
  if (late.size() < 10) {
    out.kind = Classification::Kind::inconclusive;
    out.detail = "fewer than 10 samples past t = 1";
    return out;
  }

  // Extinction: decaying exponential sup norm and empty late level sets.
  {
    std::vector<double> ts, ls;
    for (const auto& [t, v] : sup_norm)
      if (t > 1.0 && v > 0) {
        ts.push_back(t);
        ls.push_back(std::log(v));
      }
    const auto fit = fit_line(ts, ls);
    bool late_empty = true;
    const std::size_t tail_start = late.size() - late.size() / 4 - 1;
    for (std::size_t i = tail_start; i < late.size(); ++i)
      if (late[i]->nonempty) late_empty = false;
    if (fit.n >= 4 && fit.slope < 0 && fit.r2 > 0.99 && late_empty) {
      out.kind = Classification::Kind::extinct;
      out.rate = -fit.slope;
      out.r_squared = fit.r2;
      out.detail = "sup norm decays exponentially; late level sets empty";
      return out;
    }
  }

  // Acceleration: min_E / t grows monotonically by > 20% over the last half.
  {
    const double t_end = trace.samples.back().t;
    const double t_half = 0.5 * t_end;
    std::vector<double> speeds, times;
    for (const auto& s : trace.samples)
      if (s.t >= t_half && s.nonempty && s.t > 0) {
        speeds.push_back(s.min_E / s.t);
        times.push_back(s.t);
      }
    if (speeds.size() >= 4) {
      bool monotone = true;
      for (std::size_t i = 1; i < speeds.size(); ++i)
        if (speeds[i] < speeds[i - 1] * (1.0 - 1e-3)) monotone = false;
      if (monotone && speeds.back() > 1.2 * speeds.front()) {
        out.kind = Classification::Kind::accelerating;
        out.rate = speeds.back();
        out.detail = "min_E / t increased by " +
                     std::to_string(100.0 * (speeds.back() / speeds.front() - 1.0)) + "%";
        return out;
      }
    }
  }

  // Ballistic: linear front speed over the last half, rightward front first.
  {
    const double t_end = trace.samples.back().t;
    const double t_half = 0.5 * t_end;
    std::vector<double> ts, max_e, min_e;
    for (const auto& s : trace.samples)
      if (s.t >= t_half && s.nonempty) {
        ts.push_back(s.t);
        max_e.push_back(s.max_E);
        min_e.push_back(s.min_E);
      }
    if (ts.size() >= 4) {
      const auto fit_max = fit_line(ts, max_e);
      const auto fit_min = fit_line(ts, min_e);
      const auto& fit = std::abs(fit_max.slope) >= std::abs(fit_min.slope) ? fit_max : fit_min;
      out.kind = Classification::Kind::ballistic;
      out.rate = fit.slope;
      out.r_squared = fit.r2;
      out.detail = "linear front fit over the last half window";
      return out;
    }
  }

  out.kind = Classification::Kind::inconclusive;
  out.detail = "no regime criterion fired";
  return out;
}

ViolationReport envelope_violation_report(const LevelSetTrace& trace,
                                          const EnvelopeSeries& envelopes) {
  if (trace.samples.size() != envelopes.t.size())
    throw GridMismatch("envelope_violation_report: time grids differ");
  ViolationReport report;
  bool started = false;
  for (std::size_t i = 0; i < envelopes.t.size(); ++i) {
    const bool defined =
        std::isfinite(envelopes.lower[i]) && std::isfinite(envelopes.upper[i]);
    if (!defined || !trace.samples[i].nonempty) continue;
    if (!started) {
      started = true;
      report.first_checked_t = envelopes.t[i];
    }
    ++report.checked;
    bool violated = false;
    if (trace.samples[i].min_E < envelopes.lower[i]) {
      ++report.lower_violations;
      violated = true;
    }
    if (trace.samples[i].max_E > envelopes.upper[i]) {
      ++report.upper_violations;
      violated = true;
    }
    if (violated) report.fraction += 1.0;
  }
  if (report.checked > 0) report.fraction /= report.checked;
  return report;
}

}  // namespace invlab
