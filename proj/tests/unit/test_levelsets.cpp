#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "invlab/errors.hpp"
#include "invlab/levelsets.hpp"

using namespace invlab;

namespace {

LevelSetTrace synthetic_trace(double mu, double t0, double t1, double dt,
                              const std::function<double(double)>& position) {
  LevelSetTrace trace;
  trace.mu = mu;
  for (double t = t0; t <= t1 + 1e-12; t += dt) {
    const double x = position(t);
    trace.samples.push_back({t, x, x + 0.3, true});
  }
  return trace;
}

}  // namespace

TEST_CASE("extract_level_set: stated examples") {
  const std::vector<double> xs = {-1.0, 0.0, 1.0};

  const std::vector<double> ramp = {1.0, 1.0, 0.0};
  const auto hit = extract_level_set(xs, ramp, 0.5);
  REQUIRE(hit.has_value());
  CHECK(hit->first == doctest::Approx(0.5));
  CHECK(hit->second == doctest::Approx(0.5));

  const std::vector<double> flat = {0.2, 0.2, 0.2};
  CHECK_FALSE(extract_level_set(xs, flat, 0.5).has_value());

  const std::vector<double> tent = {0.0, 1.0, 0.0};
  const auto both = extract_level_set(xs, tent, 0.5);
  REQUIRE(both.has_value());
  CHECK(both->first == doctest::Approx(-0.5));
  CHECK(both->second == doctest::Approx(0.5));
}

TEST_CASE("extract_level_set is exact on monotone piecewise-linear profiles") {
  std::vector<double> xs, Ns;
  for (int i = 0; i <= 160; ++i) {
    xs.push_back(0.25 * i);
    Ns.push_back(2.0 / (1.0 + 0.13 * xs.back()));  // strictly decreasing
  }
  for (const double mu : {1.9, 1.1, 0.7, 0.4}) {
    const auto hit = extract_level_set(xs, Ns, mu);
    REQUIRE(hit.has_value());
    CHECK(hit->first == doctest::Approx(hit->second));
    // crossing of the linear interpolant solves N(x) = mu exactly
    std::size_t i = 0;
    while (Ns[i + 1] > mu) ++i;
    const double expected =
        xs[i] + (xs[i + 1] - xs[i]) * (Ns[i] - mu) / (Ns[i] - Ns[i + 1]);
    CHECK(hit->first == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("theoretical envelope reproduces the worked examples") {
  // algebraic lower tail, exponential-speed regime
  {
    EnvelopeParams p;
    p.eps = 0.05;
    p.Gamma_big = 1.0;
    p.gamma_small = 1.0;
    p.lambda0 = -0.3;
    p.lambda0_R = -0.25;
    p.B = 1.0;
    const auto tail = TailFamily::algebraic(1.0, 2.0, 1.0);
    const auto [lo, hi] = theoretical_envelope(tail, tail, p, 20.0);
    CHECK(lo == doctest::Approx(std::exp(2.0) / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(hi > lo);
  }
  // lighter heavy tail, algebraic superlinear speed
  {
    EnvelopeParams p;
    p.eps = 0.05;
    p.Gamma_big = 1.0;
    p.gamma_small = 1.0;
    p.lambda0 = -0.3;
    p.lambda0_R = -0.25;
    p.B = 0.0;
    const auto tail = TailFamily::light_heavy(1.0, 1.0, 0.5);
    const auto [lo, hi] = theoretical_envelope(tail, tail, p, 20.0);
    CHECK(lo == doctest::Approx(16.0).epsilon(1e-6));
  }
  // very heavy tail, superexponential speed
  {
    EnvelopeParams p;
    p.eps = 0.05;
    p.Gamma_big = 1.0;
    p.gamma_small = 1.0;
    p.lambda0 = -0.3;
    p.lambda0_R = -0.25;
    p.B = 0.0;
    const auto tail = TailFamily::logarithmic(1.0, 1.0, 2.0);
    const auto [lo, hi] = theoretical_envelope(tail, tail, p, 20.0);
    CHECK(std::log(lo) == doctest::Approx(std::exp(4.0)).epsilon(1e-6));
  }
  // too-early times propagate LevelOutOfRange
  {
    EnvelopeParams p;
    p.eps = 0.05;
    p.Gamma_big = 5.0;  // level above the plateau at t = 0
    p.gamma_small = 5.0;
    p.lambda0 = -0.3;
    p.lambda0_R = -0.25;
    p.B = 0.0;
    const auto tail = TailFamily::algebraic(1.0, 2.0, 1.0);
    CHECK_THROWS_AS(theoretical_envelope(tail, tail, p, 0.1), LevelOutOfRange);
  }
}

TEST_CASE("envelope lower stays below upper beyond a threshold time") {
  EnvelopeParams p;
  p.lambda0 = -0.29289321881;
  p.lambda0_R = -0.2925;
  p.eps = 0.25 * (-p.lambda0_R);
  p.Gamma_big = 1.0;
  p.gamma_small = 1.0;
  p.B = 1.0;
  const auto tail = TailFamily::algebraic(1.0, 2.0, 1.0);
  for (double t = 1.0; t <= 40.0; t += 1.0) {
    const auto [lo, hi] = theoretical_envelope(tail, tail, p, t);
    CHECK(lo < hi);
  }
}

TEST_CASE("fit_rate recovers planted rates exactly") {
  const auto linear = synthetic_trace(0.1, 0.0, 20.0, 0.5, [](double t) { return 2.0 * t; });
  const auto f1 = fit_rate(linear, RateModel::linear, 1.0, 0.0, 20.0);
  CHECK(f1.rate == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(f1.r_squared == doctest::Approx(1.0).epsilon(1e-10));

  const auto expo =
      synthetic_trace(0.1, 0.0, 20.0, 0.5, [](double t) { return std::exp(0.1 * t); });
  const auto f2 = fit_rate(expo, RateModel::exp_t, 1.0, 0.0, 20.0);
  CHECK(f2.rate == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(f2.r_squared == doctest::Approx(1.0).epsilon(1e-10));

  const auto power = synthetic_trace(0.1, 1.0, 20.0, 0.5,
                                     [](double t) { return (3.0 * t) * (3.0 * t); });
  const auto f3 = fit_rate(power, RateModel::power_t, 0.5, 1.0, 20.0);
  CHECK(f3.rate == doctest::Approx(3.0).epsilon(1e-10));

  const auto super = synthetic_trace(
      0.1, 1.0, 20.0, 0.5, [](double t) { return std::exp(std::exp(0.05 * t)); });
  const auto f4 = fit_rate(super, RateModel::log_of_front, 1.0, 1.0, 20.0);
  CHECK(f4.rate == doctest::Approx(0.05).epsilon(1e-10));

  const auto loglog = synthetic_trace(0.1, 1.0, 20.0, 0.5,
                                      [](double t) { return 4.0 * t * t; });
  const auto f5 = fit_loglog_exponent(loglog, 1.0, 20.0);
  CHECK(f5.rate == doctest::Approx(2.0).epsilon(1e-6));

  CHECK_THROWS_AS(fit_rate(linear, RateModel::linear, 1.0, 0.0, 2.0), InsufficientData);
}

TEST_CASE("fit_rate can track the rightmost crossing") {
  auto trace = synthetic_trace(0.1, 0.0, 20.0, 0.5, [](double t) { return -0.5 * t; });
  for (auto& s : trace.samples) s.max_E = -s.min_E;  // symmetric spread
  const auto fit = fit_rate(trace, RateModel::linear, 1.0, 0.0, 20.0, true);
  CHECK(fit.rate == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("classify_regime distinguishes the three regimes") {
  // extinct: exponential sup-norm decay, empty level sets
  {
    LevelSetTrace trace;
    trace.mu = 0.05;
    std::vector<std::pair<double, double>> sup;
    for (double t = 0.0; t <= 8.0; t += 0.25) {
      trace.samples.push_back({t, 0.0, 0.0, false});
      sup.emplace_back(t, 0.7 * std::exp(-1.0 * t));
    }
    const auto c = classify_regime(trace, sup);
    CHECK(c.kind == Classification::Kind::extinct);
    CHECK(c.rate == doctest::Approx(1.0).epsilon(1e-6));
  }
  // ballistic: linear front, flat sup norm
  {
    const auto trace =
        synthetic_trace(0.05, 0.0, 30.0, 0.5, [](double t) { return 0.765 * t; });
    std::vector<std::pair<double, double>> sup;
    for (const auto& s : trace.samples) sup.emplace_back(s.t, 0.4);
    const auto c = classify_regime(trace, sup);
    CHECK(c.kind == Classification::Kind::ballistic);
    CHECK(c.rate == doctest::Approx(0.765).epsilon(1e-6));
  }
  // accelerating: min_E / t grows
  {
    const auto trace =
        synthetic_trace(0.05, 0.0, 30.0, 0.5, [](double t) { return std::exp(0.2 * t); });
    std::vector<std::pair<double, double>> sup;
    for (const auto& s : trace.samples) sup.emplace_back(s.t, 0.4);
    const auto c = classify_regime(trace, sup);
    CHECK(c.kind == Classification::Kind::accelerating);
  }
  // inconclusive: too few samples
  {
    LevelSetTrace trace;
    trace.mu = 0.05;
    trace.samples.push_back({0.5, 0, 0, false});
    const auto c = classify_regime(trace, {});
    CHECK(c.kind == Classification::Kind::inconclusive);
  }
}

TEST_CASE("envelope violation report") {
  const auto trace =
      synthetic_trace(0.05, 1.0, 20.0, 1.0, [](double t) { return 2.0 + 0.5 * t; });
  EnvelopeSeries env;
  for (const auto& s : trace.samples) {
    env.t.push_back(s.t);
    env.lower.push_back(0.25 * s.t);        // always below min_E
    env.upper.push_back(100.0 + 2.0 * s.t); // always above max_E
  }
  const auto clean = envelope_violation_report(trace, env);
  CHECK(clean.checked == int(trace.samples.size()));
  CHECK(clean.lower_violations == 0);
  CHECK(clean.upper_violations == 0);
  CHECK(clean.fraction == 0.0);

  // push the lower envelope above the trace for the last five samples
  for (std::size_t k = env.t.size() - 5; k < env.t.size(); ++k)
    env.lower[k] = 1000.0;
  const auto dirty = envelope_violation_report(trace, env);
  CHECK(dirty.lower_violations == 5);
  CHECK(dirty.fraction == doctest::Approx(5.0 / trace.samples.size()));

  EnvelopeSeries mismatched;
  mismatched.t = {1.0};
  mismatched.lower = {0.0};
  mismatched.upper = {1.0};
  CHECK_THROWS_AS(envelope_violation_report(trace, mismatched), GridMismatch);
}
