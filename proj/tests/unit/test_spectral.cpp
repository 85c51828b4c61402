#include <doctest.h>

#include <cmath>
#include <vector>

#include "invlab/errors.hpp"
#include "invlab/spectral.hpp"

using namespace invlab;

namespace {

GrowthProfile zero_profile(double extent = 70.0) {
  return GrowthProfile::tabulated({-extent, extent}, {0.0, 0.0});
}

GrowthProfile quadratic_table(double A, double extent = 20.0, double dz = 0.05) {
  std::vector<double> zs, rs;
  for (double z = -extent; z <= extent + 1e-9; z += dz) {
    zs.push_back(z);
    rs.push_back(1.0 - A * z * z);
  }
  return GrowthProfile::tabulated(std::move(zs), std::move(rs));
}

}  // namespace

TEST_CASE("Dirichlet baseline: flat potential on (-1,1)") {
  const auto pair = dirichlet_eig(zero_profile(), 0.0, 1.0, 1e-3);
  CHECK(std::abs(pair.lambda - M_PI * M_PI / 4.0) < 1e-4);
  // eigenfunction is cos(pi Y / 2), sup-normalized
  CHECK(pair.gamma_at(0.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(pair.gamma_at(0.5) == doctest::Approx(std::cos(M_PI * 0.25)).epsilon(1e-5));
  CHECK(pair.gamma_at(1.0) == doctest::Approx(0.0));
  CHECK(pair.domain == EigenPair::Domain::interval);
}

TEST_CASE("Dirichlet eigenvalues approach the harmonic closed form") {
  const auto p1 = dirichlet_eig(GrowthProfile::quadratic(0.25), 1.0, 8.0, 0.01);
  CHECK(std::abs(p1.lambda - (std::sqrt(0.5) - 1.0)) < 1e-3);

  const auto p2 = dirichlet_eig(GrowthProfile::quadratic(4.0), 0.0, 8.0, 0.01);
  CHECK(std::abs(p2.lambda - 1.0) < 1e-3);
}

TEST_CASE("dirichlet_eig validates its inputs") {
  CHECK_THROWS_AS(dirichlet_eig(zero_profile(), 0.0, -1.0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(dirichlet_eig(zero_profile(), 0.0, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("generalized eigenvalue matches the harmonic oscillator") {
  const auto p1 = generalized_eig(GrowthProfile::quadratic(0.25), 1.0, 1e-4);
  CHECK(std::abs(p1.lambda - harmonic_lambda0(0.25, 1.0)) < 1e-3);
  CHECK(p1.domain == EigenPair::Domain::whole_line);

  const auto p2 = generalized_eig(GrowthProfile::quadratic(1.0), 0.0, 1e-4);
  CHECK(std::abs(p2.lambda) < 1e-3);  // survival boundary

  const auto p3 = generalized_eig(GrowthProfile::quadratic(0.25), 0.0, 1e-4);
  CHECK(std::abs(p3.lambda - (-0.5)) < 1e-3);
}

TEST_CASE("generalized_eig reports no convergence for a flat potential") {
  CHECK_THROWS_AS(generalized_eig(zero_profile(), 0.0, 1e-6), NoConvergence);
}

TEST_CASE("harmonic closed form") {
  CHECK(harmonic_lambda0(1.0, 0.0) == doctest::Approx(0.0));
  CHECK(harmonic_lambda0(0.25, 1.0) == doctest::Approx(std::sqrt(0.5) - 1.0));
  CHECK(harmonic_lambda0(4.0, 0.0) == doctest::Approx(1.0));
  CHECK(harmonic_gamma0(1.0, 0.0, 1.5) == doctest::Approx(std::exp(-0.5 * 1.5 * 1.5)));

  const auto pair = harmonic_closed_form(0.25, 1.0, 8.0, 0.01);
  CHECK(pair.lambda == doctest::Approx(std::sqrt(0.5) - 1.0));
  CHECK(pair.gamma_at(0.0) == doctest::Approx(1.0));
  CHECK(pair.domain == EigenPair::Domain::whole_line);
}

TEST_CASE("critical speed from the principal eigenvalue") {
  CHECK(critical_speed(-0.5, 0.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(critical_speed(-0.29289321881345254, 1.0) == doctest::Approx(0.76537).epsilon(1e-4));
  CHECK(critical_speed(-1.0, 0.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(critical_speed(0.0, 0.0), NotInvading);
  CHECK_THROWS_AS(critical_speed(1.0, 1.0), NotInvading);
}

TEST_CASE("domain monotonicity of the Dirichlet eigenvalue") {
  const auto growth = GrowthProfile::quadratic(0.25);
  const double lambda0 = harmonic_lambda0(0.25, 1.0);
  double prev = std::numeric_limits<double>::infinity();
  for (const double R : {2.0, 4.0, 8.0, 16.0}) {
    const auto pair = dirichlet_eig(growth, 1.0, R, 0.01);
    // slack: bisection resolves to ~1e-9; discretization biases by O(h^2)
    CHECK(pair.lambda <= prev + 1e-8);
    CHECK(pair.lambda >= lambda0 - 1e-5);
    prev = pair.lambda;
  }
}

TEST_CASE("eigenvalue self-convergence is second order in h") {
  const auto growth = GrowthProfile::quadratic(1.0);
  const double exact = harmonic_lambda0(1.0, 0.0);  // 0
  const double e1 = std::abs(dirichlet_eig(growth, 0.0, 8.0, 0.02).lambda - exact);
  const double e2 = std::abs(dirichlet_eig(growth, 0.0, 8.0, 0.01).lambda - exact);
  const double ratio = e1 / std::max(e2, 1e-300);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("eigenfunction residual is small on interior nodes") {
  const double h = 0.01;
  const auto pair = dirichlet_eig(GrowthProfile::quadratic(0.25), 1.0, 8.0, h);
  const double norm2 = 2.0;
  const double max_r = std::abs(1.0 - 0.25 * norm2 * 64.0);  // |r~| at the edge
  CHECK(pair.residual <= 10.0 * h * h * (1.0 + std::abs(pair.lambda) + max_r));
}

TEST_CASE("decay certificate") {
  const auto gaussian = harmonic_closed_form(1.0, 0.0, 4.0, 0.01);
  const auto report = decay_certificate(gaussian, 1.0);
  CHECK(report.passes);
  CHECK(report.slope < -2.0);  // log of exp(-Y^2/2) has slope -Y <= -8/3 there

  const auto interval_pair = dirichlet_eig(zero_profile(), 0.0, 1.0, 1e-3);
  CHECK_THROWS_AS(decay_certificate(interval_pair, 0.1), PreconditionFailed);

  // a confining tabulated profile decays at least exponentially
  const auto table_pair = generalized_eig(quadratic_table(0.25), 0.0, 1e-4);
  const auto table_report = decay_certificate(table_pair, 0.1);
  CHECK(table_report.passes);
  CHECK(table_report.slope < 0.0);
}
