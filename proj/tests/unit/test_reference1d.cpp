#include <doctest.h>

#include <cmath>

#include "invlab/errors.hpp"
#include "invlab/reference1d.hpp"

using namespace invlab;

namespace {

// Simpson-rule oracle for the heat convolution of an indicator.
double heat_indicator_quadrature(double s_lo, double s_hi, double t, double y) {
  const int n = 4000;  // even
  const double h = (s_hi - s_lo) / n;
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double z = s_lo + k * h;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    acc += w * std::exp(-(y - z) * (y - z) / (4.0 * t));
  }
  return acc * h / 3.0 / std::sqrt(4.0 * M_PI * t);
}

}  // namespace

TEST_CASE("heat indicator profile: closed form values") {
  CHECK(heat_indicator_profile(-1.0, 1.0, 1e-8, 0.0) == doctest::Approx(1.0));
  CHECK(heat_indicator_profile(-1.0, 1.0, 1.0, 0.0) ==
        doctest::Approx(std::erf(0.5)).epsilon(1e-12));
  CHECK(heat_indicator_profile(-1.0, 1.0, 1.0, 10.0) < 1e-9);
  CHECK_THROWS_AS(heat_indicator_profile(-1.0, 1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("heat indicator profile agrees with quadrature to 1e-8") {
  for (const double t : {0.3, 1.0, 2.5})
    for (const double y : {-2.0, 0.0, 0.7, 3.0}) {
      const double closed = heat_indicator_profile(-1.0, 1.5, t, y);
      const double quad = heat_indicator_quadrature(-1.0, 1.5, t, y);
      CHECK(std::abs(closed - quad) < 1e-8);
    }
}

TEST_CASE("logistic steady states are preserved") {
  const Grid1D<double> grid(-10.0, 10.0, 201);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(grid.size());
  const auto traj1 = solve_fisher_kpp_1d(ones, grid, 1.0, true, 1.0, 1e-3, 200);
  CHECK((traj1.states.back().array() - 1.0).abs().maxCoeff() < 1e-12);

  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(grid.size());
  const auto traj0 = solve_fisher_kpp_1d(zeros, grid, 1.0, true, 1.0, 1e-3, 200);
  CHECK(traj0.states.back().maxCoeff() == 0.0);
}

TEST_CASE("linear mode grows like the heat kernel times exp(Lambda t)") {
  const Grid1D<double> grid(-25.0, 25.0, 1001);
  Eigen::VectorXd u0(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i);
    u0[i] = std::exp(-0.5 * x * x);
  }
  const auto traj = solve_fisher_kpp_1d(u0, grid, 1.0, false, 3.0, 1e-3, 500);
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    const double expected = std::exp(t) / std::sqrt(1.0 + 2.0 * t);
    CHECK(traj.states[k].maxCoeff() == doctest::Approx(expected).epsilon(0.02));
  }
  CHECK_FALSE(traj.blowup);
}

TEST_CASE("logistic front stays within [0,1] and advances") {
  const Grid1D<double> grid(-30.0, 30.0, 601);
  Eigen::VectorXd u0(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    u0[i] = 1.0 / (1.0 + std::exp(2.0 * grid.point(i)));
  const auto traj = solve_fisher_kpp_1d(u0, grid, 1.0, true, 5.0, 1e-3, 1000);
  for (const auto& u : traj.states) {
    CHECK(u.minCoeff() >= 0.0);
    CHECK(u.maxCoeff() <= 1.0);
  }
  // half-level crossing moves right at roughly the critical speed 2
  const auto crossing = [&](const Eigen::VectorXd& u) {
    for (Eigen::Index i = 0; i + 1 < u.size(); ++i)
      if (u[i] >= 0.5 && u[i + 1] < 0.5)
        return grid.point(i) + grid.spacing() * (u[i] - 0.5) / (u[i] - u[i + 1]);
    return grid.hi;
  };
  const double x0 = crossing(traj.states.front());
  const double x1 = crossing(traj.states.back());
  CHECK((x1 - x0) / 5.0 == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("fisher solver validates inputs") {
  const Grid1D<double> grid(-1.0, 1.0, 21);
  const Eigen::VectorXd u0 = Eigen::VectorXd::Constant(grid.size(), 2.0);
  CHECK_THROWS_AS(solve_fisher_kpp_1d(u0, grid, 1.0, true, 1.0, 1e-3), PreconditionFailed);
  const Eigen::VectorXd ok = Eigen::VectorXd::Constant(grid.size(), 0.5);
  CHECK_THROWS_AS(solve_fisher_kpp_1d(ok, grid, -1.0, true, 1.0, 1e-3),
                  std::invalid_argument);
  const Eigen::VectorXd short_u0 = Eigen::VectorXd::Constant(5, 0.5);
  CHECK_THROWS_AS(solve_fisher_kpp_1d(short_u0, grid, 1.0, true, 1.0, 1e-3),
                  GridMismatch);
}
