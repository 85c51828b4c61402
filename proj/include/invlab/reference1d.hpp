#pragma once

#include <Eigen/Dense>
#include <vector>

#include "invlab/grid.hpp"

namespace invlab {

struct Trajectory1D {
  Grid1D<double> grid;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  bool blowup = false;  // advisory, linear mode only
};

// 1D reference dynamics: Crank-Nicolson diffusion with Neumann ends plus an
// explicit reaction, logistic Lambda*u*(1-u) or linear Lambda*u.
Trajectory1D solve_fisher_kpp_1d(const Eigen::VectorXd& u0, const Grid1D<double>& grid,
                                 double Lambda, bool logistic, double t_end, double dt,
                                 int record_stride = 1);

// Heat evolution of the indicator of [sigma_minus, sigma_plus] at time t,
// through the error-function primitive.
double heat_indicator_profile(double sigma_minus, double sigma_plus, double t, double y);

}  // namespace invlab
