#pragma once

#include <Eigen/Dense>

#include "invlab/grid.hpp"
#include "invlab/growth.hpp"

namespace invlab {

// Principal eigenpair of -d^2/dY^2 - r~(Y) with r~(Y) = r(sqrt(1+B^2) Y).
// gamma is sampled on grid (boundary nodes included; zero there for the
// interval kind), normalized to sup-norm 1 and positive inside.
struct EigenPair {
  enum class Domain { interval, whole_line };

  double lambda = 0.0;
  Eigen::VectorXd gamma;
  Grid1D<double> grid;
  Domain domain = Domain::interval;
  double grid_h = 0.0;
  double residual = 0.0;  // max interior |(-gamma'' - r~ gamma) - lambda gamma|

  double R() const { return grid.hi; }
  // Linear interpolation of the sample; zero outside the sampled range.
  double gamma_at(double Y) const;
};

// Smallest Dirichlet eigenpair on (-R, R), 3-point central differences,
// bisection for the eigenvalue and inverse iteration for the eigenfunction.
EigenPair dirichlet_eig(const GrowthProfile& profile, double B, double R, double h);

struct GeneralizedEigOptions {
  double R0 = 2.0;
  double R_cap = 64.0;
  double h = 0.01;
};

// Whole-line eigenpair via the monotone limit of doubling Dirichlet domains.
EigenPair generalized_eig(const GrowthProfile& profile, double B, double tol,
                          const GeneralizedEigOptions& opt = {});

// Closed form for the quadratic growth r(z) = 1 - A z^2.
double harmonic_lambda0(double A, double B);
double harmonic_gamma0(double A, double B, double Y);
EigenPair harmonic_closed_form(double A, double B, double R = 8.0, double h = 0.01);

// c* = 2 sqrt(-lambda0 / (1 + B^2)); throws NotInvading when lambda0 >= 0.
double critical_speed(double lambda0, double B);

struct DecayReport {
  double slope = 0.0;      // fitted d(log gamma)/d|Y|
  double intercept = 0.0;
  double kappa_min = 0.0;
  int points_used = 0;
  bool passes = false;
};

// Fits log gamma against |Y| on the outer third of a whole-line pair's
// domain (shrunk inward past the numerical noise floor).
DecayReport decay_certificate(const EigenPair& pair, double kappa_min = 0.1);

}  // namespace invlab
