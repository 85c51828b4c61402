#include "invlab/reference1d.hpp"

#include <cmath>
#include <stdexcept>

#include "invlab/errors.hpp"

namespace invlab {

namespace {

// Solve (I - theta*D2) u = rhs with Neumann ends (mirrored ghost nodes).
void neumann_cn_solve(Eigen::VectorXd& rhs, double theta_over_h2) {
  const Eigen::Index n = rhs.size();
  static thread_local std::vector<double> diag, upper;
  diag.assign(static_cast<std::size_t>(n), 0.0);
  upper.assign(static_cast<std::size_t>(n), 0.0);
  const double s = theta_over_h2;
  // Row 0 and n-1 use the mirrored stencil u'' ~ 2(u1 - u0)/h^2.
  diag[0] = 1 + 2 * s;
  upper[0] = -2 * s;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    diag[static_cast<std::size_t>(i)] = 1 + 2 * s;
    upper[static_cast<std::size_t>(i)] = -s;
  }
  diag[static_cast<std::size_t>(n - 1)] = 1 + 2 * s;

  // Thomas sweep; sub-diagonal mirrors the upper one except the last row.
  static thread_local std::vector<double> c;
  c.assign(static_cast<std::size_t>(n), 0.0);
  double beta = diag[0];
  rhs[0] /= beta;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double sub = (i == n - 1) ? -2 * s : -s;
    c[static_cast<std::size_t>(i)] = upper[static_cast<std::size_t>(i - 1)] / beta;
    beta = diag[static_cast<std::size_t>(i)] - sub * c[static_cast<std::size_t>(i)];
    rhs[i] = (rhs[i] - sub * rhs[i - 1]) / beta;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i)
    rhs[i] -= c[static_cast<std::size_t>(i + 1)] * rhs[i + 1];
}

}  // namespace

Trajectory1D solve_fisher_kpp_1d(const Eigen::VectorXd& u0, const Grid1D<double>& grid,
                                 double Lambda, bool logistic, double t_end, double dt,
                                 int record_stride) {
  if (!(Lambda > 0)) throw std::invalid_argument("solve_fisher_kpp_1d: Lambda must be > 0");
  if (!(dt > 0) || !(t_end > 0))
    throw std::invalid_argument("solve_fisher_kpp_1d: dt and t_end must be > 0");
  if (u0.size() != grid.size())
    throw GridMismatch("solve_fisher_kpp_1d: u0 does not match the grid");
  if (logistic && ((u0.array() < 0).any() || (u0.array() > 1).any()))
    throw PreconditionFailed("solve_fisher_kpp_1d: logistic mode needs u0 in [0,1]");

  const double h = grid.spacing();
  const double theta = 0.5 * dt / (h * h);
  const long steps = std::lround(t_end / dt);

  Trajectory1D traj;
  traj.grid = grid;
  Eigen::VectorXd u = u0;
  traj.times.push_back(0.0);
  traj.states.push_back(u);

  Eigen::VectorXd work(u.size());
  for (long n = 1; n <= steps; ++n) {
    // Explicit reaction.
    if (logistic)
      u = u.array() + dt * Lambda * u.array() * (1.0 - u.array());
    else
      u = u.array() + dt * Lambda * u.array();

    // Crank-Nicolson diffusion: rhs = (I + theta D2) u.
    const Eigen::Index m = u.size();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double left = i == 0 ? u[1] : u[i - 1];
      const double right = i == m - 1 ? u[m - 2] : u[i + 1];
      work[i] = u[i] + theta * (left - 2 * u[i] + right);
    }
    neumann_cn_solve(work, theta);
    u.swap(work);

    if (logistic) u = u.cwiseMax(0.0).cwiseMin(1.0);
    if (!logistic && u.maxCoeff() > 1e12) traj.blowup = true;

    if (n % record_stride == 0 || n == steps) {
      traj.times.push_back(double(n) * dt);
      traj.states.push_back(u);
    }
  }
  return traj;
}

double heat_indicator_profile(double sigma_minus, double sigma_plus, double t, double y) {
  if (!(t > 0)) throw std::invalid_argument("heat_indicator_profile: t must be > 0");
  const double denom = 2.0 * std::sqrt(t);
  return 0.5 * (std::erf((sigma_plus - y) / denom) - std::erf((sigma_minus - y) / denom));
}

}  // namespace invlab
