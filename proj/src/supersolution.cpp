#include "invlab/supersolution.hpp"

#include <algorithm>
#include <cmath>

#include "invlab/errors.hpp"

namespace invlab {

namespace {
inline double tol_for(double bound) { return 1e-6 + 1e-3 * bound; }
}  // namespace

SupersolutionReport linear_supersolution_check(
    const std::vector<ScalarField2D<double>>& history, const EigenPair& eig, double k) {
  if (history.empty())
    throw PreconditionFailed("linear_supersolution_check: empty history");

  // Sandwich at the initial time, without the decay factor.
  {
    const auto& f0 = history.front();
    for (Eigen::Index j = 0; j < f0.ny(); ++j) {
      const double g = k * eig.gamma_at(f0.grid.gy.point(j));
      for (Eigen::Index i = 0; i < f0.nx(); ++i)
        if (f0.values(i, j) > g + tol_for(g))
          throw PreconditionFailed(
              "linear_supersolution_check: initial data exceeds k * Gamma0");
    }
  }

  SupersolutionReport report;
  report.passes = true;
  const double t0 = history.front().time_stamp;
  for (const auto& f : history) {
    const double decay = std::exp(-eig.lambda * (f.time_stamp - t0));
    for (Eigen::Index j = 0; j < f.ny(); ++j) {
      const double g = k * eig.gamma_at(f.grid.gy.point(j)) * decay;
      const double tol = tol_for(g);
      for (Eigen::Index i = 0; i < f.nx(); ++i) {
        const double excess = f.values(i, j) - g - tol;
        if (excess > report.worst_excess) {
          report.worst_excess = excess;
          report.worst_t = f.time_stamp;
          report.passes = false;
        }
      }
    }
    ++report.snapshots_checked;
  }
  return report;
}

SupersolutionReport pointwise_dominated(const ScalarField2D<double>& a,
                                        const ScalarField2D<double>& b) {
  if (a.nx() != b.nx() || a.ny() != b.ny())
    throw GridMismatch("pointwise_dominated: mismatched fields");
  SupersolutionReport report;
  report.passes = true;
  report.snapshots_checked = 1;
  report.worst_t = a.time_stamp;
  for (Eigen::Index j = 0; j < a.ny(); ++j)
    for (Eigen::Index i = 0; i < a.nx(); ++i) {
      const double excess = a.values(i, j) - b.values(i, j) - tol_for(b.values(i, j));
      if (excess > report.worst_excess) {
        report.worst_excess = excess;
        report.passes = false;
      }
    }
  return report;
}

}  // namespace invlab
