#pragma once

#include <vector>

#include "invlab/grid.hpp"
#include "invlab/spectral.hpp"

namespace invlab {

struct SupersolutionReport {
  bool passes = false;
  double worst_excess = 0.0;  // largest (v - bound - tol), <= 0 when passing
  double worst_t = 0.0;
  int snapshots_checked = 0;
};

// Verifies v(t,X,Y) <= k Gamma0(Y) exp(-lambda0 t) at every snapshot, within
// tolerance 1e-6 + 1e-3 * bound per point. The initial snapshot must already
// sit below k Gamma0.
SupersolutionReport linear_supersolution_check(
    const std::vector<ScalarField2D<double>>& history, const EigenPair& eig, double k);

// Pointwise domination a <= b within the same per-point tolerance; used for
// nonlocal-vs-linear comparisons on matched snapshots.
SupersolutionReport pointwise_dominated(const ScalarField2D<double>& a,
                                        const ScalarField2D<double>& b);

}  // namespace invlab
