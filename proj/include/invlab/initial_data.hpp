#pragma once

#include "invlab/grid.hpp"
#include "invlab/spectral.hpp"
#include "invlab/tails.hpp"

namespace invlab {

enum class Orientation { along_X, along_x };

// Cross-profile applied to the direction orthogonal to the tail: either the
// sharp indicator of [sigma_minus, sigma_plus] or the principal eigenfunction.
struct YProfile {
  enum class Kind { indicator, eigen_profile };
  Kind kind = Kind::indicator;
  double sigma_minus = -1.0;
  double sigma_plus = 1.0;
};

struct InitialDataSpec {
  TailFamily tail = TailFamily::constant(1.0);
  Orientation orientation = Orientation::along_X;
  YProfile y_profile;
  double amplitude = 1.0;  // overall scale on top of the tail/profile product
};

// Samples the initial density on the rotated-frame grid.
//   along_X: v0(X, Y) = amplitude * tail(X) * profile(Y)
//   along_x: n0(x, y) = amplitude * tail(x) * 1_[sigma-,sigma+](y), rotated
// The eigen profile requires eig; throws GridMismatch when the indicator
// band spans fewer than 4 grid points.
ScalarField2D<double> build_initial_field(const InitialDataSpec& spec,
                                          const Grid2D<double>& grid,
                                          const Rotation<double>& rot,
                                          const EigenPair* eig = nullptr);

}  // namespace invlab
