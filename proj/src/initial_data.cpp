#include "invlab/initial_data.hpp"

#include <cmath>

#include "invlab/errors.hpp"

namespace invlab {

ScalarField2D<double> build_initial_field(const InitialDataSpec& spec,
                                          const Grid2D<double>& grid,
                                          const Rotation<double>& rot,
                                          const EigenPair* eig) {
  const bool use_eigen = spec.y_profile.kind == YProfile::Kind::eigen_profile;
  if (use_eigen && eig == nullptr)
    throw PreconditionFailed("build_initial_field: eigen profile requires an eigenpair");

  const double s_lo = spec.y_profile.sigma_minus;
  const double s_hi = spec.y_profile.sigma_plus;
  if (!use_eigen) {
    if (!(s_lo < s_hi))
      throw std::invalid_argument("build_initial_field: sigma_minus < sigma_plus required");
    // The indicator must be resolved: at least 4 nodes across the band it
    // cuts (a band of perpendicular width (s_hi-s_lo)/norm for along_x).
    const double width = spec.orientation == Orientation::along_X
                             ? (s_hi - s_lo)
                             : (s_hi - s_lo) / rot.norm();
    if (width < 3.0 * grid.gy.spacing())
      throw GridMismatch("build_initial_field: indicator band unresolved by the grid");
  }

  ScalarField2D<double> field(grid, 0.0);
  for (Eigen::Index i = 0; i < field.nx(); ++i) {
    const double X = grid.gx.point(i);
    for (Eigen::Index j = 0; j < field.ny(); ++j) {
      const double Y = grid.gy.point(j);
      double value = 0.0;
      if (spec.orientation == Orientation::along_X) {
        const double profile =
            use_eigen ? eig->gamma_at(Y) : (Y >= s_lo && Y <= s_hi ? 1.0 : 0.0);
        value = spec.tail(X) * profile;
      } else {
        const auto [x, y] = to_xy(X, Y, rot);
        const double indicator = (y >= s_lo && y <= s_hi) ? 1.0 : 0.0;
        value = spec.tail(x) * indicator;
      }
      field.values(i, j) = spec.amplitude * value;
    }
  }
  return field;
}

}  // namespace invlab
