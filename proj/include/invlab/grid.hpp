#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "invlab/errors.hpp"

namespace invlab {

// Uniform 1D grid on [lo, hi] with n_points >= 3 nodes.
template <typename Scalar = double>
struct Grid1D {
  Scalar lo{0};
  Scalar hi{1};
  Eigen::Index n_points{3};

  Grid1D() = default;
  Grid1D(Scalar lo_, Scalar hi_, Eigen::Index n)
      : lo(lo_), hi(hi_), n_points(n) {
    if (!(lo < hi)) throw std::invalid_argument("Grid1D: lo must be < hi");
    if (n_points < 3) throw std::invalid_argument("Grid1D: need >= 3 points");
  }

  // Nearest node count for a requested spacing; actual spacing may differ slightly.
  static Grid1D from_spacing(Scalar lo, Scalar hi, Scalar h) {
    if (!(h > 0)) throw std::invalid_argument("Grid1D: spacing must be > 0");
    const auto n = static_cast<Eigen::Index>(std::llround((hi - lo) / h)) + 1;
    return Grid1D(lo, hi, std::max<Eigen::Index>(n, 3));
  }

  Scalar spacing() const { return (hi - lo) / Scalar(n_points - 1); }
  Scalar point(Eigen::Index i) const { return lo + Scalar(i) * spacing(); }
  Eigen::Index size() const { return n_points; }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> points() const {
    return Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::LinSpaced(n_points, lo, hi);
  }

  // Cell index and fraction for interpolation; valid only if contains(x).
  std::pair<Eigen::Index, Scalar> locate(Scalar x) const {
    const Scalar h = spacing();
    Eigen::Index i = static_cast<Eigen::Index>(std::floor((x - lo) / h));
    i = std::max<Eigen::Index>(0, std::min(i, n_points - 2));
    return {i, (x - point(i)) / h};
  }

  bool contains(Scalar x) const { return x >= lo && x <= hi; }
};

template <typename Scalar = double>
struct Grid2D {
  Grid1D<Scalar> gx;  // X axis
  Grid1D<Scalar> gy;  // Y axis
};

// Rotation between laboratory (x, y) and front-adapted (X, Y) coordinates
// for an optimal-trait line of slope B >= 0.
template <typename Scalar = double>
struct Rotation {
  Scalar slope{0};  // B

  Rotation() = default;
  explicit Rotation(Scalar B) : slope(B) {
    if (!(B >= 0)) throw std::invalid_argument("Rotation: B must be >= 0");
  }

  Scalar norm() const { return std::sqrt(Scalar(1) + slope * slope); }
};

template <typename Scalar>
std::pair<Scalar, Scalar> to_XY(Scalar x, Scalar y, const Rotation<Scalar>& rot) {
  const Scalar n = rot.norm();
  return {(x + rot.slope * y) / n, (y - rot.slope * x) / n};
}

template <typename Scalar>
std::pair<Scalar, Scalar> to_xy(Scalar X, Scalar Y, const Rotation<Scalar>& rot) {
  const Scalar n = rot.norm();
  return {(X - rot.slope * Y) / n, (rot.slope * X + Y) / n};
}

// Sampled density v(t, X, Y); values(i, j) holds the node (X_i, Y_j).
// Column-major storage keeps each fixed-Y line contiguous.
template <typename Scalar = double>
struct ScalarField2D {
  Grid2D<Scalar> grid;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> values;
  Scalar time_stamp{0};

  ScalarField2D() = default;
  explicit ScalarField2D(const Grid2D<Scalar>& g, Scalar t = 0)
      : grid(g),
        values(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(
            g.gx.size(), g.gy.size())),
        time_stamp(t) {}

  Eigen::Index nx() const { return grid.gx.size(); }
  Eigen::Index ny() const { return grid.gy.size(); }
};

// Bilinear sample; zero outside the window.
template <typename Scalar>
Scalar bilinear(const ScalarField2D<Scalar>& f, Scalar X, Scalar Y) {
  if (!f.grid.gx.contains(X) || !f.grid.gy.contains(Y)) return Scalar(0);
  const auto [i, fx] = f.grid.gx.locate(X);
  const auto [j, fy] = f.grid.gy.locate(Y);
  const Scalar v00 = f.values(i, j), v10 = f.values(i + 1, j);
  const Scalar v01 = f.values(i, j + 1), v11 = f.values(i + 1, j + 1);
  return (1 - fx) * ((1 - fy) * v00 + fy * v01) + fx * ((1 - fy) * v10 + fy * v11);
}

// Laboratory x interval whose trait lines stay inside the window in X.
template <typename Scalar>
std::pair<Scalar, Scalar> valid_lab_x_range(const Grid2D<Scalar>& grid,
                                            const Rotation<Scalar>& rot) {
  const Scalar n = rot.norm();
  const Scalar lo = (grid.gx.lo - rot.slope * grid.gy.lo) / n;
  const Scalar hi = (grid.gx.hi - rot.slope * grid.gy.hi) / n;
  return {lo, hi};
}

// Trait-integrated mass N(x) = sqrt(1+B^2) * integral of v(sqrt(1+B^2) x + B s, s) ds,
// trapezoid rule along the Y grid with linear interpolation in X.
// Throws WindowTooNarrow when the integrand at the Y edges exceeds
// trunc_tol_rel times the field maximum.
template <typename Scalar>
Scalar trait_mass(const ScalarField2D<Scalar>& f, const Rotation<Scalar>& rot,
                  Scalar x, Scalar trunc_tol_rel = Scalar(1e-10)) {
  const Scalar n = rot.norm();
  const Scalar hY = f.grid.gy.spacing();
  const Eigen::Index ny = f.ny();
  const Scalar vmax = f.values.size() ? f.values.maxCoeff() : Scalar(0);
  if (vmax <= Scalar(0)) return Scalar(0);

  Scalar sum = 0;
  Scalar edge_lo = 0, edge_hi = 0;
  for (Eigen::Index j = 0; j < ny; ++j) {
    const Scalar s = f.grid.gy.point(j);
    const Scalar val = bilinear(f, n * x + rot.slope * s, s);
    const Scalar w = (j == 0 || j == ny - 1) ? Scalar(0.5) : Scalar(1);
    sum += w * val;
    if (j == 0) edge_lo = val;
    if (j == ny - 1) edge_hi = val;
  }
  if (edge_lo > trunc_tol_rel * vmax || edge_hi > trunc_tol_rel * vmax) {
    throw WindowTooNarrow("trait_mass: integrand not negligible at the Y window edge");
  }
  return n * hY * sum;
}

}  // namespace invlab
