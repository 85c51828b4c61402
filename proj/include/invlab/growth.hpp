#pragma once

#include <functional>
#include <string>
#include <vector>

namespace invlab {

// Growth rate r(z) of the trait offset z = y - Bx. The quadratic kind is
// r(z) = 1 - A z^2; tabulated kinds interpolate a sample table linearly and
// extend with the edge values outside it.
class GrowthProfile {
 public:
  enum class Kind { quadratic, tabulated };

  static GrowthProfile quadratic(double A);
  static GrowthProfile tabulated(std::vector<double> z, std::vector<double> r);
  // Two-column CSV (z, r), header line required.
  static GrowthProfile tabulated_from_csv(const std::string& path);

  Kind kind() const { return kind_; }
  double curvature() const { return A_; }  // quadratic only
  double r_max() const { return r_max_; }

  double operator()(double z) const;
  // Minimum over [z_lo, z_hi] (table scan / vertex arithmetic).
  double min_on(double z_lo, double z_hi) const;
  // Largest |r| the window can see; used for time-step advisories.
  double max_abs_on(double z_lo, double z_hi) const;

 private:
  GrowthProfile() = default;
  Kind kind_ = Kind::quadratic;
  double A_ = 1.0;
  double r_max_ = 1.0;
  std::vector<double> table_z_;
  std::vector<double> table_r_;
};

double eval_growth(const GrowthProfile& profile, double z);

// Testable surrogate for the confinement property: for each probed delta,
// search for a radius beyond which r <= -delta.
struct ConfinementReport {
  bool confining = false;
  std::vector<double> deltas;
  std::vector<double> radii;  // radius found per delta; NaN when none
  std::string detail;
};

ConfinementReport check_confinement(const GrowthProfile& profile,
                                    const std::vector<double>& deltas = {0.5, 1.0, 2.0},
                                    double radius_factor = 10.0);

// Competition kernel K(t, x, y, y') bounded between k_minus and k_plus.
// The constant_one kind unlocks the fast mass-reuse path in the solver.
class CompetitionKernel {
 public:
  using Evaluator = std::function<double(double t, double x, double y, double yp)>;

  static CompetitionKernel constant_one();
  // Spot-checks the bounds on a deterministic probe set at construction.
  static CompetitionKernel bounded(double k_minus, double k_plus, Evaluator eval);

  bool is_constant_one() const { return constant_one_; }
  double k_minus() const { return k_minus_; }
  double k_plus() const { return k_plus_; }
  double operator()(double t, double x, double y, double yp) const;

 private:
  CompetitionKernel() = default;
  bool constant_one_ = true;
  double k_minus_ = 1.0;
  double k_plus_ = 1.0;
  Evaluator eval_;
};

}  // namespace invlab
