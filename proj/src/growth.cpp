#include "invlab/growth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "invlab/errors.hpp"

namespace invlab {

GrowthProfile GrowthProfile::quadratic(double A) {
  if (!(A > 0)) throw std::invalid_argument("GrowthProfile: A must be positive");
  GrowthProfile p;
  p.kind_ = Kind::quadratic;
  p.A_ = A;
  p.r_max_ = 1.0;
  return p;
}

GrowthProfile GrowthProfile::tabulated(std::vector<double> z, std::vector<double> r) {
  if (z.size() != r.size() || z.size() < 2)
    throw std::invalid_argument("GrowthProfile: table needs >= 2 matched samples");
  if (!std::is_sorted(z.begin(), z.end()))
    throw std::invalid_argument("GrowthProfile: table abscissae must be increasing");
  for (double v : r)
    if (!std::isfinite(v)) throw std::invalid_argument("GrowthProfile: non-finite table value");
  GrowthProfile p;
  p.kind_ = Kind::tabulated;
  p.table_z_ = std::move(z);
  p.table_r_ = std::move(r);
  p.r_max_ = *std::max_element(p.table_r_.begin(), p.table_r_.end());
  return p;
}

GrowthProfile GrowthProfile::tabulated_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("GrowthProfile: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("GrowthProfile: empty table file " + path);
  // First line is a header by contract; reject if it parses as numbers.
  {
    std::istringstream probe(line);
    double a;
    char comma;
    if (probe >> a >> comma)
      throw std::invalid_argument("GrowthProfile: header line required in " + path);
  }
  std::vector<double> zs, rs;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double z, r;
    if (!(row >> z >> r))
      throw std::invalid_argument("GrowthProfile: bad row at line " +
                                  std::to_string(line_no) + " of " + path);
    zs.push_back(z);
    rs.push_back(r);
  }
  return tabulated(std::move(zs), std::move(rs));
}

double GrowthProfile::operator()(double z) const {
  if (kind_ == Kind::quadratic) return 1.0 - A_ * z * z;
  if (z <= table_z_.front()) return table_r_.front();
  if (z >= table_z_.back()) return table_r_.back();
  const auto it = std::upper_bound(table_z_.begin(), table_z_.end(), z);
  const std::size_t i = static_cast<std::size_t>(it - table_z_.begin()) - 1;
  const double f = (z - table_z_[i]) / (table_z_[i + 1] - table_z_[i]);
  return (1 - f) * table_r_[i] + f * table_r_[i + 1];
}

double GrowthProfile::min_on(double z_lo, double z_hi) const {
  if (kind_ == Kind::quadratic)
    return 1.0 - A_ * std::max(z_lo * z_lo, z_hi * z_hi);
  double m = std::min((*this)(z_lo), (*this)(z_hi));
  for (std::size_t i = 0; i < table_z_.size(); ++i)
    if (table_z_[i] > z_lo && table_z_[i] < z_hi) m = std::min(m, table_r_[i]);
  return m;
}

double GrowthProfile::max_abs_on(double z_lo, double z_hi) const {
  return std::max(std::abs(min_on(z_lo, z_hi)), std::abs(r_max_));
}

double eval_growth(const GrowthProfile& profile, double z) { return profile(z); }

ConfinementReport check_confinement(const GrowthProfile& profile,
                                    const std::vector<double>& deltas,
                                    double radius_factor) {
  ConfinementReport report;
  report.deltas = deltas;
  double extent = 10.0;
  if (profile.kind() == GrowthProfile::Kind::quadratic) {
    // Closed form: 1 - A z^2 <= -delta outside |z| = sqrt((1+delta)/A).
    for (double d : deltas)
      report.radii.push_back(std::sqrt((1.0 + d) / profile.curvature()));
    report.confining = true;
    report.detail = "quadratic profile, radii in closed form";
    return report;
  }
  // Table scan on a ladder up to radius_factor times the table extent.
  extent = 1.0;
  {
    // probe both edges of the table via eval; extent from a coarse scan
    for (double z = 0.5; z <= 1e6; z *= 2) {
      extent = z;
      if (profile(z) == profile(2 * z) && profile(-z) == profile(-2 * z)) break;
    }
  }
  const double cap = radius_factor * extent;
  bool all_found = true;
  for (double d : deltas) {
    double found = std::numeric_limits<double>::quiet_NaN();
    for (double radius = 0.25; radius <= cap; radius *= 1.5) {
      bool ok = true;
      for (double z = radius; z <= cap; z += std::max(0.05, radius / 64)) {
        if (profile(z) > -d || profile(-z) > -d) {
          ok = false;
          break;
        }
      }
      if (ok) {
        found = radius;
        break;
      }
    }
    if (std::isnan(found)) all_found = false;
    report.radii.push_back(found);
  }
  report.confining = all_found;
  report.detail = all_found ? "table confining on probe ladder"
                            : "no radius found for at least one delta";
  return report;
}

CompetitionKernel CompetitionKernel::constant_one() {
  CompetitionKernel k;
  k.constant_one_ = true;
  k.k_minus_ = 1.0;
  k.k_plus_ = 1.0;
  return k;
}

CompetitionKernel CompetitionKernel::bounded(double k_minus, double k_plus, Evaluator eval) {
  if (!(k_minus > 0) || !(k_plus >= k_minus))
    throw std::invalid_argument("CompetitionKernel: need 0 < k_minus <= k_plus");
  if (!eval) throw std::invalid_argument("CompetitionKernel: evaluator required");
  CompetitionKernel k;
  k.constant_one_ = false;
  k.k_minus_ = k_minus;
  k.k_plus_ = k_plus;
  k.eval_ = std::move(eval);
  // Deterministic probe lattice; a violation here is a construction error.
  const double pts[] = {-7.3, -2.0, -0.5, 0.0, 0.4, 1.7, 5.9};
  const double ts[] = {0.0, 0.37, 2.1, 11.0};
  for (double t : ts)
    for (double x : pts)
      for (double y : pts)
        for (double yp : pts) {
          const double v = k.eval_(t, x, y, yp);
          if (!(v >= k_minus - 1e-12) || !(v <= k_plus + 1e-12))
            throw std::invalid_argument("CompetitionKernel: evaluator violates bounds");
        }
  return k;
}

double CompetitionKernel::operator()(double t, double x, double y, double yp) const {
  if (constant_one_) return 1.0;
  return eval_(t, x, y, yp);
}

}  // namespace invlab
