#include "invlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "invlab/errors.hpp"

namespace invlab {

namespace {

// Number of eigenvalues of the symmetric tridiagonal (diag d, offdiag e)
// strictly below sigma, by the Sturm sequence of the LDL^T pivots.
int sturm_count(const Eigen::VectorXd& d, double e, double sigma) {
  int count = 0;
  double t = d[0] - sigma;
  if (t < 0) ++count;
  const double e2 = e * e;
  const double tiny = 1e-300;
  for (Eigen::Index i = 1; i < d.size(); ++i) {
    if (std::abs(t) < tiny) t = t < 0 ? -tiny : tiny;
    t = d[i] - sigma - e2 / t;
    if (t < 0) ++count;
  }
  return count;
}

// Thomas solve of (diag d - sigma, offdiag e) x = b. The shifted matrix is
// positive definite for sigma below the smallest eigenvalue.
void shifted_tridiag_solve(const Eigen::VectorXd& d, double e, double sigma,
                           Eigen::VectorXd& b) {
  const Eigen::Index n = d.size();
  static thread_local std::vector<double> cw;
  cw.resize(static_cast<std::size_t>(n));
  double beta = d[0] - sigma;
  if (beta == 0) beta = 1e-300;
  b[0] /= beta;
  for (Eigen::Index i = 1; i < n; ++i) {
    cw[static_cast<std::size_t>(i)] = e / beta;
    beta = d[i] - sigma - e * cw[static_cast<std::size_t>(i)];
    if (beta == 0) beta = 1e-300;
    b[i] = (b[i] - e * b[i - 1]) / beta;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i)
    b[i] -= cw[static_cast<std::size_t>(i + 1)] * b[i + 1];
}

}  // namespace

double EigenPair::gamma_at(double Y) const {
  if (!grid.contains(Y)) return 0.0;
  const auto [i, f] = grid.locate(Y);
  return (1 - f) * gamma[i] + f * gamma[i + 1];
}

EigenPair dirichlet_eig(const GrowthProfile& profile, double B, double R, double h) {
  if (!(R > 0)) throw std::invalid_argument("dirichlet_eig: R must be > 0");
  if (!(h > 0) || h > R / 50.0)
    throw std::invalid_argument("dirichlet_eig: need 0 < h <= R/50");

  const Eigen::Index m = static_cast<Eigen::Index>(std::llround(2.0 * R / h)) - 1;
  const double hh = 2.0 * R / double(m + 1);
  const double norm = std::sqrt(1.0 + B * B);

  Eigen::VectorXd q(m), d(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double Y = -R + double(i + 1) * hh;
    q[i] = profile(norm * Y);
    d[i] = 2.0 / (hh * hh) - q[i];
  }
  const double e = -1.0 / (hh * hh);

  // Gershgorin bracket, then bisection to the smallest eigenvalue.
  double lo = d.minCoeff() - 2.0 * std::abs(e);
  double hi = d.maxCoeff() + 2.0 * std::abs(e);
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw ConvergenceFailure("dirichlet_eig: non-finite spectral bounds");
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  for (int it = 0; it < 200 && hi - lo > 1e-14 * scale; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sturm_count(d, e, mid) >= 1 ? hi : lo) = mid;
  }
  const double lambda = 0.5 * (lo + hi);

  // Inverse iteration from below the eigenvalue keeps the shift SPD.
  const double sigma = lambda - std::max(1e-8 * scale, 1e-10);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m);
  v.normalize();
  for (int it = 0; it < 4; ++it) {
    shifted_tridiag_solve(d, e, sigma, v);
    const double nrm = v.norm();
    if (!(nrm > 0) || !std::isfinite(nrm))
      throw ConvergenceFailure("dirichlet_eig: inverse iteration failed");
    v /= nrm;
  }

  // Principal eigenfunction is signless: fix positive, verify.
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0) v = -v;
  if ((v.array() <= 0).any())
    throw NonPositiveEigenfunction("dirichlet_eig: computed eigenfunction changes sign");
  v /= v.maxCoeff();

  EigenPair pair;
  pair.lambda = lambda;
  pair.domain = EigenPair::Domain::interval;
  pair.grid = Grid1D<double>(-R, R, m + 2);
  pair.grid_h = hh;
  pair.gamma = Eigen::VectorXd::Zero(m + 2);
  pair.gamma.segment(1, m) = v;

  double res = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double left = i == 0 ? 0.0 : v[i - 1];
    const double right = i == m - 1 ? 0.0 : v[i + 1];
    const double lap = (left - 2.0 * v[i] + right) / (hh * hh);
    res = std::max(res, std::abs(-lap - q[i] * v[i] - lambda * v[i]));
  }
  pair.residual = res;
  return pair;
}

EigenPair generalized_eig(const GrowthProfile& profile, double B, double tol,
                          const GeneralizedEigOptions& opt) {
  if (!(tol > 0)) throw std::invalid_argument("generalized_eig: tol must be > 0");
  double R = opt.R0;
  EigenPair prev = dirichlet_eig(profile, B, R, opt.h);
  while (true) {
    const double R2 = 2.0 * R;
    if (R2 > opt.R_cap)
      throw NoConvergence("generalized_eig: domain cap reached before tolerance");
    EigenPair next = dirichlet_eig(profile, B, R2, opt.h);
    if (std::abs(next.lambda - prev.lambda) < tol) {
      next.domain = EigenPair::Domain::whole_line;
      return next;
    }
    prev = std::move(next);
    R = R2;
  }
}

double harmonic_lambda0(double A, double B) {
  return std::sqrt(A * (1.0 + B * B)) - 1.0;
}

double harmonic_gamma0(double A, double B, double Y) {
  return std::exp(-0.5 * std::sqrt(A * (1.0 + B * B)) * Y * Y);
}

EigenPair harmonic_closed_form(double A, double B, double R, double h) {
  if (!(A > 0)) throw std::invalid_argument("harmonic_closed_form: A must be > 0");
  if (!(B >= 0)) throw std::invalid_argument("harmonic_closed_form: B must be >= 0");
  EigenPair pair;
  pair.lambda = harmonic_lambda0(A, B);
  pair.domain = EigenPair::Domain::whole_line;
  pair.grid = Grid1D<double>::from_spacing(-R, R, h);
  pair.grid_h = pair.grid.spacing();
  pair.gamma.resize(pair.grid.size());
  for (Eigen::Index i = 0; i < pair.grid.size(); ++i)
    pair.gamma[i] = harmonic_gamma0(A, B, pair.grid.point(i));
  // Sampling residual of the exact pair under the discrete stencil.
  const double hh = pair.grid_h;
  const double norm2 = 1.0 + B * B;
  double res = 0.0;
  for (Eigen::Index i = 1; i + 1 < pair.grid.size(); ++i) {
    const double Y = pair.grid.point(i);
    const double lap = (pair.gamma[i - 1] - 2 * pair.gamma[i] + pair.gamma[i + 1]) / (hh * hh);
    const double r = 1.0 - A * norm2 * Y * Y;
    res = std::max(res, std::abs(-lap - r * pair.gamma[i] - pair.lambda * pair.gamma[i]));
  }
  pair.residual = res;
  return pair;
}

double critical_speed(double lambda0, double B) {
  if (!(lambda0 < 0))
    throw NotInvading("critical_speed: lambda0 >= 0 means no invasion");
  return 2.0 * std::sqrt(-lambda0 / (1.0 + B * B));
}

DecayReport decay_certificate(const EigenPair& pair, double kappa_min) {
  if (pair.domain != EigenPair::Domain::whole_line)
    throw PreconditionFailed("decay_certificate: needs a whole-line pair");

  DecayReport report;
  report.kappa_min = kappa_min;

  const double R = pair.grid.hi;
  const double sup = pair.gamma.maxCoeff();
  const double floor = 1e-13 * sup;

  // Outer third of the domain, shrunk inward until past the noise floor.
  double cut = 2.0 * R / 3.0;
  std::vector<double> ys, lg;
  while (cut > R / 6.0) {
    ys.clear();
    lg.clear();
    for (Eigen::Index i = 0; i < pair.grid.size(); ++i) {
      const double Y = pair.grid.point(i);
      if (std::abs(Y) >= cut && pair.gamma[i] > floor) {
        ys.push_back(std::abs(Y));
        lg.push_back(std::log(pair.gamma[i]));
      }
    }
    if (ys.size() >= 8) break;
    cut *= 0.9;
  }
  if (ys.size() < 8)
    throw InsufficientData("decay_certificate: too few resolved outer samples");

  const double n = double(ys.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    sx += ys[i];
    sy += lg[i];
    sxx += ys[i] * ys[i];
    sxy += ys[i] * lg[i];
  }
  const double denom = n * sxx - sx * sx;
  report.slope = (n * sxy - sx * sy) / denom;
  report.intercept = (sy - report.slope * sx) / n;
  report.points_used = static_cast<int>(ys.size());
  report.passes = report.slope <= -kappa_min;
  return report;
}

}  // namespace invlab
