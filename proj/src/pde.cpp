#include "invlab/pde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "invlab/errors.hpp"
#include "invlab/parallel.hpp"

namespace invlab {

double default_dt(double h, double r_max, double k_plus, double n_inf) {
  return std::min(0.25 * h * h, 0.1 / (r_max + k_plus * n_inf));
}

namespace {

// Linear sample along the fixed-Y line j at abscissa Xq; zero outside.
inline double sample_line(const Eigen::MatrixXd& values, double x_lo, double inv_h,
                          Eigen::Index nx, double Xq, Eigen::Index j) {
  const double idx = (Xq - x_lo) * inv_h;
  if (idx < 0.0 || idx > double(nx - 1)) return 0.0;
  Eigen::Index i = static_cast<Eigen::Index>(idx);
  if (i >= nx - 1) i = nx - 2;
  const double f = idx - double(i);
  return (1.0 - f) * values(i, j) + f * values(i + 1, j);
}

}  // namespace

void Simulator::ConstTridiag::init(Eigen::Index n, double s_in, bool neumann_in) {
  s = s_in;
  neumann = neumann_in;
  cprime.assign(static_cast<std::size_t>(n), 0.0);
  inv_beta.assign(static_cast<std::size_t>(n), 0.0);
  const double diag = 1.0 + 2.0 * s;
  double beta = diag;
  inv_beta[0] = 1.0 / beta;
  cprime[0] = (neumann ? -2.0 * s : -s) / beta;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double sub = (neumann && i == n - 1) ? -2.0 * s : -s;
    beta = diag - sub * cprime[static_cast<std::size_t>(i - 1)];
    inv_beta[static_cast<std::size_t>(i)] = 1.0 / beta;
    if (i < n - 1) cprime[static_cast<std::size_t>(i)] = -s / beta;
  }
}

void Simulator::ConstTridiag::solve(double* x, Eigen::Index n) const {
  x[0] *= inv_beta[0];
  for (Eigen::Index i = 1; i < n; ++i) {
    const double sub = (neumann && i == n - 1) ? -2.0 * s : -s;
    x[i] = (x[i] - sub * x[i - 1]) * inv_beta[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index i = n - 2; i >= 0; --i)
    x[i] -= cprime[static_cast<std::size_t>(i)] * x[i + 1];
}

Simulator::Simulator(ModelScenario model, SolverConfig config,
                     ScalarField2D<double> initial, bool nonlocal_enabled)
    : model_(std::move(model)), config_(std::move(config)),
      nonlocal_enabled_(nonlocal_enabled) {
  state_.field = std::move(initial);
  state_.t = state_.field.time_stamp;
  if ((state_.field.values.array() < 0).any())
    throw std::invalid_argument("Simulator: initial density must be nonnegative");

  rebuild_geometry();

  // Mass bound N_inf = max(sup of the initial mass, r_max / k_minus).
  compute_mass(state_.field.values, mass_N_);
  const double m0 = mass_N_.empty()
                        ? 0.0
                        : *std::max_element(mass_N_.begin(), mass_N_.end());
  state_.n_inf = std::max(m0, model_.growth.r_max() / model_.kernel.k_minus());
  state_.max_mass_seen = m0;

  dt_ = config_.dt > 0
            ? config_.dt
            : default_dt(h_, model_.growth.r_max(), model_.kernel.k_plus(), state_.n_inf);
}

void Simulator::rebuild_geometry() {
  const auto& grid = state_.field.grid;
  const double hx = grid.gx.spacing(), hy = grid.gy.spacing();
  h_ = std::max(hx, hy);

  const double norm = model_.rot.norm();
  r_tilde_.resize(grid.gy.size());
  for (Eigen::Index j = 0; j < grid.gy.size(); ++j)
    r_tilde_[j] = model_.growth(norm * grid.gy.point(j));

  const auto [x_lo, x_hi] = valid_lab_x_range(grid, model_.rot);
  if (!(x_hi > x_lo))
    throw WindowTooNarrow("Simulator: X window narrower than the rotated Y span");
  const double hx_aux = hx / norm;
  const auto naux = static_cast<std::size_t>(std::ceil((x_hi - x_lo) / hx_aux)) + 1;
  mass_x_.resize(naux);
  const double step_aux = (x_hi - x_lo) / double(naux - 1);
  for (std::size_t k = 0; k < naux; ++k) mass_x_[k] = x_lo + double(k) * step_aux;

  comp_.setZero(grid.gx.size(), grid.gy.size());
  stage_.resize(grid.gx.size(), grid.gy.size());
  work_.resize(grid.gx.size(), grid.gy.size());
}

void Simulator::compute_mass(const Eigen::MatrixXd& values, std::vector<double>& out) const {
  const auto& grid = state_.field.grid;
  const double norm = model_.rot.norm();
  const double B = model_.rot.slope;
  const double hy = grid.gy.spacing();
  const double inv_hx = 1.0 / grid.gx.spacing();
  const Eigen::Index nx = grid.gx.size(), ny = grid.gy.size();
  const double x_grid_lo = grid.gx.lo;

  out.resize(mass_x_.size());
  parallel_for(static_cast<std::int64_t>(mass_x_.size()), [&](std::int64_t k) {
    const double base = norm * mass_x_[static_cast<std::size_t>(k)];
    double acc = 0.0;
    for (Eigen::Index j = 0; j < ny; ++j) {
      const double w = (j == 0 || j == ny - 1) ? 0.5 : 1.0;
      const double Xq = base + B * grid.gy.point(j);
      acc += w * sample_line(values, x_grid_lo, inv_hx, nx, Xq, j);
    }
    out[static_cast<std::size_t>(k)] = norm * hy * acc;
  });
}

void Simulator::fill_competition(const Eigen::MatrixXd& values, double t,
                                 Eigen::MatrixXd& out) {
  const auto& grid = state_.field.grid;
  const double norm = model_.rot.norm();
  const double B = model_.rot.slope;
  const Eigen::Index nx = grid.gx.size(), ny = grid.gy.size();

  if (model_.kernel.is_constant_one()) {
    compute_mass(values, mass_N_);
    for (double m : mass_N_) state_.max_mass_seen = std::max(state_.max_mass_seen, m);

    const double x0 = mass_x_.front();
    const double inv_step = double(mass_x_.size() - 1) / (mass_x_.back() - x0);
    const auto interp_mass = [&](double x) -> double {
      double idx = (x - x0) * inv_step;
      idx = std::clamp(idx, 0.0, double(mass_x_.size() - 1));
      auto k = static_cast<std::size_t>(idx);
      if (k >= mass_x_.size() - 1) k = mass_x_.size() - 2;
      const double f = idx - double(k);
      return (1.0 - f) * mass_N_[k] + f * mass_N_[k + 1];
    };

    parallel_for(nx, [&](std::int64_t i) {
      const double Xi = grid.gx.point(i);
      if (B == 0.0) {
        const double m = interp_mass(Xi);
        for (Eigen::Index j = 0; j < ny; ++j) out(i, j) = m;
      } else {
        for (Eigen::Index j = 0; j < ny; ++j)
          out(i, j) = interp_mass((Xi - B * grid.gy.point(j)) / norm);
      }
    });
    return;
  }

  // General bounded kernel: per-point quadrature along the lab-vertical line,
  // parametrized by the Y coordinate s of the running point (x, y').
  const double hy = grid.gy.spacing();
  const double inv_hx = 1.0 / grid.gx.spacing();
  const double x_grid_lo = grid.gx.lo;
  parallel_for(nx, [&](std::int64_t i) {
    const double Xi = grid.gx.point(i);
    for (Eigen::Index j = 0; j < ny; ++j) {
      const auto [x, y] = to_xy(Xi, grid.gy.point(j), model_.rot);
      double acc = 0.0;
      for (Eigen::Index jj = 0; jj < ny; ++jj) {
        const double w = (jj == 0 || jj == ny - 1) ? 0.5 : 1.0;
        const double s = grid.gy.point(jj);
        const double yp = B * x + norm * s;
        const double v = sample_line(values, x_grid_lo, inv_hx, nx, norm * x + B * s, jj);
        acc += w * model_.kernel(t, x, y, yp) * v;
      }
      out(i, j) = norm * hy * acc;
    }
  });
}

void Simulator::reaction_half_step(double tau) {
  auto& v = state_.field.values;
  const Eigen::Index nx = v.rows(), ny = v.cols();

  if (nonlocal_enabled_) fill_competition(v, state_.t, comp_);

  parallel_for(ny, [&](std::int64_t j) {
    for (Eigen::Index i = 0; i < nx; ++i) {
      work_(i, j) = (r_tilde_[j] - comp_(i, j)) * v(i, j);
      stage_(i, j) = std::max(0.0, v(i, j) + tau * work_(i, j));
    }
  });

  if (nonlocal_enabled_) fill_competition(stage_, state_.t + tau, comp_);

  long clamped = 0;
  double min_seen = 0.0;
  for (Eigen::Index j = 0; j < ny; ++j)
    for (Eigen::Index i = 0; i < nx; ++i) {
      const double k2 = (r_tilde_[j] - comp_(i, j)) * stage_(i, j);
      double next = v(i, j) + 0.5 * tau * (work_(i, j) + k2);
      if (next < 0.0) {
        min_seen = std::min(min_seen, next);
        next = 0.0;
        ++clamped;
      }
      v(i, j) = next;
    }
  state_.clamped_points += clamped;
  state_.min_value_seen = std::min(state_.min_value_seen, min_seen);
  state_.max_clamp_frac_per_step =
      std::max(state_.max_clamp_frac_per_step, double(clamped) / double(nx * ny));
}

void Simulator::diffusion_step() {
  auto& v = state_.field.values;
  const auto& grid = state_.field.grid;
  const Eigen::Index nx = v.rows(), ny = v.cols();
  const double theta = 0.5 * dt_;
  const double sx = theta / (grid.gx.spacing() * grid.gx.spacing());
  const double sy = theta / (grid.gy.spacing() * grid.gy.spacing());
  const bool neumann_y = config_.y_boundary == YBoundary::neumann;

  if (solve_x_.inv_beta.size() != static_cast<std::size_t>(nx) || solve_x_.s != sx)
    solve_x_.init(nx, sx, true);
  const Eigen::Index ny_solve = neumann_y ? ny : ny - 2;
  if (solve_y_.inv_beta.size() != static_cast<std::size_t>(ny_solve) || solve_y_.s != sy)
    solve_y_.init(ny_solve, sy, neumann_y);

  // work = (I + theta DYY) v
  parallel_for(ny, [&](std::int64_t j) {
    if (!neumann_y && (j == 0 || j == ny - 1)) {
      work_.col(j).setZero();
      return;
    }
    for (Eigen::Index i = 0; i < nx; ++i) {
      const double lo = j == 0 ? v(i, 1) : v(i, j - 1);
      const double hi = j == ny - 1 ? v(i, ny - 2) : v(i, j + 1);
      work_(i, j) = v(i, j) + sy * (lo - 2.0 * v(i, j) + hi);
    }
  });

  // solve (I - theta DXX) column by column (zero-flux ends in X)
  parallel_for(ny, [&](std::int64_t j) {
    if (!neumann_y && (j == 0 || j == ny - 1)) return;
    solve_x_.solve(work_.col(j).data(), nx);
  });

  // stage = (I + theta DXX) work
  parallel_for(ny, [&](std::int64_t j) {
    if (!neumann_y && (j == 0 || j == ny - 1)) {
      stage_.col(j).setZero();
      return;
    }
    for (Eigen::Index i = 0; i < nx; ++i) {
      const double lo = i == 0 ? work_(1, j) : work_(i - 1, j);
      const double hi = i == nx - 1 ? work_(nx - 2, j) : work_(i + 1, j);
      stage_(i, j) = work_(i, j) + sx * (lo - 2.0 * work_(i, j) + hi);
    }
  });

  // solve (I - theta DYY) row by row
  parallel_for(nx, [&](std::int64_t i) {
    static thread_local std::vector<double> buf;
    buf.resize(static_cast<std::size_t>(ny));
    if (neumann_y) {
      for (Eigen::Index j = 0; j < ny; ++j) buf[static_cast<std::size_t>(j)] = stage_(i, j);
      solve_y_.solve(buf.data(), ny);
      for (Eigen::Index j = 0; j < ny; ++j) v(i, j) = buf[static_cast<std::size_t>(j)];
    } else {
      for (Eigen::Index j = 1; j < ny - 1; ++j)
        buf[static_cast<std::size_t>(j - 1)] = stage_(i, j);
      solve_y_.solve(buf.data(), ny - 2);
      v(i, 0) = 0.0;
      v(i, ny - 1) = 0.0;
      for (Eigen::Index j = 1; j < ny - 1; ++j)
        v(i, j) = buf[static_cast<std::size_t>(j - 1)];
    }
  });

  // ADI is not positivity preserving; clamp undershoots like the reaction.
  long clamped = 0;
  double min_seen = 0.0;
  for (Eigen::Index j = 0; j < ny; ++j)
    for (Eigen::Index i = 0; i < nx; ++i)
      if (v(i, j) < 0.0) {
        min_seen = std::min(min_seen, v(i, j));
        v(i, j) = 0.0;
        ++clamped;
      }
  state_.clamped_points += clamped;
  state_.min_value_seen = std::min(state_.min_value_seen, min_seen);
  state_.max_clamp_frac_per_step =
      std::max(state_.max_clamp_frac_per_step, double(clamped) / double(nx * ny));
}

void Simulator::maybe_translate() {
  if (config_.window_policy != WindowPolicy::translate) return;
  auto& v = state_.field.values;
  auto& grid = state_.field.grid;
  const Eigen::Index nx = v.rows(), ny = v.cols();
  const double vmax = v.maxCoeff();
  if (!(vmax > 0)) return;

  const double level = config_.front_level_rel * vmax;
  Eigen::Index front = -1;
  for (Eigen::Index i = nx - 1; i >= 0; --i) {
    if (v.row(i).maxCoeff() > level) {
      front = i;
      break;
    }
  }
  if (front < 0) return;
  const double width = grid.gx.hi - grid.gx.lo;
  if (grid.gx.point(front) - grid.gx.lo < config_.translate_threshold * width) return;

  const auto shift = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::llround(config_.translate_fraction * double(nx - 1))));

  // Dropped columns should already sit at the plateau; log their spread
  // relative to the first kept column.
  const double hy = grid.gy.spacing();
  const auto col_mass = [&](Eigen::Index i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < ny; ++j)
      acc += ((j == 0 || j == ny - 1) ? 0.5 : 1.0) * v(i, j);
    return acc * hy * model_.rot.norm();
  };
  const double ref = col_mass(shift);
  double dev = 0.0;
  for (Eigen::Index i = 0; i < shift; ++i)
    dev = std::max(dev, std::abs(col_mass(i) - ref) / std::max(ref, 1e-300));

  for (Eigen::Index j = 0; j < ny; ++j) {
    for (Eigen::Index i = 0; i + shift < nx; ++i) v(i, j) = v(i + shift, j);
    for (Eigen::Index i = nx - shift; i < nx; ++i) v(i, j) = 0.0;
  }
  const double dx = double(shift) * grid.gx.spacing();
  grid.gx = Grid1D<double>(grid.gx.lo + dx, grid.gx.hi + dx, nx);
  state_.window_offset_X += dx;
  state_.translations.push_back({state_.t, dx, dev});
  rebuild_geometry();
}

void Simulator::check_health() {
  const auto& v = state_.field.values;
  const Eigen::Index ny = v.cols();
  const double vmax = v.maxCoeff();
  if (!std::isfinite(vmax) ||
      vmax > 1e3 * state_.n_inf / std::max(state_.sigma_width, 1e-300))
    throw Blowup("Simulator: field exceeded the stability cap at t = " +
                 std::to_string(state_.t));
  if (vmax > 0 && config_.y_boundary == YBoundary::dirichlet) {
    const double edge = std::max(v.col(1).maxCoeff(), v.col(ny - 2).maxCoeff());
    if (edge > config_.quadrature_tol * vmax * 10.0)
      throw WindowTooNarrow("Simulator: density not negligible at the Y edges, t = " +
                            std::to_string(state_.t));
  }
}

void Simulator::advance() {
  reaction_half_step(0.5 * dt_);
  diffusion_step();
  reaction_half_step(0.5 * dt_);
  state_.t += dt_;
  state_.field.time_stamp = state_.t;
  ++state_.step_count;
  maybe_translate();
  check_health();
}

void Simulator::run(const std::function<void(const SimulationState&)>& on_sample) {
  const long steps = std::lround(config_.t_end / dt_);
  if (on_sample) on_sample(state_);
  for (long n = 1; n <= steps; ++n) {
    advance();
    if (on_sample && (n % config_.output_stride == 0 || n == steps)) on_sample(state_);
  }
}

std::pair<std::vector<double>, std::vector<double>> Simulator::mass_profile() const {
  std::vector<double> N;
  compute_mass(state_.field.values, N);
  return {mass_x_, N};
}

void step(SimulationState& state, const ModelScenario& model, const SolverConfig& config) {
  Simulator sim(model, config, state.field);
  auto& s = sim.state();
  const double n_inf = s.n_inf;  // recomputed bound; keep the larger one
  s = state;
  s.n_inf = std::max(state.n_inf, n_inf);
  sim.advance();
  state = sim.state();
}

ScalarField2D<double> nonlocal_term(const ScalarField2D<double>& field,
                                    const CompetitionKernel& kernel,
                                    const Rotation<double>& rot,
                                    double quadrature_tol) {
  ScalarField2D<double> out(field.grid, field.time_stamp);
  const double norm = rot.norm();
  const double B = rot.slope;
  const double hy = field.grid.gy.spacing();
  const double inv_hx = 1.0 / field.grid.gx.spacing();
  const Eigen::Index nx = field.nx(), ny = field.ny();
  const double vmax = field.values.size() ? field.values.maxCoeff() : 0.0;
  if (vmax > 0) {
    const double edge =
        std::max(field.values.col(0).maxCoeff(), field.values.col(ny - 1).maxCoeff());
    if (edge > quadrature_tol * vmax * 10.0)
      throw WindowTooNarrow("nonlocal_term: density not negligible at the Y edges");
  }
  parallel_for(nx, [&](std::int64_t i) {
    const double Xi = field.grid.gx.point(i);
    for (Eigen::Index j = 0; j < ny; ++j) {
      const auto [x, y] = to_xy(Xi, field.grid.gy.point(j), rot);
      double acc = 0.0;
      for (Eigen::Index jj = 0; jj < ny; ++jj) {
        const double w = (jj == 0 || jj == ny - 1) ? 0.5 : 1.0;
        const double s = field.grid.gy.point(jj);
        const double K = kernel.is_constant_one()
                             ? 1.0
                             : kernel(field.time_stamp, x, y, B * x + norm * s);
        acc += w * K * sample_line(field.values, field.grid.gx.lo, inv_hx, nx,
                                   norm * x + B * s, jj);
      }
      out.values(i, j) = norm * hy * acc;
    }
  });
  return out;
}

TailBounds estimate_tail_bounds(const SimulationState& state, const ModelScenario& model) {
  TailBounds bounds;
  bounds.N_inf = state.n_inf;
  const auto& v = state.field.values;
  const auto& gy = state.field.grid.gy;
  const double vmax = v.maxCoeff();
  if (!(vmax > 0)) return bounds;

  // Fit log of the column maxima against |y - Bx| = norm * |Y|.
  const double norm = model.rot.norm();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (Eigen::Index j = 0; j < gy.size(); ++j) {
    const double m = v.col(j).maxCoeff();
    const double z = norm * std::abs(gy.point(j));
    if (m > 1e-13 * vmax && z > 0.3 * norm * gy.hi) {
      const double lg = std::log(m);
      sx += z;
      sy += lg;
      sxx += z * z;
      sxy += z * lg;
      ++n;
    }
  }
  if (n >= 4) {
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double inter = (sy - slope * sx) / n;
    bounds.kappa = -slope;
    bounds.C_tail = std::exp(inter);
  }
  return bounds;
}

}  // namespace invlab
