#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "invlab/grid.hpp"
#include "invlab/growth.hpp"

namespace invlab {

// Growth, competition and frame bundle the stepper needs.
struct ModelScenario {
  GrowthProfile growth = GrowthProfile::quadratic(0.25);
  CompetitionKernel kernel = CompetitionKernel::constant_one();
  Rotation<double> rot{1.0};
};

enum class WindowPolicy { fixed, translate };
enum class YBoundary { dirichlet, neumann };

struct SolverConfig {
  double dt = 0.0;  // <= 0 selects default_dt
  double t_end = 1.0;
  Grid2D<double> window;
  WindowPolicy window_policy = WindowPolicy::fixed;
  double translate_threshold = 0.70;  // front position as fraction of width
  double translate_fraction = 0.25;   // shift as fraction of width
  double front_level_rel = 0.01;      // front detector level, relative to max
  double y_half_width = 6.0;
  double quadrature_tol = 1e-10;
  int output_stride = 50;
  YBoundary y_boundary = YBoundary::dirichlet;
};

// min(0.25 h^2, 0.1 / (r_max + k_plus N_inf))
double default_dt(double h, double r_max, double k_plus, double n_inf);

struct TranslationEvent {
  double t = 0;
  double shift = 0;
  double dropped_mass_rel_dev = 0;  // dropped columns vs the first kept one
};

struct SimulationState {
  ScalarField2D<double> field;
  double t = 0.0;
  double window_offset_X = 0.0;
  long step_count = 0;
  long clamped_points = 0;
  double max_clamp_frac_per_step = 0.0;
  double min_value_seen = 0.0;
  double max_mass_seen = 0.0;
  double n_inf = 1.0;        // mass bound max(sup initial mass, r_max/k_minus)
  double sigma_width = 1.0;  // effective cross-profile width (blowup scale)
  std::vector<TranslationEvent> translations;
};

struct TailBounds {
  double N_inf = 0;
  double C_tail = 0;
  double kappa = 0;
};

// Fits C e^{-kappa |y - Bx|} over the current field's column maxima.
TailBounds estimate_tail_bounds(const SimulationState& state, const ModelScenario& model);

// Competition field I[v](X, Y): integral of K v along the laboratory-vertical
// line through the point. K == 1 reuses one mass evaluation per lab-x line.
ScalarField2D<double> nonlocal_term(const ScalarField2D<double>& field,
                                    const CompetitionKernel& kernel,
                                    const Rotation<double>& rot,
                                    double quadrature_tol = 1e-10);

// IMEX time integration of dv/dt = dXXv + dYYv + (r~(Y) - I[v]) v in the
// rotated frame: Strang-split Heun reaction around a Peaceman-Rachford
// alternating-direction diffusion step. X ends are zero-flux; Y ends follow
// config.y_boundary (homogeneous Dirichlet by default).
class Simulator {
 public:
  Simulator(ModelScenario model, SolverConfig config, ScalarField2D<double> initial,
            bool nonlocal_enabled = true);

  const SimulationState& state() const { return state_; }
  SimulationState& state() { return state_; }
  double dt() const { return dt_; }

  void advance();
  // Steps to t_end, invoking on_sample every output_stride steps (and at the
  // initial and final times).
  void run(const std::function<void(const SimulationState&)>& on_sample = {});

  // Mass profile N(x) on the auxiliary lab-x grid (valid x range only).
  std::pair<std::vector<double>, std::vector<double>> mass_profile() const;

 private:
  void rebuild_geometry();
  void compute_mass(const Eigen::MatrixXd& values, std::vector<double>& out) const;
  void fill_competition(const Eigen::MatrixXd& values, double t, Eigen::MatrixXd& out);
  void reaction_half_step(double tau);
  void diffusion_step();
  void maybe_translate();
  void check_health();

  ModelScenario model_;
  SolverConfig config_;
  bool nonlocal_enabled_;
  double dt_ = 0;
  double h_ = 0;
  SimulationState state_;

  Eigen::VectorXd r_tilde_;       // r(norm * Y_j) per column
  std::vector<double> mass_x_;    // auxiliary lab-x nodes
  std::vector<double> mass_N_;    // mass on those nodes
  std::vector<double> mass_work_;
  Eigen::MatrixXd comp_;          // competition field I[v]
  Eigen::MatrixXd stage_;         // Heun predictor
  Eigen::MatrixXd work_;          // ADI scratch
  std::vector<double> row_buf_;   // per-sweep scratch, sized ny * threads
  struct ConstTridiag {
    std::vector<double> cprime;
    std::vector<double> inv_beta;
    double s = 0;
    bool neumann = true;
    void init(Eigen::Index n, double s, bool neumann);
    void solve(double* x, Eigen::Index n) const;
  };
  ConstTridiag solve_x_;
  ConstTridiag solve_y_;
};

// One time step of the spec's step operation (state in, state out).
void step(SimulationState& state, const ModelScenario& model, const SolverConfig& config);

}  // namespace invlab
