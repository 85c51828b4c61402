#pragma once

#include <optional>
#include <string>
#include <vector>

#include "invlab/errors.hpp"
#include "invlab/grid.hpp"
#include "invlab/initial_data.hpp"
#include "invlab/pde.hpp"

namespace invlab {

// Flat key-value scenario configuration (dotted sections, one `key = value`
// per line, `#` comments). See README for the full schema.
struct Scenario {
  std::string name = "scenario";

  std::string growth_kind = "quadratic";  // quadratic | tabulated
  double A = 0.25;
  std::string growth_table;  // CSV path, tabulated kind only
  double B = 1.0;

  std::string kernel_kind = "constant_one";  // constant_one | cosine_bounded
  double k_minus = 1.0;
  double k_plus = 1.0;

  std::string orientation = "along_X";  // along_X | along_x
  std::string tail_kind = "compact";    // compact | exponential | light_heavy |
                                        // algebraic | logarithmic | constant
  double tail_plateau = 1.0;
  double tail_support_hi = 2.0;
  double tail_lambda = 1.0;
  double tail_C = 1.0;
  double tail_b = 1.0;
  double tail_a = 1.0;
  double tail_X0 = 2.0;
  std::string y_profile = "indicator";  // indicator | eigen_profile
  double sigma_minus = -1.0;
  double sigma_plus = 1.0;
  double amplitude = 1.0;

  double x_lo = -12.0;  // rotated-frame window
  double x_hi = 28.0;
  double y_half_width = 6.0;
  double h = 0.05;

  double dt = 0.0;  // 0 = default_dt
  double t_end = 10.0;
  int output_stride = 50;
  std::string window_policy = "fixed";  // fixed | translate
  double translate_threshold = 0.70;
  std::string y_boundary = "dirichlet";  // dirichlet | neumann
  double quadrature_tol = 1e-10;
  std::vector<double> field_times;  // fields.csv snapshot times; default t_end

  std::vector<double> mu_abs;
  std::vector<double> mu_plateau_frac = {0.05};
  double eps_fraction = 0.25;  // eps = fraction * (-lambda0_R)
  double eig_R = 8.0;
  double eig_h = 0.01;
  double eig_tol = 1e-4;
  double gamma_small = 0.0;  // 0 = tail C
  double Gamma_big = 0.0;    // 0 = tail C
  double fit_t0 = -1.0;      // < 0 = t_end / 2
  double fit_t1 = -1.0;      // < 0 = t_end

  std::string out_dir = "out";

  bool operator==(const Scenario&) const = default;
};

struct ParseResult {
  std::optional<Scenario> scenario;
  std::vector<SchemaIssue> issues;
};

ParseResult parse_scenario(const std::string& text);
Scenario parse_scenario_or_throw(const std::string& text);
Scenario load_scenario_file(const std::string& path);
std::string render_scenario(const Scenario& s);

// Scenario -> domain objects.
TailFamily make_tail(const Scenario& s);
GrowthProfile make_growth(const Scenario& s);
CompetitionKernel make_kernel(const Scenario& s);
ModelScenario make_model(const Scenario& s);
Grid2D<double> make_window(const Scenario& s);
SolverConfig make_solver_config(const Scenario& s);
InitialDataSpec make_initial_spec(const Scenario& s);

}  // namespace invlab
