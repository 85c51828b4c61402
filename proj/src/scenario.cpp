#include "invlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace invlab {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt(v[i]);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  char* end = nullptr;
  const std::string t = trim(s);
  if (t.empty()) return false;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size() && std::isfinite(out);
}

bool parse_list(const std::string& s, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v;
    if (!parse_double(item, v)) return false;
    out.push_back(v);
  }
  return true;
}

bool parse_int(const std::string& s, int& out) {
  double v;
  if (!parse_double(s, v)) return false;
  if (v != std::floor(v)) return false;
  out = static_cast<int>(v);
  return true;
}

struct Field {
  enum class Type { real, integer, text, list } type;
  void* ptr;
};

std::map<std::string, Field> schema(Scenario& s) {
  using T = Field::Type;
  return {
      {"name", {T::text, &s.name}},
      {"growth.kind", {T::text, &s.growth_kind}},
      {"growth.A", {T::real, &s.A}},
      {"growth.table", {T::text, &s.growth_table}},
      {"B", {T::real, &s.B}},
      {"kernel.kind", {T::text, &s.kernel_kind}},
      {"kernel.k_minus", {T::real, &s.k_minus}},
      {"kernel.k_plus", {T::real, &s.k_plus}},
      {"init.orientation", {T::text, &s.orientation}},
      {"init.tail.kind", {T::text, &s.tail_kind}},
      {"init.tail.plateau", {T::real, &s.tail_plateau}},
      {"init.tail.support_hi", {T::real, &s.tail_support_hi}},
      {"init.tail.lambda", {T::real, &s.tail_lambda}},
      {"init.tail.C", {T::real, &s.tail_C}},
      {"init.tail.b", {T::real, &s.tail_b}},
      {"init.tail.a", {T::real, &s.tail_a}},
      {"init.tail.X0", {T::real, &s.tail_X0}},
      {"init.y_profile", {T::text, &s.y_profile}},
      {"init.sigma_minus", {T::real, &s.sigma_minus}},
      {"init.sigma_plus", {T::real, &s.sigma_plus}},
      {"init.amplitude", {T::real, &s.amplitude}},
      {"window.x_lo", {T::real, &s.x_lo}},
      {"window.x_hi", {T::real, &s.x_hi}},
      {"window.y_half_width", {T::real, &s.y_half_width}},
      {"grid.h", {T::real, &s.h}},
      {"solver.dt", {T::real, &s.dt}},
      {"solver.t_end", {T::real, &s.t_end}},
      {"solver.output_stride", {T::integer, &s.output_stride}},
      {"solver.window_policy", {T::text, &s.window_policy}},
      {"solver.translate_threshold", {T::real, &s.translate_threshold}},
      {"solver.y_boundary", {T::text, &s.y_boundary}},
      {"solver.quadrature_tol", {T::real, &s.quadrature_tol}},
      {"solver.field_times", {T::list, &s.field_times}},
      {"analysis.mu_abs", {T::list, &s.mu_abs}},
      {"analysis.mu_plateau_frac", {T::list, &s.mu_plateau_frac}},
      {"analysis.eps_fraction", {T::real, &s.eps_fraction}},
      {"analysis.R", {T::real, &s.eig_R}},
      {"analysis.eig_h", {T::real, &s.eig_h}},
      {"analysis.eig_tol", {T::real, &s.eig_tol}},
      {"analysis.gamma_small", {T::real, &s.gamma_small}},
      {"analysis.Gamma_big", {T::real, &s.Gamma_big}},
      {"analysis.fit_t0", {T::real, &s.fit_t0}},
      {"analysis.fit_t1", {T::real, &s.fit_t1}},
      {"output.dir", {T::text, &s.out_dir}},
  };
}

bool one_of(const std::string& v, std::initializer_list<const char*> opts) {
  return std::any_of(opts.begin(), opts.end(),
                     [&](const char* o) { return v == o; });
}

void validate(const Scenario& s, std::vector<SchemaIssue>& issues,
              const std::map<std::string, int>& where) {
  const auto line_of = [&](const std::string& key) {
    const auto it = where.find(key);
    return it == where.end() ? 0 : it->second;
  };
  const auto bad = [&](const std::string& key, const std::string& msg) {
    issues.push_back({line_of(key), msg});
  };

  if (!one_of(s.growth_kind, {"quadratic", "tabulated"}))
    bad("growth.kind", "growth.kind must be quadratic or tabulated");
  if (s.growth_kind == "quadratic" && !(s.A > 0)) bad("growth.A", "A must be positive");
  if (s.growth_kind == "tabulated" && s.growth_table.empty())
    bad("growth.table", "tabulated growth requires growth.table");
  if (!(s.B >= 0)) bad("B", "B must be >= 0");

  if (!one_of(s.kernel_kind, {"constant_one", "cosine_bounded"}))
    bad("kernel.kind", "kernel.kind must be constant_one or cosine_bounded");
  if (s.kernel_kind == "cosine_bounded" && !(s.k_minus > 0 && s.k_plus >= s.k_minus))
    bad("kernel.k_minus", "need 0 < k_minus <= k_plus");

  if (!one_of(s.orientation, {"along_X", "along_x"}))
    bad("init.orientation", "orientation must be along_X or along_x");
  if (!one_of(s.tail_kind,
              {"compact", "exponential", "light_heavy", "algebraic", "logarithmic",
               "constant"}))
    bad("init.tail.kind", "unknown tail kind");
  if (!(s.tail_plateau > 0)) bad("init.tail.plateau", "plateau must be positive");
  if (s.tail_kind == "exponential" && !(s.tail_lambda > 0))
    bad("init.tail.lambda", "lambda must be positive");
  if (s.tail_kind == "light_heavy" && !(s.tail_a > 0 && s.tail_a < 1))
    bad("init.tail.a", "light_heavy needs a in (0,1)");
  if ((s.tail_kind == "light_heavy" || s.tail_kind == "algebraic" ||
       s.tail_kind == "logarithmic") &&
      !(s.tail_C > 0 && s.tail_a > 0))
    bad("init.tail.C", "tail constants must be positive");
  if (s.tail_kind == "light_heavy" && !(s.tail_b > 0))
    bad("init.tail.b", "b must be positive");
  if (s.tail_kind == "algebraic" && !(s.tail_X0 > 0))
    bad("init.tail.X0", "algebraic needs X0 > 0");
  if (s.tail_kind == "logarithmic" && !(s.tail_X0 > 1))
    bad("init.tail.X0", "logarithmic needs X0 > 1");
  if (!one_of(s.y_profile, {"indicator", "eigen_profile"}))
    bad("init.y_profile", "y_profile must be indicator or eigen_profile");
  if (!(s.sigma_minus < s.sigma_plus))
    bad("init.sigma_minus", "need sigma_minus < sigma_plus");
  if (!(s.amplitude > 0)) bad("init.amplitude", "amplitude must be positive");

  if (!(s.x_lo < s.x_hi)) bad("window.x_lo", "need x_lo < x_hi");
  if (!(s.y_half_width > 0)) bad("window.y_half_width", "y_half_width must be positive");
  if (!(s.h > 0)) bad("grid.h", "h must be positive");
  if (!(s.dt >= 0)) bad("solver.dt", "dt must be >= 0 (0 = automatic)");
  if (!(s.t_end > 0)) bad("solver.t_end", "t_end must be positive");
  if (s.output_stride < 1) bad("solver.output_stride", "output_stride must be >= 1");
  if (!one_of(s.window_policy, {"fixed", "translate"}))
    bad("solver.window_policy", "window_policy must be fixed or translate");
  if (!(s.translate_threshold > 0 && s.translate_threshold < 1))
    bad("solver.translate_threshold", "translate_threshold must be in (0,1)");
  if (!one_of(s.y_boundary, {"dirichlet", "neumann"}))
    bad("solver.y_boundary", "y_boundary must be dirichlet or neumann");
  if (!(s.quadrature_tol > 0)) bad("solver.quadrature_tol", "quadrature_tol must be positive");

  for (double m : s.mu_abs)
    if (!(m > 0)) bad("analysis.mu_abs", "mu values must be positive");
  for (double m : s.mu_plateau_frac)
    if (!(m > 0 && m <= 1)) bad("analysis.mu_plateau_frac", "fractions must be in (0,1]");
  if (!(s.eps_fraction > 0 && s.eps_fraction < 1))
    bad("analysis.eps_fraction", "eps_fraction must be in (0,1)");
  if (!(s.eig_R > 0)) bad("analysis.R", "R must be positive");
  if (!(s.eig_h > 0 && s.eig_h <= s.eig_R / 50.0))
    bad("analysis.eig_h", "need 0 < eig_h <= R/50");
  if (!(s.eig_tol > 0)) bad("analysis.eig_tol", "eig_tol must be positive");
  if (s.fit_t0 >= 0 && s.fit_t1 >= 0 && !(s.fit_t0 < s.fit_t1))
    bad("analysis.fit_t0", "need fit_t0 < fit_t1");
}

}  // namespace

ParseResult parse_scenario(const std::string& text) {
  ParseResult result;
  Scenario s;
  auto fields = schema(s);
  std::map<std::string, int> where;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      result.issues.push_back({line_no, "expected `key = value`"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = fields.find(key);
    if (it == fields.end()) {
      result.issues.push_back({line_no, "unknown key `" + key + "`"});
      continue;
    }
    where[key] = line_no;
    bool ok = true;
    switch (it->second.type) {
      case Field::Type::real:
        ok = parse_double(value, *static_cast<double*>(it->second.ptr));
        break;
      case Field::Type::integer:
        ok = parse_int(value, *static_cast<int*>(it->second.ptr));
        break;
      case Field::Type::text:
        *static_cast<std::string*>(it->second.ptr) = value;
        break;
      case Field::Type::list:
        ok = parse_list(value, *static_cast<std::vector<double>*>(it->second.ptr));
        break;
    }
    if (!ok) result.issues.push_back({line_no, "cannot parse value for `" + key + "`"});
  }

  validate(s, result.issues, where);
  if (result.issues.empty()) result.scenario = std::move(s);
  return result;
}

Scenario parse_scenario_or_throw(const std::string& text) {
  auto result = parse_scenario(text);
  if (!result.scenario) throw SchemaError(std::move(result.issues));
  return *result.scenario;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError({{0, "cannot open scenario file " + path}});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_or_throw(buf.str());
}

std::string render_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "name = " << s.name << "\n";
  out << "growth.kind = " << s.growth_kind << "\n";
  out << "growth.A = " << fmt(s.A) << "\n";
  if (!s.growth_table.empty()) out << "growth.table = " << s.growth_table << "\n";
  out << "B = " << fmt(s.B) << "\n";
  out << "kernel.kind = " << s.kernel_kind << "\n";
  out << "kernel.k_minus = " << fmt(s.k_minus) << "\n";
  out << "kernel.k_plus = " << fmt(s.k_plus) << "\n";
  out << "init.orientation = " << s.orientation << "\n";
  out << "init.tail.kind = " << s.tail_kind << "\n";
  out << "init.tail.plateau = " << fmt(s.tail_plateau) << "\n";
  out << "init.tail.support_hi = " << fmt(s.tail_support_hi) << "\n";
  out << "init.tail.lambda = " << fmt(s.tail_lambda) << "\n";
  out << "init.tail.C = " << fmt(s.tail_C) << "\n";
  out << "init.tail.b = " << fmt(s.tail_b) << "\n";
  out << "init.tail.a = " << fmt(s.tail_a) << "\n";
  out << "init.tail.X0 = " << fmt(s.tail_X0) << "\n";
  out << "init.y_profile = " << s.y_profile << "\n";
  out << "init.sigma_minus = " << fmt(s.sigma_minus) << "\n";
  out << "init.sigma_plus = " << fmt(s.sigma_plus) << "\n";
  out << "init.amplitude = " << fmt(s.amplitude) << "\n";
  out << "window.x_lo = " << fmt(s.x_lo) << "\n";
  out << "window.x_hi = " << fmt(s.x_hi) << "\n";
  out << "window.y_half_width = " << fmt(s.y_half_width) << "\n";
  out << "grid.h = " << fmt(s.h) << "\n";
  out << "solver.dt = " << fmt(s.dt) << "\n";
  out << "solver.t_end = " << fmt(s.t_end) << "\n";
  out << "solver.output_stride = " << s.output_stride << "\n";
  out << "solver.window_policy = " << s.window_policy << "\n";
  out << "solver.translate_threshold = " << fmt(s.translate_threshold) << "\n";
  out << "solver.y_boundary = " << s.y_boundary << "\n";
  out << "solver.quadrature_tol = " << fmt(s.quadrature_tol) << "\n";
  if (!s.field_times.empty()) out << "solver.field_times = " << fmt(s.field_times) << "\n";
  if (!s.mu_abs.empty()) out << "analysis.mu_abs = " << fmt(s.mu_abs) << "\n";
  if (!s.mu_plateau_frac.empty())
    out << "analysis.mu_plateau_frac = " << fmt(s.mu_plateau_frac) << "\n";
  out << "analysis.eps_fraction = " << fmt(s.eps_fraction) << "\n";
  out << "analysis.R = " << fmt(s.eig_R) << "\n";
  out << "analysis.eig_h = " << fmt(s.eig_h) << "\n";
  out << "analysis.eig_tol = " << fmt(s.eig_tol) << "\n";
  out << "analysis.gamma_small = " << fmt(s.gamma_small) << "\n";
  out << "analysis.Gamma_big = " << fmt(s.Gamma_big) << "\n";
  out << "analysis.fit_t0 = " << fmt(s.fit_t0) << "\n";
  out << "analysis.fit_t1 = " << fmt(s.fit_t1) << "\n";
  out << "output.dir = " << s.out_dir << "\n";
  return out.str();
}

TailFamily make_tail(const Scenario& s) {
  if (s.tail_kind == "compact")
    return TailFamily::compact(s.tail_support_hi, s.tail_plateau);
  if (s.tail_kind == "exponential")
    return TailFamily::exponential(s.tail_lambda, s.tail_plateau);
  if (s.tail_kind == "light_heavy")
    return TailFamily::light_heavy(s.tail_C, s.tail_b, s.tail_a, s.tail_plateau);
  if (s.tail_kind == "algebraic")
    return TailFamily::algebraic(s.tail_C, s.tail_a, s.tail_X0, s.tail_plateau);
  if (s.tail_kind == "logarithmic")
    return TailFamily::logarithmic(s.tail_C, s.tail_a, s.tail_X0, s.tail_plateau);
  return TailFamily::constant(s.tail_plateau);
}

GrowthProfile make_growth(const Scenario& s) {
  if (s.growth_kind == "tabulated") return GrowthProfile::tabulated_from_csv(s.growth_table);
  return GrowthProfile::quadratic(s.A);
}

CompetitionKernel make_kernel(const Scenario& s) {
  if (s.kernel_kind == "cosine_bounded") {
    const double mid = 0.5 * (s.k_minus + s.k_plus);
    const double amp = 0.5 * (s.k_plus - s.k_minus);
    return CompetitionKernel::bounded(
        s.k_minus, s.k_plus,
        [mid, amp](double, double, double y, double yp) {
          return mid + amp * std::cos(y - yp);
        });
  }
  return CompetitionKernel::constant_one();
}

ModelScenario make_model(const Scenario& s) {
  return ModelScenario{make_growth(s), make_kernel(s), Rotation<double>(s.B)};
}

Grid2D<double> make_window(const Scenario& s) {
  return Grid2D<double>{Grid1D<double>::from_spacing(s.x_lo, s.x_hi, s.h),
                        Grid1D<double>::from_spacing(-s.y_half_width, s.y_half_width, s.h)};
}

SolverConfig make_solver_config(const Scenario& s) {
  SolverConfig config;
  config.dt = s.dt;
  config.t_end = s.t_end;
  config.window = make_window(s);
  config.window_policy =
      s.window_policy == "translate" ? WindowPolicy::translate : WindowPolicy::fixed;
  config.translate_threshold = s.translate_threshold;
  config.y_half_width = s.y_half_width;
  config.quadrature_tol = s.quadrature_tol;
  config.output_stride = s.output_stride;
  config.y_boundary =
      s.y_boundary == "neumann" ? YBoundary::neumann : YBoundary::dirichlet;
  return config;
}

InitialDataSpec make_initial_spec(const Scenario& s) {
  InitialDataSpec spec;
  spec.tail = make_tail(s);
  spec.orientation = s.orientation == "along_x" ? Orientation::along_x : Orientation::along_X;
  spec.y_profile.kind = s.y_profile == "eigen_profile" ? YProfile::Kind::eigen_profile
                                                       : YProfile::Kind::indicator;
  spec.y_profile.sigma_minus = s.sigma_minus;
  spec.y_profile.sigma_plus = s.sigma_plus;
  spec.amplitude = s.amplitude;
  return spec;
}

}  // namespace invlab
