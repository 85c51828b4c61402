#include <doctest.h>

#include <cmath>

#include "invlab/errors.hpp"
#include "invlab/pipeline.hpp"
#include "invlab/scenario.hpp"

using namespace invlab;

TEST_CASE("minimal scenario parses with defaults filled") {
  const std::string doc = R"(# ballistic baseline
name = compact_ballistic
growth.kind = quadratic
growth.A = 0.25
B = 1
init.tail.kind = compact
init.tail.support_hi = 2
)";
  const auto result = parse_scenario(doc);
  REQUIRE(result.scenario.has_value());
  CHECK(result.issues.empty());
  const auto& s = *result.scenario;
  CHECK(s.name == "compact_ballistic");
  CHECK(s.A == doctest::Approx(0.25));
  CHECK(s.B == doctest::Approx(1.0));
  CHECK(s.tail_kind == "compact");
  CHECK(s.kernel_kind == "constant_one");   // default
  CHECK(s.output_stride == 50);             // default
  CHECK(s.eps_fraction == doctest::Approx(0.25));
}

TEST_CASE("schema errors carry line numbers") {
  const std::string doc = R"(name = broken
growth.A = -1
nonsense.key = 3
B = not_a_number
)";
  const auto result = parse_scenario(doc);
  CHECK_FALSE(result.scenario.has_value());
  REQUIRE(result.issues.size() == 3);
  bool saw_A = false, saw_unknown = false, saw_value = false;
  for (const auto& issue : result.issues) {
    if (issue.message.find("A must be positive") != std::string::npos) {
      saw_A = true;
      CHECK(issue.line == 2);
    }
    if (issue.message.find("unknown key") != std::string::npos) {
      saw_unknown = true;
      CHECK(issue.line == 3);
    }
    if (issue.message.find("cannot parse value") != std::string::npos) {
      saw_value = true;
      CHECK(issue.line == 4);
    }
  }
  CHECK(saw_A);
  CHECK(saw_unknown);
  CHECK(saw_value);
  CHECK_THROWS_AS(parse_scenario_or_throw(doc), SchemaError);
}

TEST_CASE("scenario render/parse round trip is exact") {
  Scenario s;
  s.name = "roundtrip";
  s.A = 0.3141592653589793;
  s.B = 1.7320508075688772;
  s.tail_kind = "algebraic";
  s.tail_C = 0.01;
  s.tail_a = 2.0;
  s.tail_X0 = 1.0;
  s.h = 0.0625;
  s.dt = 1e-3 / 3.0;
  s.t_end = 25.0;
  s.mu_abs = {0.0125, 0.05};
  s.mu_plateau_frac = {0.05};
  s.field_times = {0.0, 12.5, 25.0};
  s.fit_t0 = 12.5;
  s.fit_t1 = 25.0;
  const auto parsed = parse_scenario_or_throw(render_scenario(s));
  CHECK(parsed == s);
}

TEST_CASE("worked-example scenario: algebraic tail with the paper's constants") {
  const std::string doc = R"(name = accelerating_example
growth.kind = quadratic
growth.A = 0.25
B = 1
init.orientation = along_X
init.tail.kind = algebraic
init.tail.C = 1
init.tail.a = 2
init.tail.X0 = 1
)";
  const auto s = parse_scenario_or_throw(doc);
  const auto tail = make_tail(s);
  CHECK(tail.kind() == TailFamily::Kind::algebraic);
  CHECK(tail.C() == doctest::Approx(1.0));
  CHECK(tail.a() == doctest::Approx(2.0));
  // Gamma/gamma default to "auto" (0), which the analysis resolves to the
  // tail constant C
  CHECK(s.Gamma_big == 0.0);
  CHECK(s.gamma_small == 0.0);
}

TEST_CASE("scenario to domain objects") {
  Scenario s;
  s.growth_kind = "quadratic";
  s.A = 4.0;
  s.B = 0.0;
  s.kernel_kind = "cosine_bounded";
  s.k_minus = 0.5;
  s.k_plus = 1.5;
  s.x_lo = -5;
  s.x_hi = 5;
  s.y_half_width = 6;
  s.h = 0.1;
  const auto model = make_model(s);
  CHECK(model.growth(0.0) == doctest::Approx(1.0));
  CHECK(model.kernel.k_minus() == doctest::Approx(0.5));
  CHECK_FALSE(model.kernel.is_constant_one());
  const auto window = make_window(s);
  CHECK(window.gx.lo == doctest::Approx(-5));
  CHECK(window.gy.hi == doctest::Approx(6));
  CHECK(window.gx.spacing() == doctest::Approx(0.1));
  const auto config = make_solver_config(s);
  CHECK(config.y_boundary == YBoundary::dirichlet);
  CHECK(config.window_policy == WindowPolicy::fixed);
}

TEST_CASE("sweep parameter application") {
  Scenario s;
  apply_sweep_value(s, "A", 4.0);
  CHECK(s.A == doctest::Approx(4.0));
  apply_sweep_value(s, "tail.a", 1.5);
  CHECK(s.tail_a == doctest::Approx(1.5));
  apply_sweep_value(s, "mu", 0.01);
  CHECK(s.mu_abs == std::vector<double>{0.01});
  CHECK(s.mu_plateau_frac.empty());
  CHECK_THROWS_AS(apply_sweep_value(s, "h", 0.1), SchemaError);
}
