#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "invlab/errors.hpp"
#include "invlab/parallel.hpp"
#include "invlab/pipeline.hpp"
#include "invlab/scenario.hpp"

namespace {

int protected_run(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const invlab::SchemaError& e) {
    for (const auto& issue : e.issues)
      std::cerr << "schema error (line " << issue.line << "): " << issue.message << "\n";
    return 2;
  } catch (const invlab::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invlab - nonlocal space-trait invasion laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  int threads = 1;
  bool seedless = true;
  app.add_option("--config", config_path, "scenario file (key = value lines)");
  app.add_option("--out", out_dir, "output directory (default: output.dir from config)");
  app.add_option("--threads", threads, "worker threads for sweeps within a step");
  app.add_flag("--seedless", seedless, "deterministic mode (always on; accepted for compatibility)");

  auto* cmd_eig = app.add_subcommand("eig", "solve the eigenproblems and write eigen.csv");
  auto* cmd_sim = app.add_subcommand("simulate", "run the time integration and write mass.csv");
  auto* cmd_analyze =
      app.add_subcommand("analyze", "level sets, envelopes and regime from mass.csv");
  auto* cmd_run = app.add_subcommand("run", "full pipeline: eig + simulate + analyze");
  auto* cmd_sweep = app.add_subcommand("sweep", "run the pipeline across parameter values");

  std::string sweep_param;
  std::string sweep_values;
  cmd_sweep->add_option("--param", sweep_param, "A | B | tail.a | mu")->required();
  cmd_sweep->add_option("--values", sweep_values, "comma-separated values")->required();

  CLI11_PARSE(app, argc, argv);
  invlab::set_thread_count(threads);

  return protected_run([&] {
    if (config_path.empty())
      throw invlab::SchemaError({{0, "--config is required"}});
    const invlab::Scenario scenario = invlab::load_scenario_file(config_path);
    const std::string dir = out_dir.empty() ? scenario.out_dir : out_dir;

    if (cmd_eig->parsed()) {
      const auto eig = invlab::compute_eigen(scenario);
      invlab::write_eigen_outputs(scenario, eig, dir);
      std::cout << "lambda0 = " << eig.lambda0 << ", lambda0_R = " << eig.lambda0_R
                << "\n";
    } else if (cmd_sim->parsed()) {
      const auto eig = invlab::compute_eigen(scenario);
      invlab::write_eigen_outputs(scenario, eig, dir);
      const auto record = invlab::simulate_scenario(scenario, true, &eig);
      invlab::write_simulation_outputs(scenario, record, dir);
      std::cout << "simulated to t = " << record.final_state.t << " ("
                << record.final_state.step_count << " steps)\n";
    } else if (cmd_analyze->parsed()) {
      const auto eig = invlab::compute_eigen(scenario);
      const auto record = invlab::read_simulation_outputs(dir);
      const auto analysis = invlab::analyze_record(scenario, record, eig);
      const auto summary =
          invlab::write_analysis_outputs(scenario, record, analysis, eig, dir);
      std::cout << "classification: " << summary["classification"] << "\n";
    } else if (cmd_run->parsed()) {
      const auto summary = invlab::run_pipeline(scenario, dir);
      std::cout << "classification: " << summary["classification"] << "\n";
    } else if (cmd_sweep->parsed()) {
      std::vector<double> values;
      std::stringstream ss(sweep_values);
      std::string item;
      while (std::getline(ss, item, ','))
        values.push_back(std::stod(item));
      if (values.empty())
        throw invlab::SchemaError({{0, "sweep needs at least one value"}});
      invlab::run_sweep(scenario, sweep_param, values, dir);
      std::cout << "sweep complete: " << values.size() << " runs\n";
    }
  });
}
