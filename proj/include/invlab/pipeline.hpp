#pragma once

#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "invlab/levelsets.hpp"
#include "invlab/pde.hpp"
#include "invlab/scenario.hpp"
#include "invlab/spectral.hpp"

namespace invlab {

struct EigenBundle {
  EigenPair whole_line;
  EigenPair dirichlet;
  double lambda0 = 0;
  double lambda0_R = 0;
  double c_star = 0;  // NaN when lambda0 >= 0
};

EigenBundle compute_eigen(const Scenario& s);

// In-memory record of one simulation: mass profiles, sup norms and selected
// field snapshots at the output stride.
struct SimRecord {
  std::vector<double> times;
  std::vector<std::vector<double>> mass_x;
  std::vector<std::vector<double>> mass_N;
  std::vector<std::pair<double, double>> sup_norm;
  std::vector<ScalarField2D<double>> fields;
  SimulationState final_state;
};

SimRecord simulate_scenario(const Scenario& s, bool nonlocal = true,
                            const EigenBundle* eig = nullptr);

struct AnalysisResult {
  double plateau = 0;
  double beta_estimate = 0;
  std::vector<double> mu_values;
  std::vector<LevelSetTrace> traces;
  EnvelopeSeries envelope;  // level-independent; NaN where undefined
  std::vector<ViolationReport> violations;
  std::vector<bool> lower_check_applies;  // mu <= 0.1 * plateau
  Classification classification;
  nlohmann::json fits;
};

AnalysisResult analyze_record(const Scenario& s, const SimRecord& record,
                              const EigenBundle& eig);

void write_eigen_outputs(const Scenario& s, const EigenBundle& eig,
                         const std::string& dir);
void write_simulation_outputs(const Scenario& s, const SimRecord& record,
                              const std::string& dir);
SimRecord read_simulation_outputs(const std::string& dir);
nlohmann::json write_analysis_outputs(const Scenario& s, const SimRecord& record,
                                      const AnalysisResult& analysis,
                                      const EigenBundle& eig, const std::string& dir);

// eig -> simulate -> analyze -> outputs; returns the summary document.
nlohmann::json run_pipeline(const Scenario& s, std::string out_dir = "");

void apply_sweep_value(Scenario& s, const std::string& param, double value);
nlohmann::json run_sweep(const Scenario& base, const std::string& param,
                         const std::vector<double>& values, const std::string& out_dir);

}  // namespace invlab
