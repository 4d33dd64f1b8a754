#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cylcs/coherent_state.hpp"
#include "cylcs/distribution.hpp"
#include "cylcs/observable.hpp"
#include "cylcs/operator.hpp"

namespace cylcs::cli {

// Everything a subcommand needs. Filled from built-in defaults, then an INI
// file (--config), then command-line flags.
struct RunConfig {
  // [distributions]
  std::string dist = "gaussian";
  double sigma = 1.0;
  std::string custom_file;
  bool allow_sigma_out_of_range = false;
  std::vector<double> sigma_sweep{0.1, 1.0, 10.0};
  int index_cutoff = 50;

  // [cs-core]
  int trunc = 20;
  double J0 = 0.0;
  double phi0 = 0.0;

  // [quantizer]
  double tol = 1e-12;
  std::string observable_file;
  std::string builtin;  // J, J2, exp+, exp-, cos, sin, saw, one, angle
  double lambda = 1.0;
  bool generic = false;

  // [symbols]
  std::string operator_file;
  int M = -1;
  std::optional<double> C;

  // [dynamics]
  std::string hamiltonian = "J2";
  std::vector<double> times{0.0};
  std::string track;  // builtin observable whose evolved lower symbol is written

  // [grid]
  double grid_J_min = -1.0;
  double grid_J_max = 1.0;
  int grid_J_steps = 21;
  int grid_phi_steps = 16;
  bool grid_J_given = false;

  // [cli]
  std::filesystem::path out = ".";
  std::string format = "csv";

  void validate() const;
  PhaseGrid grid() const;
};

// Reads an INI file; unknown sections or keys are a ConfigError.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

std::vector<double> parse_list(const std::string& text);

ActionDistribution make_distribution(const RunConfig& cfg);
ObservableSpec builtin_observable(const std::string& name, double lambda, int saw_harmonics);
// The observable named by --observable or --builtin.
ObservableSpec resolve_observable(const RunConfig& cfg);
// Quantizes the configured observable; "angle" maps to the closed-form
// angle operator.
TruncatedOperator build_operator(const ActionDistribution& dist, const RunConfig& cfg);

}  // namespace cylcs::cli
