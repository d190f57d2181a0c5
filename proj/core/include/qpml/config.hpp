#pragma once

#include <string>
#include <vector>

#include "qpml/model.hpp"
#include "qpml/modes.hpp"

namespace qpml::harness {

struct MeshParams {
  int Ny = 32;
  int Nt_phys = 10;
  int Nt_pml = 25;
};

struct ExperimentParams {
  std::vector<double> R_values;
  std::vector<double> phi_values;
  int h_levels = 3;
  int workers = 0;  // 0: one per job up to hardware concurrency
};

struct OutputParams {
  std::string dir = "out";
  std::string format = "csv";  // csv | json
};

/// Every free parameter of a run, cross-validated on load.
struct ProblemConfig {
  double k = 1.5;
  double alpha = 0.0;
  double phi = 0.25 * M_PI;
  int n_window = 8;
  model::Geometry geometry;
  model::PotentialSpec potential;
  model::SourceSpec source;
  MeshParams mesh;
  ExperimentParams experiment;
  OutputParams output;

  /// Threshold, admissibility, range and resolution checks; returns
  /// non-fatal warnings (e.g. q(.,T) large against k^2).
  std::vector<std::string> validate() const;

  modes::ModeSpectrum spectrum() const { return modes::mode_spectrum(k, alpha, n_window); }
  modes::PmlRates rates() const { return modes::pml_rates(spectrum(), phi, source.tau); }
  modes::PmlRates rates_at(double phi_other) const {
    return modes::pml_rates(spectrum(), phi_other, source.tau);
  }

  /// Oracle-comparable: flat bottom, t-only potential, compact modal source.
  bool has_oracle() const;
};

ProblemConfig load_config(const std::string& path);
std::string to_json_string(const ProblemConfig& cfg);

/// In-repo experiment configurations.
ProblemConfig canonical_config();
ProblemConfig power_decay_config();
ProblemConfig log_decay_config();

}  // namespace qpml::harness
