#pragma once

#include <map>

#include "qpml/config.hpp"
#include "qpml/oracle.hpp"
#include "qpml/radiation.hpp"

namespace qpml::harness {

using Complex = std::complex<double>;

struct RunSummary {
  double norm_h1_ET = 0, norm_h1_ER = 0, norm_l2_ET = 0;
  double residual = 0;
  double outgoing_residual = -1;  // -1: fit not performed
  std::map<int, Complex> outgoing_coeffs;
  double err_oracle = -1;  // -1: no oracle for this config
  double seconds = 0;
};

struct RunResult {
  solver::Field field;
  RunSummary summary;
};

/// Full pipeline mesh -> dofmap -> assemble -> solve with optional overrides.
solver::Field solve_pipeline(const ProblemConfig& cfg, double R, double phi, int refine = 0);

RunResult run_single(const ProblemConfig& cfg);

/// 1D reference solutions, one per source component: exact Green's functions
/// for q == 0, self-converged high-resolution 1D solves for t-only q.
std::vector<oracle::ModalSolution1D> build_reference(const ProblemConfig& cfg, double R_max);

struct SweepRRow {
  double R = 0;
  double err = 0;          // column the verdict is fitted on
  double err_oracle = -1;  // vs the 1D reference (-1 when unavailable)
  double err_trunc = 0;    // vs the R_ref solve on the same mesh
  double norm_h1 = 0;      // H1(E^R) of the solution
  double seconds = 0;
  bool used_in_fit = false;
};

struct ConvergenceReport {
  std::vector<SweepRRow> rows;
  double slope = 0;
  double gamma_max = 0;
  double floor_h = 0;      // Richardson h-floor estimate at R_ref
  double R_ref = 0;
  std::string fit_basis;   // "oracle" | "truncation"
  std::string reference;
  bool monotone = false;
  std::string verdict;     // PASS | FAIL | insufficient_points
};

ConvergenceReport sweep_R(const ProblemConfig& cfg, std::vector<double> R_values);

struct PhiPair {
  double phi_i = 0, phi_j = 0, diff_h1 = 0;
};

struct PhiSweepReport {
  std::vector<PhiPair> pairs;
  double max_diff = 0;
  double threshold = 0;     // 10x the single-run oracle error at the same (h, R)
  double oracle_error = -1;
  std::string verdict;
};

PhiSweepReport sweep_phi(const ProblemConfig& cfg, std::vector<double> phis);

struct HSweepRow {
  int level = 0;
  double h_t = 0;
  double err_l2 = 0, err_h1 = 0;
  double order_l2 = 0, order_h1 = 0;  // NaN on the first row
};

struct HSweepReport {
  std::vector<HSweepRow> rows;
  std::string verdict;  // PASS | FAIL | exact | "" (single level)
};

HSweepReport sweep_h(const ProblemConfig& cfg, int levels);

struct StabilityRow {
  double R = 0;
  double norm_h1_ER = 0;
  double seconds = 0;
};

struct StabilityReport {
  std::vector<StabilityRow> rows;
  double variation = 0;  // relative variation beyond the smallest R
  std::string verdict;
};

StabilityReport stability_scan(const ProblemConfig& cfg, std::vector<double> R_values);

/// min over source-excited modes of Im(e^{i phi} lambda_n^-): the rate the
/// fitted slopes should track (up to the round-trip factor) when phi varies.
double source_mode_rate(const ProblemConfig& cfg, double phi);

}  // namespace qpml::harness
