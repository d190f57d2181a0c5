#pragma once

#include <complex>
#include <vector>

#include "qpml/errors.hpp"

namespace qpml::modes {

using Complex = std::complex<double>;

enum class ModeClass { propagating, evanescent_pair };

/// One transverse mode: wave numbers lambda_n^[+/-] = -/+ sqrt(k^2 - (n+alpha)^2)
/// on the main branch (sqrt(-s) = i sqrt(s) for s > 0).
struct ModeEntry {
  int n = 0;
  Complex lambda_plus;   // incoming (propagating) or growing (evanescent) branch
  Complex lambda_minus;  // outgoing or decaying branch
  ModeClass klass = ModeClass::evanescent_pair;

  bool propagating() const { return klass == ModeClass::propagating; }
};

struct ModeSpectrum {
  double k = 0.0;
  double alpha = 0.0;
  int n_window = 0;                // entries cover n in [-N, N] with N = n_window + ceil(|k|)
  std::vector<ModeEntry> entries;  // ordered by n

  const ModeEntry& at(int n) const;
  /// Smallest lambda_n^- over propagating modes (binds the rotation rate).
  double min_propagating() const;
  /// Smallest Im(lambda_n^-) over evanescent modes.
  double min_evanescent() const;
  std::vector<int> propagating_indices() const;
};

/// Decay/weight parameters derived from the spectrum for a scaling angle phi
/// and source admissibility rate tau.
struct PmlRates {
  double phi = 0.0;
  double tau = 0.0;
  double decay_rate = 0.0;       // min_n Im(e^{i phi} lambda_n^-)
  double gamma_max = 0.0;        // min(tau sin phi, decay_rate)
  double beta_lo = 0.0;          // admissible beta in [beta_lo, 0) resp. (beta_lo, 0)
  bool beta_lo_inclusive = false;
  double cone_bound = 0.0;       // tan(phi) * min propagating lambda_n^-, strict bound on |beta|
};

/// Rejects thresholds: throws ThresholdViolation(n) if k^2 == (n+alpha)^2 for
/// some |n| <= n_window + ceil(|k|). Nonfinite or zero k rejected.
void validate_parameters(double k, double alpha, int n_window);

ModeSpectrum mode_spectrum(double k, double alpha, int n_window);

/// w_n^{branch}(y,t) = exp(i lambda t + i (n+alpha) y).
Complex wave_eval(const ModeEntry& entry, bool minus_branch, double alpha, double y, double t);

PmlRates pml_rates(const ModeSpectrum& spectrum, double phi, double tau);

/// Strict admissibility gate for the Fourier-Laplace cone vertex i*beta.
bool beta_admissible(const PmlRates& rates, double beta);

}  // namespace qpml::modes
