#pragma once

#include <complex>
#include <map>
#include <vector>

#include "qpml/errors.hpp"

namespace qpml::model {

using Complex = std::complex<double>;

/// Real 2pi-periodic trigonometric polynomial
///   p(y) = c0 + sum_j (cos_coeffs[j-1] cos(j y) + sin_coeffs[j-1] sin(j y)).
struct TrigPoly {
  double c0 = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  double eval(double y) const;
  double max_abs() const;  // coefficient bound |c0| + sum |a_j| + |b_j|
  double max_value(int samples = 4096) const;
  bool is_constant() const { return cos_coeffs.empty() && sin_coeffs.empty(); }
  static TrigPoly constant(double c) { return TrigPoly{c, {}, {}}; }
};

/// Periodicity-cell geometry: bottom boundary t = g(y) <= 0, scaling interface
/// t = T, truncation t = R.
struct Geometry {
  TrigPoly profile;  // g(y)
  double T = 0.0;
  double R = 0.0;

  void validate() const;  // g <= 0, 0 < T < R
  bool flat() const { return profile.is_constant(); }
};

enum class PotentialKind { zero, compact_bump, power_decay, log_decay };

/// Analytic potential family q(y,t) = amplitude * y_factor(y) * profile(t).
/// Profiles: compact bump on [t0,t1]; (offset+t)^exponent; 1/ln(e+t).
struct PotentialSpec {
  PotentialKind kind = PotentialKind::zero;
  double amplitude = 0.0;
  TrigPoly y_factor = TrigPoly::constant(1.0);
  double exponent = -1.0;  // power_decay: nu < 0
  double offset = 1.0;     // power_decay: a > 0
  double t0 = 0.0, t1 = 0.0;  // compact_bump support
  double cone_onset = 0.0;    // T0
  double cone_angle = 1.0;    // phi0

  void validate() const;
  bool t_only() const { return y_factor.is_constant(); }
};

enum class SourceProfile { compact_bump, exp_decay };

/// One modal component f_n(t) e^{i(n+alpha)y}.
struct SourceComponent {
  int n = 0;
  SourceProfile profile = SourceProfile::compact_bump;
  double amplitude = 1.0;
  double t0 = 0.0, t1 = 0.0;  // bump support
  double rate = 1.0;          // exp_decay mu
  double onset = 0.0;
};

struct SourceSpec {
  std::vector<SourceComponent> components;
  double tau = 1.0;  // claimed admissibility rate

  void validate() const;
  bool all_compact() const;
  /// Largest bump upper edge among compact components (0 if none).
  double max_support() const;
};

/// C-infinity bump exp(1 - 1/(1-s^2)) mapped to [t0,t1]; zero outside.
double bump_profile(double t, double t0, double t1);

double potential_eval(const PotentialSpec& spec, double y, double t);

/// Analytic continuation of the profile at z = T + e^{i phi}(t - T), t >= T.
Complex potential_scaled_eval(const PotentialSpec& spec, double y, double t, double T, double phi);

/// Modal coefficient f_n at (possibly complex) abscissa z; used by both eval
/// paths and the 1D oracles.
Complex source_component_eval(const SourceComponent& c, Complex z);

Complex source_eval(const SourceSpec& spec, double alpha, double y, double t);
Complex source_scaled_eval(const SourceSpec& spec, double alpha, double y, double t, double T,
                           double phi);

struct SourceAdmissibilityReport {
  bool pass = false;
  double bound = 0.0;      // physical-region L2^2 plus sup_psi scaled-ray integral
  double worst_psi = 0.0;  // maximizer of the scaled-ray integral
};

/// Numerically certifies estimate sup_{psi in [0,phi]} of the weighted ray
/// integral of |F|^2; throws ValidationError("divergent integral ...") when an
/// exp_decay component fails mu cos(psi) > tau sin(psi).
SourceAdmissibilityReport check_source_admissibility(const SourceSpec& spec, double T, double phi,
                                                     double tau, int psi_samples = 33);

struct PotentialAdmissibilityReport {
  bool pass = false;
  std::map<double, double> sup_tail;  // radius -> sup |q| beyond that radius
  std::string note;
};

PotentialAdmissibilityReport check_potential_admissibility(const PotentialSpec& spec, double T,
                                                           double phi, double rel_threshold = 0.05,
                                                           double horizon = 200.0);

}  // namespace qpml::model
