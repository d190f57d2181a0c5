#include "qpml/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qpml::modes {

namespace {
constexpr double kThresholdTol = 1e-14;  // relative to max(k^2, (n+alpha)^2)
}

const ModeEntry& ModeSpectrum::at(int n) const {
  const int N = (static_cast<int>(entries.size()) - 1) / 2;
  if (n < -N || n > N) throw ValidationError("mode index outside spectrum window: n=" + std::to_string(n));
  return entries[static_cast<std::size_t>(n + N)];
}

double ModeSpectrum::min_propagating() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : entries)
    if (e.propagating()) m = std::min(m, e.lambda_minus.real());
  return m;
}

double ModeSpectrum::min_evanescent() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : entries)
    if (!e.propagating()) m = std::min(m, e.lambda_minus.imag());
  return m;
}

std::vector<int> ModeSpectrum::propagating_indices() const {
  std::vector<int> out;
  for (const auto& e : entries)
    if (e.propagating()) out.push_back(e.n);
  return out;
}

void validate_parameters(double k, double alpha, int n_window) {
  if (!std::isfinite(k) || !std::isfinite(alpha)) throw ValidationError("nonfinite k or alpha");
  if (k == 0.0) throw ValidationError("k must be nonzero");
  if (alpha < 0.0 || alpha >= 1.0) throw ValidationError("alpha must lie in [0,1)");
  if (n_window < 1) throw ValidationError("n_window must be positive");
  const int N = n_window + static_cast<int>(std::ceil(std::abs(k)));
  const double k2 = k * k;
  for (int n = -N; n <= N; ++n) {
    const double b = n + alpha;
    const double scale = std::max(k2, b * b);
    if (std::abs(k2 - b * b) <= kThresholdTol * std::max(scale, 1.0))
      throw ThresholdViolation(n, k, alpha);
  }
}

ModeSpectrum mode_spectrum(double k, double alpha, int n_window) {
  validate_parameters(k, alpha, n_window);
  ModeSpectrum s;
  s.k = k;
  s.alpha = alpha;
  s.n_window = n_window;
  const int N = n_window + static_cast<int>(std::ceil(std::abs(k)));
  s.entries.reserve(static_cast<std::size_t>(2 * N + 1));
  const double k2 = k * k;
  for (int n = -N; n <= N; ++n) {
    const double b = n + alpha;
    const double arg = k2 - b * b;
    ModeEntry e;
    e.n = n;
    if (arg > 0.0) {
      // main branch of a positive real argument: positive real root
      const double r = std::sqrt(arg);
      e.lambda_minus = Complex(r, 0.0);
      e.klass = ModeClass::propagating;
    } else {
      // limit from the upper half-plane: sqrt(-s) = i sqrt(s)
      const double m = std::sqrt(-arg);
      e.lambda_minus = Complex(0.0, m);
      e.klass = ModeClass::evanescent_pair;
    }
    e.lambda_plus = -e.lambda_minus;
    s.entries.push_back(e);
  }
  return s;
}

Complex wave_eval(const ModeEntry& entry, bool minus_branch, double alpha, double y, double t) {
  const Complex lambda = minus_branch ? entry.lambda_minus : entry.lambda_plus;
  const Complex i(0.0, 1.0);
  return std::exp(i * lambda * t + i * ((entry.n + alpha) * y));
}

PmlRates pml_rates(const ModeSpectrum& spectrum, double phi, double tau) {
  if (spectrum.entries.empty()) throw ValidationError("empty spectrum");
  if (!(phi > 0.0 && phi < M_PI / 2.0)) throw ValidationError("phi must lie in (0, pi/2)");
  if (!(tau > 0.0)) throw ValidationError("tau must be positive");

  const double sp = std::sin(phi), cp = std::cos(phi);
  double decay = std::numeric_limits<double>::infinity();
  for (const auto& e : spectrum.entries) {
    const Complex rot = std::exp(Complex(0.0, phi)) * e.lambda_minus;
    decay = std::min(decay, rot.imag());
  }
  // Window sufficiency: Im(e^{i phi} lambda_n^-) grows once |n+alpha| > |k|,
  // so the window min is the global min whenever the boundary entry exceeds it.
  const double boundary = spectrum.entries.back().lambda_minus.imag() * cp;
  if (boundary <= decay)
    throw ValidationError("spectrum window too small to certify the decay-rate minimum");

  PmlRates r;
  r.phi = phi;
  r.tau = tau;
  r.decay_rate = decay;
  r.gamma_max = std::min(tau * sp, decay);
  if (!(r.gamma_max > 0.0)) throw ValidationError("empty gamma interval");

  const double min_ev = spectrum.min_evanescent();
  const double min_prop = spectrum.min_propagating();
  r.cone_bound = std::isfinite(min_prop) ? std::tan(phi) * min_prop
                                         : std::numeric_limits<double>::infinity();
  // beta in [-tau sin phi, 0) intersect (-min_ev, 0) intersect (-cone_bound, 0)
  const double tau_lo = -tau * sp;
  double lo = tau_lo;
  bool inclusive = true;
  if (std::isfinite(min_ev) && -min_ev >= lo) {
    lo = -min_ev;
    inclusive = false;
  }
  if (std::isfinite(r.cone_bound) && -r.cone_bound >= lo) {
    lo = -r.cone_bound;
    inclusive = false;
  }
  if (lo >= 0.0) throw ValidationError("empty admissible beta range");
  r.beta_lo = lo;
  r.beta_lo_inclusive = inclusive;
  return r;
}

bool beta_admissible(const PmlRates& rates, double beta) {
  if (!(beta < 0.0)) return false;
  if (rates.beta_lo_inclusive ? beta < rates.beta_lo : beta <= rates.beta_lo) return false;
  return true;
}

}  // namespace qpml::modes
