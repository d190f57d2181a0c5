#include "qpml/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace qpml::model {

namespace {

// Adaptive Simpson for real-valued integrands; tol is absolute.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int depth = 50) {
  auto simp = [](double fa, double fm, double fb, double a_, double b_) {
    return (b_ - a_) / 6.0 * (fa + 4.0 * fm + fb);
  };
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double a_, double b_, double fa, double fm, double fb, double whole, int d) -> double {
    const double m = 0.5 * (a_ + b_);
    const double flm = f(0.5 * (a_ + m)), frm = f(0.5 * (m + b_));
    const double left = simp(fa, flm, fm, a_, m);
    const double right = simp(fm, frm, fb, m, b_);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(a_, m, fa, flm, fm, left, d - 1) + rec(m, b_, fm, frm, fb, right, d - 1);
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, simp(fa, fm, fb, a, b), depth);
}

}  // namespace

double TrigPoly::eval(double y) const {
  double v = c0;
  for (std::size_t j = 0; j < cos_coeffs.size(); ++j) v += cos_coeffs[j] * std::cos((j + 1) * y);
  for (std::size_t j = 0; j < sin_coeffs.size(); ++j) v += sin_coeffs[j] * std::sin((j + 1) * y);
  return v;
}

double TrigPoly::max_abs() const {
  double v = std::abs(c0);
  for (double a : cos_coeffs) v += std::abs(a);
  for (double b : sin_coeffs) v += std::abs(b);
  return v;
}

double TrigPoly::max_value(int samples) const {
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) m = std::max(m, eval(-M_PI + 2.0 * M_PI * i / samples));
  return m;
}

void Geometry::validate() const {
  if (!(T > 0.0) || !(R > T)) throw ValidationError("geometry requires 0 < T < R");
  if (profile.max_value() > 0.0)
    throw ValidationError("boundary profile g(y) must satisfy max g <= 0");
}

void PotentialSpec::validate() const {
  switch (kind) {
    case PotentialKind::zero:
      break;
    case PotentialKind::compact_bump:
      if (!(t1 > t0)) throw ValidationError("compact_bump potential needs t1 > t0");
      break;
    case PotentialKind::power_decay:
      if (!(exponent < 0.0)) throw ValidationError("power_decay needs exponent < 0");
      if (!(offset > 0.0)) throw ValidationError("power_decay needs offset > 0");
      break;
    case PotentialKind::log_decay:
      break;
  }
  if (!(cone_angle > 0.0 && cone_angle < M_PI / 2.0))
    throw ValidationError("potential cone_angle must lie in (0, pi/2)");
}

void SourceSpec::validate() const {
  if (!(tau > 0.0)) throw ValidationError("source tau must be positive");
  for (const auto& c : components) {
    if (c.profile == SourceProfile::compact_bump && !(c.t1 > c.t0))
      throw ValidationError("source bump needs t1 > t0");
    if (c.profile == SourceProfile::exp_decay && !(c.rate > 0.0))
      throw ValidationError("exp_decay source needs positive rate");
  }
}

bool SourceSpec::all_compact() const {
  return std::all_of(components.begin(), components.end(),
                     [](const SourceComponent& c) { return c.profile == SourceProfile::compact_bump; });
}

double SourceSpec::max_support() const {
  double m = 0.0;
  for (const auto& c : components)
    if (c.profile == SourceProfile::compact_bump) m = std::max(m, c.t1);
  return m;
}

double bump_profile(double t, double t0, double t1) {
  const double s = (2.0 * t - (t0 + t1)) / (t1 - t0);
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

namespace {

Complex profile_at(const PotentialSpec& spec, Complex z) {
  switch (spec.kind) {
    case PotentialKind::zero:
      return 0.0;
    case PotentialKind::compact_bump:
      // admitted only with real support below the interface; analytic
      // continuation is identically zero past the support
      if (z.imag() == 0.0) return bump_profile(z.real(), spec.t0, spec.t1);
      return 0.0;
    case PotentialKind::power_decay: {
      const Complex base = spec.offset + z;
      if (base.real() <= 0.0 && std::abs(base.imag()) < 1e-300)
        throw Error("power_decay profile hit its branch cut");
      return std::pow(base, spec.exponent);
    }
    case PotentialKind::log_decay: {
      const Complex den = std::log(std::exp(1.0) + z);
      if (std::abs(den) < 1e-300) throw Error("log_decay profile hit its singularity");
      return 1.0 / den;
    }
  }
  return 0.0;
}

}  // namespace

double potential_eval(const PotentialSpec& spec, double y, double t) {
  if (spec.kind == PotentialKind::zero) return 0.0;
  return spec.amplitude * spec.y_factor.eval(y) * profile_at(spec, Complex(t, 0.0)).real();
}

Complex potential_scaled_eval(const PotentialSpec& spec, double y, double t, double T, double phi) {
  if (spec.kind == PotentialKind::zero) return 0.0;
  const Complex z = T + std::exp(Complex(0.0, phi)) * (t - T);
  return spec.amplitude * spec.y_factor.eval(y) * profile_at(spec, z);
}

Complex source_component_eval(const SourceComponent& c, Complex z) {
  switch (c.profile) {
    case SourceProfile::compact_bump:
      if (z.imag() == 0.0) return c.amplitude * bump_profile(z.real(), c.t0, c.t1);
      return 0.0;  // support below the interface; continuation vanishes there
    case SourceProfile::exp_decay:
      if (z.imag() == 0.0 && z.real() < c.onset) return 0.0;
      return c.amplitude * std::exp(-c.rate * (z - c.onset));
  }
  return 0.0;
}

Complex source_eval(const SourceSpec& spec, double alpha, double y, double t) {
  Complex v = 0.0;
  const Complex i(0.0, 1.0);
  for (const auto& c : spec.components)
    v += source_component_eval(c, Complex(t, 0.0)) * std::exp(i * ((c.n + alpha) * y));
  return v;
}

Complex source_scaled_eval(const SourceSpec& spec, double alpha, double y, double t, double T,
                           double phi) {
  const Complex z = T + std::exp(Complex(0.0, phi)) * (t - T);
  Complex v = 0.0;
  const Complex i(0.0, 1.0);
  for (const auto& c : spec.components)
    v += source_component_eval(c, z) * std::exp(i * ((c.n + alpha) * y));
  return v;
}

SourceAdmissibilityReport check_source_admissibility(const SourceSpec& spec, double T, double phi,
                                                     double tau, int psi_samples) {
  spec.validate();
  if (psi_samples < 33) psi_samples = 33;
  SourceAdmissibilityReport rep;

  // Divergence test for exponential components: need mu cos(psi) > tau sin(psi)
  // uniformly on [0, phi]; the worst angle is phi.
  for (const auto& c : spec.components) {
    if (c.profile == SourceProfile::exp_decay) {
      if (!(c.rate * std::cos(phi) > tau * std::sin(phi)))
        throw ValidationError("divergent integral: exp_decay rate " + std::to_string(c.rate) +
                              " fails mu cos(phi) > tau sin(phi) at tau=" + std::to_string(tau));
    }
  }

  // Physical-region part: 2 pi sum_n int_{below T} |sum_c f_c|^2 dt  (modal
  // orthogonality in y). Group components by n.
  std::map<int, std::vector<const SourceComponent*>> by_n;
  for (const auto& c : spec.components) by_n[c.n].push_back(&c);

  double phys = 0.0;
  for (const auto& [n, comps] : by_n) {
    (void)n;
    auto f2 = [&](double t) {
      Complex v = 0.0;
      for (const auto* c : comps) v += source_component_eval(*c, Complex(t, 0.0));
      return std::norm(v);
    };
    // bound of the support on the real axis
    double hi = T;
    phys += 2.0 * M_PI * adaptive_simpson(f2, 0.0, hi, 1e-13);
  }

  // Scaled-ray part, sup over psi.
  double sup = 0.0, worst = 0.0;
  for (int ip = 0; ip < psi_samples; ++ip) {
    const double psi = phi * ip / (psi_samples - 1);
    double val = 0.0;
    for (const auto& [n, comps] : by_n) {
      (void)n;
      bool any = false;
      double slowest = std::numeric_limits<double>::infinity();
      for (const auto* c : comps) {
        if (c->profile == SourceProfile::exp_decay) {
          any = true;
          slowest = std::min(slowest, 2.0 * (c->rate * std::cos(psi) - tau * std::sin(psi)));
        }
      }
      if (!any) continue;  // compact components vanish on the open ray
      auto integrand = [&](double s) {
        const Complex z = T + std::exp(Complex(0.0, psi)) * s;
        Complex v = 0.0;
        for (const auto* c : comps) v += source_component_eval(*c, z);
        return std::exp(2.0 * s * tau * std::sin(psi)) * std::norm(v);
      };
      // horizon where the analytic envelope tail drops below 1e-12 of the head
      const double s_max = std::max(10.0, 40.0 / slowest);
      val += 2.0 * M_PI * adaptive_simpson(integrand, 0.0, s_max, 1e-13);
    }
    if (val > sup) {
      sup = val;
      worst = psi;
    }
  }

  rep.pass = std::isfinite(phys + sup);
  rep.bound = phys + sup;
  rep.worst_psi = worst;
  return rep;
}

PotentialAdmissibilityReport check_potential_admissibility(const PotentialSpec& spec, double T,
                                                           double phi, double rel_threshold,
                                                           double horizon) {
  spec.validate();
  PotentialAdmissibilityReport rep;

  if (spec.kind == PotentialKind::compact_bump && spec.t1 > T) {
    rep.pass = false;
    rep.note = "compact bump support crosses the scaling interface (t1 > T)";
    return rep;
  }

  double yamp = std::abs(spec.amplitude) * spec.y_factor.max_abs();
  const double rays[3] = {0.0, 0.5 * phi, phi};
  const int ns = 2048;
  std::vector<double> radius(ns), val(ns, 0.0);
  for (int is = 0; is < ns; ++is) {
    const double s = horizon * is / (ns - 1);
    radius[is] = s;
    for (double psi : rays) {
      const Complex z = T + std::exp(Complex(0.0, psi)) * s;
      double q = (spec.kind == PotentialKind::zero) ? 0.0 : yamp * std::abs(profile_at(spec, z));
      val[is] = std::max(val[is], q);
    }
  }
  // running sup beyond each radius
  std::vector<double> tail(ns);
  double run = 0.0;
  for (int is = ns - 1; is >= 0; --is) {
    run = std::max(run, val[is]);
    tail[is] = run;
  }
  const double overall = tail[0];
  for (int is = 0; is < ns; is += ns / 16) rep.sup_tail[radius[is]] = tail[is];
  rep.sup_tail[radius[ns - 1]] = tail[ns - 1];

  if (overall == 0.0) {
    rep.pass = true;
    rep.note = "identically zero on the sampled rays";
    return rep;
  }
  bool monotone = true;
  for (int is = 1; is < ns; ++is)
    if (tail[is] > tail[is - 1] + 1e-12 * overall) monotone = false;
  const bool small_tail = tail[ns - 1] <= rel_threshold * overall;
  rep.pass = monotone && small_tail;
  if (!monotone) rep.note = "running sup not monotonically decaying";
  else if (!small_tail)
    rep.note = "tail above threshold at the sampling horizon";
  return rep;
}

}  // namespace qpml::model
