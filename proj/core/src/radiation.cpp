#include "qpml/radiation.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>

namespace qpml::radiation {

OutgoingFit fit_outgoing(const solver::Field& field, double t_lo, double t_hi,
                         const modes::ModeSpectrum& spectrum, double phi, double T) {
  const auto& m = *field.mesh;
  if (!(t_lo >= T && t_hi > t_lo && t_hi <= m.R))
    throw ValidationError("fit window must lie inside the PML region");

  std::vector<int> rows_t;
  for (int it = m.Nt_phys; it <= m.Nt(); ++it) {
    const double t = m.t(0, it);
    if (t >= t_lo - 1e-12 && t <= t_hi + 1e-12) rows_t.push_back(it);
  }
  if (rows_t.size() < 3) throw ValidationError("fit window contains too few mesh lines");

  const int n_modes = static_cast<int>(spectrum.entries.size());
  const int n_pts = static_cast<int>(rows_t.size()) * m.Ny;
  Eigen::MatrixXcd B(n_pts, n_modes);
  Eigen::VectorXcd rhs(n_pts);
  const Complex i1(0.0, 1.0);
  const Complex rot = std::exp(Complex(0.0, phi));

  int p = 0;
  for (int it : rows_t) {
    const double t = m.t(0, it);
    for (int iy = 0; iy < m.Ny; ++iy, ++p) {
      const double y = m.y(iy);
      rhs[p] = field.at(iy, it);
      for (int j = 0; j < n_modes; ++j) {
        const auto& e = spectrum.entries[static_cast<std::size_t>(j)];
        const Complex zt = T + rot * (t - T);
        B(p, j) = std::exp(i1 * e.lambda_minus * zt) *
                  std::exp(i1 * ((e.n + spectrum.alpha) * y));
      }
    }
  }

  // column scaling keeps evanescent modes from wrecking the conditioning
  Eigen::VectorXd scale(n_modes);
  for (int j = 0; j < n_modes; ++j) {
    scale[j] = B.col(j).norm();
    if (scale[j] == 0.0) scale[j] = 1.0;
    B.col(j) /= scale[j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cond = svd.singularValues()(0) / svd.singularValues()(n_modes - 1);
  if (cond * cond > 1e12)
    throw ValidationError("ill-conditioned fit basis (normal-equations condition " +
                          std::to_string(cond * cond) + "); widen the window");
  Eigen::VectorXcd c = svd.solve(rhs);
  for (int j = 0; j < n_modes; ++j) c[j] /= scale[j];

  OutgoingFit fit;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  for (int j = 0; j < n_modes; ++j)
    fit.coefficients[spectrum.entries[static_cast<std::size_t>(j)].n] = c[j];
  Eigen::VectorXcd model = Eigen::VectorXcd::Zero(n_pts);
  p = 0;
  for (int it : rows_t) {
    const double t = m.t(0, it);
    for (int iy = 0; iy < m.Ny; ++iy, ++p) {
      const double y = m.y(iy);
      for (int j = 0; j < n_modes; ++j) {
        const auto& e = spectrum.entries[static_cast<std::size_t>(j)];
        model[p] += c[j] * std::exp(i1 * e.lambda_minus * (T + rot * (t - T))) *
                    std::exp(i1 * ((e.n + spectrum.alpha) * y));
      }
    }
  }
  const double fn = rhs.norm();
  fit.residual = (fn > 0.0) ? (rhs - model).norm() / fn : 0.0;
  return fit;
}

OutgoingFit fit_outgoing(const solver::Field& field, const modes::ModeSpectrum& spectrum,
                         double phi, double T) {
  const double R = field.mesh->R;
  return fit_outgoing(field, T + 0.25 * (R - T), T + 0.75 * (R - T), spectrum, phi, T);
}

ModalTrace modal_trace(const solver::Field& field, int n) {
  const auto& m = *field.mesh;
  const auto alpha = field.dofmap->alpha;
  ModalTrace tr;
  tr.n = n;
  tr.alpha = alpha;
  const Complex i1(0.0, 1.0);
  for (int it = 0; it <= m.Nt(); ++it) {
    Complex acc = 0.0;
    for (int iy = 0; iy < m.Ny; ++iy)
      acc += field.at(iy, it) * std::exp(-i1 * ((n + alpha) * m.y(iy)));
    tr.ts.push_back(m.t(0, it));
    tr.vals.push_back(acc / static_cast<double>(m.Ny));
  }
  return tr;
}

namespace {

// composite Simpson on uniform samples; trapezoid cleanup for an odd last cell
Complex integrate_samples(const std::vector<double>& ts, const std::vector<Complex>& g) {
  const std::size_t n = ts.size();
  const double h = ts[1] - ts[0];
  Complex acc = 0.0;
  std::size_t i = 0;
  while (i + 2 < n) {
    acc += h / 3.0 * (g[i] + 4.0 * g[i + 1] + g[i + 2]);
    i += 2;
  }
  if (i + 1 < n) acc += 0.5 * h * (g[i] + g[i + 1]);
  return acc;
}

}  // namespace

LaplaceProbeResult laplace_probe(const std::vector<double>& ts, const std::vector<Complex>& us,
                                 const std::vector<TailTerm>& tail, double beta,
                                 const modes::PmlRates& rates, int n_re, int n_im, double radius) {
  if (!modes::beta_admissible(rates, beta))
    throw ValidationError("inadmissible beta = " + std::to_string(beta));
  if (ts.size() != us.size() || ts.size() < 3)
    throw ValidationError("probe needs at least 3 uniform profile samples");
  double umax = 0.0;
  for (const auto& u : us) umax = std::max(umax, std::abs(u));
  if (tail.empty() && umax > 0.0)
    throw ValidationError("tail fit missing: cannot close the transform integral");

  const double t_split = ts.back();
  const double phi = rates.phi;
  const Complex i1(0.0, 1.0);

  auto in_cone = [&](Complex lam) {
    if (!(lam.real() < 0.0)) return false;
    if (!(lam.imag() > beta)) return false;
    return (lam.imag() - beta) < -lam.real() * std::tan(phi);
  };
  auto near_pole = [&](Complex lam) {
    for (const auto& tt : tail)
      if (std::abs(lam - tt.lambda) < 0.1) return true;
    return false;
  };

  auto transform = [&](Complex lam) {
    std::vector<Complex> g(ts.size());
    for (std::size_t j = 0; j < ts.size(); ++j) g[j] = std::exp(-i1 * lam * ts[j]) * us[j];
    Complex val = integrate_samples(ts, g);
    for (const auto& tt : tail) {
      const Complex w = i1 * (tt.lambda - lam);  // Re w < 0 in the cone
      val += tt.coeff * (-std::exp(w * t_split) / w);
    }
    return val;
  };

  LaplaceProbeResult out;
  out.n_re = n_re;
  out.n_im = n_im;
  const double re_lo = -radius, re_hi = -1e-3;
  const double im_lo = beta + 1e-3, im_hi = beta + radius * std::tan(phi);
  const double h_re = (re_hi - re_lo) / (n_re - 1);
  const double h_im = (im_hi - im_lo) / (n_im - 1);
  out.samples.resize(static_cast<std::size_t>(n_re) * n_im);
  for (int j = 0; j < n_im; ++j) {
    for (int i = 0; i < n_re; ++i) {
      const Complex lam(re_lo + i * h_re, im_lo + j * h_im);
      auto& s = out.samples[static_cast<std::size_t>(j) * n_re + i];
      s.lambda = lam;
      if (!in_cone(lam)) {
        s.flag = "outside_cone";
        s.value = 0.0;
      } else if (near_pole(lam)) {
        s.flag = "near_singularity";
        s.value = transform(lam);
      } else {
        s.value = transform(lam);
      }
    }
  }

  // discrete Cauchy-Riemann defect on interior plaquette centers
  double worst = 0.0;
  auto at = [&](int i, int j) -> const ProbeSample& {
    return out.samples[static_cast<std::size_t>(j) * n_re + i];
  };
  for (int j = 1; j + 1 < n_im; ++j) {
    for (int i = 1; i + 1 < n_re; ++i) {
      const auto& c = at(i, j);
      if (!c.flag.empty()) continue;
      const auto &e = at(i + 1, j), &w = at(i - 1, j), &no = at(i, j + 1), &so = at(i, j - 1);
      if (!e.flag.empty() || !w.flag.empty() || !no.flag.empty() || !so.flag.empty()) continue;
      const Complex dx = (e.value - w.value) / (2.0 * h_re);
      const Complex dy = (no.value - so.value) / (2.0 * h_im);
      const double scale = std::abs(dx) + std::abs(dy) + 1e-300;
      worst = std::max(worst, std::abs(dx + i1 * dy) / scale);
    }
  }
  out.analyticity_residual = worst;
  return out;
}

}  // namespace qpml::radiation
