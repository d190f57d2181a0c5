#pragma once

#include <map>
#include <string>

#include "qpml/modes.hpp"
#include "qpml/oracle.hpp"
#include "qpml/solver.hpp"

namespace qpml::radiation {

using Complex = std::complex<double>;

/// Least-squares decomposition of a field over the scaled outgoing modes
/// e^{i lambda_n^- (T + e^{i phi}(t-T))} e^{i(n+alpha)y} in a PML window.
struct OutgoingFit {
  double t_lo = 0.0, t_hi = 0.0;
  std::map<int, Complex> coefficients;  // n -> c_n (physical outgoing amplitudes)
  double residual = 0.0;                // relative L2 misfit over the window
};

OutgoingFit fit_outgoing(const solver::Field& field, double t_lo, double t_hi,
                         const modes::ModeSpectrum& spectrum, double phi, double T);

/// Default window [T + 0.25(R-T), T + 0.75(R-T)].
OutgoingFit fit_outgoing(const solver::Field& field, const modes::ModeSpectrum& spectrum,
                         double phi, double T);

/// Modal trace u_n(t) on the mesh t-lines (rectangle rule over the periodic
/// y direction; spectrally accurate on the uniform grid).
struct ModalTrace {
  int n = 0;
  double alpha = 0.0;
  std::vector<double> ts;
  std::vector<Complex> vals;
};

ModalTrace modal_trace(const solver::Field& field, int n);

/// One outgoing tail term c e^{i lambda t} used to close the transform
/// integral beyond the sampled range.
struct TailTerm {
  Complex lambda;
  Complex coeff;
};

struct ProbeSample {
  Complex lambda;
  Complex value;
  std::string flag;  // "", "near_singularity", "outside_cone"
};

struct LaplaceProbeResult {
  std::vector<ProbeSample> samples;  // row-major on the (re, im) grid
  int n_re = 0, n_im = 0;
  double analyticity_residual = 0.0;  // max discrete Cauchy-Riemann defect
};

/// Fourier-Laplace transform u_hat(lambda) = int_0^inf e^{-i lambda t} u(t) dt
/// of a modal profile given by uniform samples on [0, t_split] plus an
/// outgoing-tail closed form beyond; evaluated on a rectangular lambda grid
/// clipped to the open cone K^phi_beta with vertex i*beta.
LaplaceProbeResult laplace_probe(const std::vector<double>& ts, const std::vector<Complex>& us,
                                 const std::vector<TailTerm>& tail, double beta,
                                 const modes::PmlRates& rates, int n_re = 24, int n_im = 16,
                                 double radius = 3.0);

}  // namespace qpml::radiation
