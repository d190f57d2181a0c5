#include "qpml/oracle.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

#include "qpml/modes.hpp"

namespace qpml::oracle {

namespace {

// Adaptive Simpson for complex integrands, absolute tolerance.
Complex simpson_c(const std::function<Complex(double)>& f, double a, double b, double tol,
                  int depth = 52) {
  auto simp = [](Complex fa, Complex fm, Complex fb, double a_, double b_) {
    return (b_ - a_) / 6.0 * (fa + 4.0 * fm + fb);
  };
  std::function<Complex(double, double, Complex, Complex, Complex, Complex, int)> rec =
      [&](double a_, double b_, Complex fa, Complex fm, Complex fb, Complex whole,
          int d) -> Complex {
    const double m = 0.5 * (a_ + b_);
    const Complex flm = f(0.5 * (a_ + m)), frm = f(0.5 * (m + b_));
    const Complex left = simp(fa, flm, fm, a_, m);
    const Complex right = simp(fm, frm, fb, m, b_);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(a_, m, fa, flm, fm, left, d - 1) + rec(m, b_, fm, frm, fb, right, d - 1);
  };
  if (b <= a) return 0.0;
  const Complex fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, simp(fa, fm, fb, a, b), depth);
}

Complex lambda_minus(int n, double k, double alpha) {
  const double b = n + alpha;
  const double arg = k * k - b * b;
  if (arg > 0.0) return Complex(std::sqrt(arg), 0.0);
  return Complex(0.0, std::sqrt(-arg));
}

}  // namespace

Complex ModalSolution1D::eval(double t) const {
  if (tail_coeff && t > support_hi)
    return *tail_coeff * std::exp(Complex(0.0, 1.0) * lambda * t);
  if (exact_eval) return exact_eval(t);
  // linear interpolation on the stored grid
  if (ts.empty()) return 0.0;
  if (t <= ts.front()) return values.front();
  if (t >= ts.back()) return values.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - ts.begin());
  const double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
  return values[j - 1] * (1.0 - w) + values[j] * w;
}

ModalSolution1D exact_modal_solution(int n, double k, double alpha, double g0,
                                     const std::function<Complex(double)>& f, double support_lo,
                                     double support_hi, double R_eval, int grid_n) {
  modes::validate_parameters(k, alpha, std::max(8, std::abs(n) + 1));
  const Complex lam = lambda_minus(n, k, alpha);
  const Complex i1(0.0, 1.0);
  const Complex W = -lam;  // Wronskian of {sin(lam s), e^{i lam s}} in s = t - g0

  auto phi1 = [&](double t) { return std::sin(lam * (t - g0)); };
  auto phi2 = [&](double t) { return std::exp(i1 * lam * (t - g0)); };

  auto value_at = [&](double t) -> Complex {
    const double hi1 = std::min(t, support_hi);
    Complex I1 = 0.0, I2 = 0.0;
    if (hi1 > support_lo)
      I1 = simpson_c([&](double s) { return phi1(s) * f(s); }, support_lo, hi1, 1e-14);
    const double lo2 = std::max(t, support_lo);
    if (support_hi > lo2)
      I2 = simpson_c([&](double s) { return phi2(s) * f(s); }, lo2, support_hi, 1e-14);
    return (phi2(t) * I1 + phi1(t) * I2) / W;
  };

  ModalSolution1D sol;
  sol.n = n;
  sol.alpha = alpha;
  sol.lambda = lam;
  sol.g0 = g0;
  sol.support_lo = support_lo;
  sol.support_hi = support_hi;
  sol.exact_eval = value_at;
  const Complex Ifull =
      simpson_c([&](double s) { return phi1(s) * f(s); }, support_lo, support_hi, 1e-14);
  sol.tail_coeff = std::exp(-i1 * lam * g0) * Ifull / W;

  sol.ts.resize(static_cast<std::size_t>(grid_n));
  sol.values.resize(static_cast<std::size_t>(grid_n));
  for (int j = 0; j < grid_n; ++j) {
    const double t = g0 + (R_eval - g0) * j / (grid_n - 1);
    sol.ts[static_cast<std::size_t>(j)] = t;
    sol.values[static_cast<std::size_t>(j)] = value_at(t);
  }
  return sol;
}

ModalSolution1D exact_modal_solution(int n, double k, double alpha, double g0,
                                     const model::SourceComponent& f, double R_eval, int grid_n) {
  if (f.profile != model::SourceProfile::compact_bump)
    throw ValidationError("exact modal oracle needs a compactly supported source");
  return exact_modal_solution(
      n, k, alpha, g0, [&](double t) { return model::source_component_eval(f, Complex(t, 0.0)); },
      f.t0, f.t1, R_eval, grid_n);
}

ModalSolution1D reference_solve_1d(int n, double k, double alpha,
                                   const model::PotentialSpec& potential,
                                   const model::SourceComponent& f, double phi, double g0,
                                   double T, double R_big, double h) {
  if (!potential.t_only())
    throw ValidationError("1D reference requires a t-only potential (constant y_factor)");
  modes::validate_parameters(k, alpha, std::max(8, std::abs(n) + 1));
  const double b2 = (n + alpha) * (n + alpha);
  const double k2 = k * k;
  const Complex wphys = std::exp(Complex(0.0, -phi));
  const Complex wpml = std::exp(Complex(0.0, -2.0 * phi));

  const int n_phys = std::max(2, static_cast<int>(std::lround((T - g0) / h)));
  const int n_pml = std::max(2, static_cast<int>(std::lround((R_big - T) / h)));
  const int N = n_phys + n_pml + 1;
  std::vector<double> ts(static_cast<std::size_t>(N));
  for (int j = 0; j <= n_phys; ++j) ts[static_cast<std::size_t>(j)] = g0 + (T - g0) * j / n_phys;
  for (int j = 1; j <= n_pml; ++j)
    ts[static_cast<std::size_t>(n_phys + j)] = T + (R_big - T) * j / n_pml;

  const double g = 1.0 / std::sqrt(3.0);
  std::vector<Eigen::Triplet<Complex>> trip;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(N);
  for (int e = 0; e + 1 < N; ++e) {
    const double t0 = ts[static_cast<std::size_t>(e)], t1 = ts[static_cast<std::size_t>(e + 1)];
    const double he = t1 - t0;
    const bool pml = t0 >= T - 1e-12 && t1 > T + 1e-12;
    const double Kl[2][2] = {{1.0 / he, -1.0 / he}, {-1.0 / he, 1.0 / he}};
    Complex Ke[2][2] = {};
    Complex be[2] = {};
    for (double xi : {-g, g}) {
      const double t = 0.5 * (t0 + t1) + 0.5 * he * xi;
      const double sh[2] = {0.5 * (1 - xi), 0.5 * (1 + xi)};
      const double jw = 0.5 * he;
      Complex qv, fv;
      if (pml) {
        qv = model::potential_scaled_eval(potential, 0.0, t, T, phi);
        const Complex z = T + std::exp(Complex(0.0, phi)) * (t - T);
        fv = model::source_component_eval(f, z);
      } else {
        qv = model::potential_eval(potential, 0.0, t);
        fv = model::source_component_eval(f, Complex(t, 0.0));
      }
      const Complex react = qv + k2 - b2;
      for (int a = 0; a < 2; ++a) {
        for (int bn = 0; bn < 2; ++bn) {
          const Complex mass = -react * sh[a] * sh[bn] * jw;
          Ke[a][bn] += pml ? mass : wphys * mass;
        }
        be[a] += (pml ? Complex(1.0) : wphys) * (-fv) * sh[a] * jw;
      }
    }
    for (int a = 0; a < 2; ++a)
      for (int bn = 0; bn < 2; ++bn)
        Ke[a][bn] += (pml ? wpml : wphys) * Kl[a][bn];  // exact P1 stiffness
    for (int a = 0; a < 2; ++a) {
      rhs[e + a] += be[a];
      for (int bn = 0; bn < 2; ++bn) trip.emplace_back(e + a, e + bn, Ke[a][bn]);
    }
  }

  // Dirichlet at both ends
  fem::SparseC A(N, N);
  A.setFromTriplets(trip.begin(), trip.end());
  std::vector<int> keep(static_cast<std::size_t>(N - 2));
  for (int j = 1; j + 1 < N; ++j) keep[static_cast<std::size_t>(j - 1)] = j;
  fem::SparseC Ai(N - 2, N - 2);
  {
    std::vector<Eigen::Triplet<Complex>> ti;
    for (int kcol = 0; kcol < A.outerSize(); ++kcol)
      for (fem::SparseC::InnerIterator it(A, kcol); it; ++it) {
        const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
        if (r >= 1 && r <= N - 2 && c >= 1 && c <= N - 2)
          ti.emplace_back(r - 1, c - 1, it.value());
      }
    Ai.setFromTriplets(ti.begin(), ti.end());
  }
  Eigen::SparseLU<fem::SparseC> lu;
  lu.compute(Ai);
  if (lu.info() != Eigen::Success) throw SolveError("1D reference factorization failed");
  Eigen::VectorXcd bi(N - 2);
  for (int j = 1; j + 1 < N; ++j) bi[j - 1] = rhs[j];
  const Eigen::VectorXcd xi = lu.solve(bi);
  const double rel = (bi - Ai * xi).norm() / std::max(bi.norm(), 1e-300);
  if (rel > 1e-9) throw SolveError("1D reference residual failure");

  ModalSolution1D sol;
  sol.n = n;
  sol.alpha = alpha;
  sol.lambda = lambda_minus(n, k, alpha);
  sol.g0 = g0;
  sol.support_lo = f.t0;
  sol.support_hi = f.t1;
  sol.ts = ts;
  sol.values.assign(static_cast<std::size_t>(N), Complex(0.0));
  for (int j = 1; j + 1 < N; ++j) sol.values[static_cast<std::size_t>(j)] = xi[j - 1];
  return sol;
}

namespace {

struct GaussPt {
  double xi, eta;
};
const GaussPt kG4[4] = {{-0.5773502691896257, -0.5773502691896257},
                        {0.5773502691896257, -0.5773502691896257},
                        {0.5773502691896257, 0.5773502691896257},
                        {-0.5773502691896257, 0.5773502691896257}};

// accumulate |v|^2 (+ |grad v|^2) over one element with weight e^{gamma t}
void element_accumulate(const fem::Mesh& m, const Eigen::VectorXcd& nodal, int iy, int it,
                        NormKind kind, double gamma, double& acc) {
  const int ciy[4] = {iy, iy + 1, iy + 1, iy};
  const int cit[4] = {it, it, it + 1, it + 1};
  double xq[4], tq[4];
  Complex v[4];
  for (int c = 0; c < 4; ++c) {
    xq[c] = m.y(ciy[c]);
    tq[c] = m.t(ciy[c], cit[c]);
    v[c] = nodal[m.node(ciy[c], cit[c])];
  }
  for (const auto& gp : kG4) {
    const double N[4] = {0.25 * (1 - gp.xi) * (1 - gp.eta), 0.25 * (1 + gp.xi) * (1 - gp.eta),
                         0.25 * (1 + gp.xi) * (1 + gp.eta), 0.25 * (1 - gp.xi) * (1 + gp.eta)};
    const double dXi[4] = {-0.25 * (1 - gp.eta), 0.25 * (1 - gp.eta), 0.25 * (1 + gp.eta),
                           -0.25 * (1 + gp.eta)};
    const double dEta[4] = {-0.25 * (1 - gp.xi), -0.25 * (1 + gp.xi), 0.25 * (1 + gp.xi),
                            0.25 * (1 - gp.xi)};
    double J00 = 0, J01 = 0, J10 = 0, J11 = 0, tv = 0;
    for (int c = 0; c < 4; ++c) {
      J00 += dXi[c] * xq[c];
      J01 += dXi[c] * tq[c];
      J10 += dEta[c] * xq[c];
      J11 += dEta[c] * tq[c];
      tv += N[c] * tq[c];
    }
    const double det = J00 * J11 - J01 * J10;
    const double w = std::exp(2.0 * gamma * tv) * det;
    Complex val = 0.0, gy = 0.0, gt = 0.0;
    for (int c = 0; c < 4; ++c) {
      val += N[c] * v[c];
      const double dy = (J11 * dXi[c] - J10 * dEta[c]) / det;
      const double dt = (-J01 * dXi[c] + J00 * dEta[c]) / det;
      gy += dy * v[c];
      gt += dt * v[c];
    }
    acc += std::norm(val) * w;
    if (kind == NormKind::H1) acc += (std::norm(gy) + std::norm(gt)) * w;
  }
}

bool element_in_region(const fem::Mesh& m, int it, Region region) {
  switch (region) {
    case Region::ET:
      return it < m.Nt_phys;
    case Region::PML:
      return it >= m.Nt_phys;
    case Region::ER:
      return true;
  }
  return false;
}

}  // namespace

double norm_weighted(const solver::Field& field, Region region, NormKind kind, double gamma) {
  const auto& m = *field.mesh;
  double acc = 0.0;
  for (int it = 0; it < m.Nt(); ++it) {
    if (!element_in_region(m, it, region)) continue;
    for (int iy = 0; iy < m.Ny; ++iy) element_accumulate(m, field.values, iy, it, kind, gamma, acc);
  }
  return std::sqrt(acc);
}

double error_vs_reference(const solver::Field& field, const std::vector<ModalSolution1D>& refs,
                          NormKind kind) {
  const auto& m = *field.mesh;
  for (int iy = 1; iy <= m.Ny; ++iy)
    if (std::abs(m.t(iy, 0) - m.t(0, 0)) > 1e-12)
      throw ValidationError("region mismatch: 1D reference requires a flat-bottom mesh");

  Eigen::VectorXcd diff = field.values;
  const Complex i1(0.0, 1.0);
  for (const auto& reference : refs) {
    const double beta = reference.n + reference.alpha;
    for (int it = 0; it <= m.Nt(); ++it) {
      const Complex prof = reference.eval(m.t(0, it));
      for (int iy = 0; iy <= m.Ny; ++iy)
        diff[m.node(iy, it)] -= prof * std::exp(i1 * (beta * m.y(iy)));
    }
  }
  solver::Field d;
  d.mesh = field.mesh;
  d.dofmap = field.dofmap;
  d.values = std::move(diff);
  return norm_weighted(d, Region::ET, kind, 0.0);
}

double error_vs_reference(const solver::Field& field, const ModalSolution1D& reference) {
  return error_vs_reference(field, std::vector<ModalSolution1D>{reference});
}

double error_vs_reference(const solver::Field& field, const solver::Field& reference) {
  const auto& m1 = *field.mesh;
  const auto& m2 = *reference.mesh;
  int stride = 0;
  if (m1.Ny == m2.Ny && m1.Nt_phys == m2.Nt_phys) stride = 1;
  if (2 * m1.Ny == m2.Ny && 2 * m1.Nt_phys == m2.Nt_phys) stride = 2;
  if (stride == 0)
    throw ValidationError("region mismatch: fields live on incompatible meshes");
  for (int it = 0; it <= m1.Nt_phys; ++it)
    for (int iy = 0; iy <= m1.Ny; ++iy)
      if (std::abs(m1.t(iy, it) - m2.t(stride * iy, stride * it)) > 1e-12)
        throw ValidationError("region mismatch: t-lines differ below the interface");
  Eigen::VectorXcd diff = field.values;
  for (int it = 0; it <= m1.Nt_phys; ++it)
    for (int iy = 0; iy <= m1.Ny; ++iy)
      diff[m1.node(iy, it)] -= reference.values[m2.node(stride * iy, stride * it)];
  solver::Field d;
  d.mesh = field.mesh;
  d.dofmap = field.dofmap;
  d.values = std::move(diff);
  return norm_weighted(d, Region::ET, NormKind::H1, 0.0);
}

}  // namespace qpml::oracle
