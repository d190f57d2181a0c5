#pragma once

#include <functional>
#include <optional>

#include "qpml/model.hpp"
#include "qpml/solver.hpp"

namespace qpml::oracle {

using Complex = std::complex<double>;

/// 1D reference solution for a single transverse mode: either the exact
/// Green's-function solution (q == 0, with a closed-form outgoing tail) or a
/// high-resolution self-converged FEM reference (t-only potentials).
struct ModalSolution1D {
  int n = 0;
  double alpha = 0.0;
  Complex lambda;               // lambda_n^-
  double g0 = 0.0;
  double support_lo = 0.0, support_hi = 0.0;
  std::vector<double> ts;
  std::vector<Complex> values;
  std::optional<Complex> tail_coeff;  // u(t) = c e^{i lambda t} for t > support_hi
  std::function<Complex(double)> exact_eval;  // quadrature-exact point evaluation (exact oracle)

  Complex eval(double t) const;
};

/// Exact outgoing solution of u'' + lambda^2 u = f, u(g0) = 0, via the
/// Green's kernel with basis sin(lambda (t-g0)) and e^{i lambda (t-g0)}.
ModalSolution1D exact_modal_solution(int n, double k, double alpha, double g0,
                                     const std::function<Complex(double)>& f, double support_lo,
                                     double support_hi, double R_eval, int grid_n = 4001);

ModalSolution1D exact_modal_solution(int n, double k, double alpha, double g0,
                                     const model::SourceComponent& f, double R_eval,
                                     int grid_n = 4001);

/// 1D instance of the fem+solver pipeline (P1, consistent mass, the same
/// regional complex weights), used as reference when q != 0.
ModalSolution1D reference_solve_1d(int n, double k, double alpha,
                                   const model::PotentialSpec& potential,
                                   const model::SourceComponent& f, double phi, double g0,
                                   double T, double R_big, double h);

enum class Region { ET, ER, PML };
enum class NormKind { H1, L2 };

/// Discrete norm of the Q1 field with weight e^{gamma t} at quadrature
/// points; gamma = 0 recovers the plain Sobolev norm.
double norm_weighted(const solver::Field& field, Region region, NormKind kind, double gamma);

/// Norm on E^T of field minus the tensorized 1D references
/// sum_j u_j(t) e^{i(n_j+alpha)y}, with each reference brought to the field's
/// nodes (nodal interpolation of the finer representation). Requires a
/// flat-bottom mesh.
double error_vs_reference(const solver::Field& field, const std::vector<ModalSolution1D>& refs,
                          NormKind kind = NormKind::H1);
double error_vs_reference(const solver::Field& field, const ModalSolution1D& reference);

/// Comparison on E^T against a reference on the same mesh or on its dyadic
/// refinement (nodal transfer from the finer mesh).
double error_vs_reference(const solver::Field& field, const solver::Field& reference);

}  // namespace qpml::oracle
