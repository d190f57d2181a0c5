#include "qpml/solver.hpp"

#include <Eigen/SparseLU>

#include <cmath>

namespace qpml::solver {

namespace {
constexpr double kResidualBound = 1e-10;
}

Field solve(const fem::AssembledSystem& system, std::shared_ptr<const fem::Mesh> mesh,
            std::shared_ptr<const fem::DofMap> dofmap) {
  if (system.n_free == 0) throw SolveError("empty system");

  Eigen::SparseLU<fem::SparseC> lu;
  lu.analyzePattern(system.A);
  lu.factorize(system.A);
  if (lu.info() != Eigen::Success)
    throw SolveError("singular system: sparse factorization failed (" + lu.lastErrorMessage() +
                     "); parameters may sit outside the invertible regime");

  const double bnorm = system.b.norm();
  VectorC x;
  double rel = 0.0;
  if (bnorm == 0.0) {
    x = VectorC::Zero(system.n_free);
  } else {
    x = lu.solve(system.b);
    for (int round = 0; round < 3; ++round) {
      const VectorC r = system.b - system.A * x;
      rel = r.norm() / bnorm;
      if (rel <= kResidualBound) break;
      x += lu.solve(r);
    }
    rel = (system.b - system.A * x).norm() / bnorm;
    if (rel > kResidualBound)
      throw SolveError("residual failure: relative residual " + std::to_string(rel) +
                       " exceeds 1e-10 after iterative refinement");
  }

  Field f;
  f.mesh = std::move(mesh);
  f.dofmap = std::move(dofmap);
  f.residual = rel;
  const auto& m = *f.mesh;
  const auto& d = *f.dofmap;
  f.values = VectorC::Zero(m.n_nodes());
  const int Nt = m.Nt();
  for (int it = 1; it < Nt; ++it)
    for (int iy = 0; iy < m.Ny; ++iy)
      f.values[m.node(iy, it)] = x[d.index[static_cast<std::size_t>(m.node(iy, it))]];
  for (int iy = 0; iy < m.Ny; ++iy) f.values[m.node(iy, Nt)] = system.g_top[iy];
  // seam reconstruction: value(+pi) = e^{2 pi i alpha} value(-pi), exactly
  for (int it = 0; it <= Nt; ++it) f.values[m.node(m.Ny, it)] = d.bloch * f.values[m.node(0, it)];
  return f;
}

}  // namespace qpml::solver
