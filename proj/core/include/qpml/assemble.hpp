#pragma once

#include <Eigen/SparseCore>

#include "qpml/mesh.hpp"
#include "qpml/model.hpp"

namespace qpml::fem {

using SparseC = Eigen::SparseMatrix<Complex>;
using VectorC = Eigen::VectorXcd;

/// Discrete realization of the weighted variational form on the free dofs.
/// A is assembled with unconjugated integrands; the Bloch fold carries
/// e^{2 pi i alpha} on trial columns and its conjugate on test rows, so A is
/// complex symmetric exactly when e^{2 pi i alpha} is real.
struct AssembledSystem {
  SparseC A;        // n_free x n_free
  SparseC A_top;    // coupling of free dofs to the Ny top-row boundary nodes
  VectorC b0;       // pristine right-hand side (zero top data)
  VectorC b;        // current right-hand side after lifting
  VectorC g_top;    // current top boundary data, length Ny (iy = 0..Ny-1)
  int n_free = 0;

  double norm_inf() const;
};

struct AssembleParams {
  double k = 0.0;
  double alpha = 0.0;
  double phi = 0.0;
  double T = 0.0;
};

AssembledSystem assemble(const Mesh& mesh, const DofMap& dofmap,
                         const model::PotentialSpec& potential, const model::SourceSpec& source,
                         const AssembleParams& prm);

/// Dirichlet lifting for top data G (length Ny, values at iy = 0..Ny-1 on t=R);
/// returns a new system with b = b0 - A_top * G. G == 0 reproduces the input.
AssembledSystem apply_dirichlet(const AssembledSystem& system, const DofMap& dofmap,
                                const VectorC& G);

/// Coordinate-format text dump (row, col, re, im per line).
void dump_matrix(const AssembledSystem& system, std::ostream& os);

}  // namespace qpml::fem
