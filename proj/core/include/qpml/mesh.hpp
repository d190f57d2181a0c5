#pragma once

#include <complex>
#include <vector>

#include "qpml/model.hpp"

namespace qpml::fem {

using Complex = std::complex<double>;

/// Boundary-fitted structured quad grid over the truncated cell.
/// (Ny+1) x (Nt+1) nodes, y uniform on [-pi, pi]; below the interface the
/// t-lines blend from g(y) to the flat line t = T, above they are uniform up
/// to R. The lines t = T and t = R are exact.
struct Mesh {
  int Ny = 0;
  int Nt_phys = 0;
  int Nt_pml = 0;
  double T = 0.0;
  double R = 0.0;
  std::vector<double> ys;  // Ny+1
  std::vector<double> ts;  // (Nt+1)*(Ny+1), node (iy,it) at ts[it*(Ny+1)+iy]

  int Nt() const { return Nt_phys + Nt_pml; }
  int n_nodes() const { return (Ny + 1) * (Nt() + 1); }
  int node(int iy, int it) const { return it * (Ny + 1) + iy; }
  double y(int iy) const { return ys[static_cast<std::size_t>(iy)]; }
  double t(int iy, int it) const { return ts[static_cast<std::size_t>(node(iy, it))]; }
  bool element_in_pml(int it) const { return it >= Nt_phys; }
  int interface_row() const { return Nt_phys; }
  int top_row() const { return Nt(); }
};

Mesh build_mesh(const model::Geometry& geometry, int Ny, int Nt_phys, int Nt_pml);

/// Node -> equation map with Bloch identification (the y = +pi column folds
/// onto y = -pi carrying e^{2 pi i alpha}) and Dirichlet masks for the bottom
/// and top boundaries.
struct DofMap {
  double alpha = 0.0;
  Complex bloch = 1.0;     // e^{2 pi i alpha}
  int n_free = 0;
  std::vector<int> index;  // node id -> equation index, or -1 (Dirichlet / folded)

  bool dirichlet(int node_id) const { return index[static_cast<std::size_t>(node_id)] < 0; }
};

DofMap build_dofmap(const Mesh& mesh, double alpha);

}  // namespace qpml::fem
