#include "qpml/mesh.hpp"

#include <cmath>

namespace qpml::fem {

namespace {

// Corner Jacobians of the bilinear map; all four positive implies a convex,
// positively oriented quad.
bool element_ok(const Mesh& m, int iy, int it) {
  const double x0 = m.y(iy), x1 = m.y(iy + 1);
  const double t00 = m.t(iy, it), t10 = m.t(iy + 1, it);
  const double t01 = m.t(iy, it + 1), t11 = m.t(iy + 1, it + 1);
  const double px[4] = {x0, x1, x1, x0};
  const double pt[4] = {t00, t10, t11, t01};
  for (int c = 0; c < 4; ++c) {
    const int prev = (c + 3) % 4, next = (c + 1) % 4;
    const double ax = px[next] - px[c], at = pt[next] - pt[c];
    const double bx = px[prev] - px[c], bt = pt[prev] - pt[c];
    if (ax * bt - at * bx <= 0.0) return false;  // CCW convex corner
  }
  return true;
}

}  // namespace

Mesh build_mesh(const model::Geometry& geometry, int Ny, int Nt_phys, int Nt_pml) {
  geometry.validate();
  if (Ny < 4 || Ny % 2 != 0) throw ValidationError("Ny must be even and >= 4");
  if (Nt_phys < 2 || Nt_pml < 2) throw ValidationError("Nt_phys and Nt_pml must be >= 2");

  Mesh m;
  m.Ny = Ny;
  m.Nt_phys = Nt_phys;
  m.Nt_pml = Nt_pml;
  m.T = geometry.T;
  m.R = geometry.R;
  m.ys.resize(static_cast<std::size_t>(Ny + 1));
  for (int iy = 0; iy <= Ny; ++iy) m.ys[static_cast<std::size_t>(iy)] = -M_PI + 2.0 * M_PI * iy / Ny;
  // keep the seam columns exactly identifiable
  m.ys.back() = M_PI;

  const int Nt = m.Nt();
  m.ts.resize(static_cast<std::size_t>((Nt + 1) * (Ny + 1)));
  for (int iy = 0; iy <= Ny; ++iy) {
    const double g = geometry.profile.eval(m.y(iy));
    for (int it = 0; it <= Nt_phys; ++it) {
      const double sigma = static_cast<double>(it) / Nt_phys;
      m.ts[static_cast<std::size_t>(m.node(iy, it))] = g * (1.0 - sigma) + geometry.T * sigma;
    }
    for (int it = 1; it <= Nt_pml; ++it) {
      m.ts[static_cast<std::size_t>(m.node(iy, Nt_phys + it))] =
          geometry.T + (geometry.R - geometry.T) * it / Nt_pml;
    }
  }

  for (int it = 0; it < Nt; ++it)
    for (int iy = 0; iy < Ny; ++iy)
      if (!element_ok(m, iy, it))
        throw ValidationError("degenerate element at cell (iy=" + std::to_string(iy) +
                              ", it=" + std::to_string(it) + "): non-positive Jacobian");
  return m;
}

DofMap build_dofmap(const Mesh& mesh, double alpha) {
  if (alpha < 0.0 || alpha >= 1.0) throw ValidationError("alpha must lie in [0,1)");
  DofMap d;
  d.alpha = alpha;
  d.bloch = std::exp(Complex(0.0, 2.0 * M_PI * alpha));
  d.index.assign(static_cast<std::size_t>(mesh.n_nodes()), -1);
  const int Nt = mesh.Nt();
  int eq = 0;
  for (int it = 1; it < Nt; ++it)
    for (int iy = 0; iy < mesh.Ny; ++iy)  // iy = Ny folds onto iy = 0
      d.index[static_cast<std::size_t>(mesh.node(iy, it))] = eq++;
  d.n_free = eq;
  if (d.n_free == 0) throw ValidationError("empty system: mesh has no interior rows");
  if (d.n_free != mesh.Ny * (Nt - 1)) throw Error("dof count mismatch");  // structural assert
  return d;
}

}  // namespace qpml::fem
