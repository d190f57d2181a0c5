#include "qpml/assemble.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <vector>

namespace qpml::fem {

namespace {

struct GaussPt {
  double xi, eta, w;
};

// 2x2 tensor Gauss rule on [-1,1]^2
const std::array<GaussPt, 4>& gauss4() {
  static const double g = 1.0 / std::sqrt(3.0);
  static const std::array<GaussPt, 4> pts = {
      GaussPt{-g, -g, 1.0}, GaussPt{g, -g, 1.0}, GaussPt{g, g, 1.0}, GaussPt{-g, g, 1.0}};
  return pts;
}

void shape(double xi, double eta, double N[4], double dNdxi[4], double dNdeta[4]) {
  N[0] = 0.25 * (1 - xi) * (1 - eta);
  N[1] = 0.25 * (1 + xi) * (1 - eta);
  N[2] = 0.25 * (1 + xi) * (1 + eta);
  N[3] = 0.25 * (1 - xi) * (1 + eta);
  dNdxi[0] = -0.25 * (1 - eta);
  dNdxi[1] = 0.25 * (1 - eta);
  dNdxi[2] = 0.25 * (1 + eta);
  dNdxi[3] = -0.25 * (1 + eta);
  dNdeta[0] = -0.25 * (1 - xi);
  dNdeta[1] = -0.25 * (1 + xi);
  dNdeta[2] = 0.25 * (1 + xi);
  dNdeta[3] = 0.25 * (1 - xi);
}

}  // namespace

double AssembledSystem::norm_inf() const {
  double m = 0.0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseC::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

AssembledSystem assemble(const Mesh& mesh, const DofMap& dofmap,
                         const model::PotentialSpec& potential, const model::SourceSpec& source,
                         const AssembleParams& prm) {
  const int Ny = mesh.Ny, Nt = mesh.Nt();
  const Complex wphys = std::exp(Complex(0.0, -prm.phi));
  const Complex wpml_t = std::exp(Complex(0.0, -2.0 * prm.phi));
  const double k2 = prm.k * prm.k;

  std::vector<Eigen::Triplet<Complex>> trip, trip_top;
  trip.reserve(static_cast<std::size_t>(Ny) * Nt * 16);
  VectorC b0 = VectorC::Zero(dofmap.n_free);

  // equation/column of a node after the Bloch fold, with the trial (column)
  // phase; test rows use the conjugate phase
  auto fold = [&](int iy, int it) -> std::pair<int, Complex> {
    if (iy == Ny) return {dofmap.index[static_cast<std::size_t>(mesh.node(0, it))], dofmap.bloch};
    return {dofmap.index[static_cast<std::size_t>(mesh.node(iy, it))], Complex(1.0, 0.0)};
  };

  double xq[4], tq[4];
  for (int it = 0; it < Nt; ++it) {
    const bool pml = mesh.element_in_pml(it);
    for (int iy = 0; iy < Ny; ++iy) {
      const int corner_iy[4] = {iy, iy + 1, iy + 1, iy};
      const int corner_it[4] = {it, it, it + 1, it + 1};
      for (int c = 0; c < 4; ++c) {
        xq[c] = mesh.y(corner_iy[c]);
        tq[c] = mesh.t(corner_iy[c], corner_it[c]);
      }

      Complex Ke[4][4] = {};
      Complex be[4] = {};
      for (const auto& gp : gauss4()) {
        double N[4], dXi[4], dEta[4];
        shape(gp.xi, gp.eta, N, dXi, dEta);
        double J00 = 0, J01 = 0, J10 = 0, J11 = 0, yq = 0, tqq = 0;
        for (int c = 0; c < 4; ++c) {
          J00 += dXi[c] * xq[c];
          J01 += dXi[c] * tq[c];
          J10 += dEta[c] * xq[c];
          J11 += dEta[c] * tq[c];
          yq += N[c] * xq[c];
          tqq += N[c] * tq[c];
        }
        const double det = J00 * J11 - J01 * J10;
        const double inv00 = J11 / det, inv01 = -J01 / det, inv10 = -J10 / det, inv11 = J00 / det;
        double dy[4], dt[4];
        for (int c = 0; c < 4; ++c) {
          dy[c] = inv00 * dXi[c] + inv10 * dEta[c];
          dt[c] = inv01 * dXi[c] + inv11 * dEta[c];
        }
        const double jw = det * gp.w;

        Complex qv, fv;
        if (pml) {
          qv = model::potential_scaled_eval(potential, yq, tqq, prm.T, prm.phi);
          fv = model::source_scaled_eval(source, prm.alpha, yq, tqq, prm.T, prm.phi);
        } else {
          qv = model::potential_eval(potential, yq, tqq);
          fv = model::source_eval(source, prm.alpha, yq, tqq);
        }
        const Complex react = qv + k2;

        for (int a = 0; a < 4; ++a) {
          for (int bn = 0; bn < 4; ++bn) {
            Complex v;
            if (pml)
              v = (dy[a] * dy[bn] + wpml_t * dt[a] * dt[bn] - react * N[a] * N[bn]) * jw;
            else
              v = wphys * (dy[a] * dy[bn] + dt[a] * dt[bn] - react * N[a] * N[bn]) * jw;
            Ke[a][bn] += v;
          }
          be[a] += (pml ? Complex(1.0) : wphys) * (-fv) * N[a] * jw;
        }
      }

      for (int a = 0; a < 4; ++a) {
        auto [row, rphase] = fold(corner_iy[a], corner_it[a]);
        if (row < 0) continue;  // Dirichlet test functions are not in the space
        const Complex rp = std::conj(rphase);
        b0[row] += rp * be[a];
        for (int bn = 0; bn < 4; ++bn) {
          auto [col, cphase] = fold(corner_iy[bn], corner_it[bn]);
          if (col >= 0) {
            trip.emplace_back(row, col, rp * Ke[a][bn] * cphase);
          } else if (corner_it[bn] == Nt) {
            // coupling to top-row data, folded the same way in y
            const int gcol = (corner_iy[bn] == Ny) ? 0 : corner_iy[bn];
            const Complex gphase = (corner_iy[bn] == Ny) ? dofmap.bloch : Complex(1.0);
            trip_top.emplace_back(row, gcol, rp * Ke[a][bn] * gphase);
          }
          // bottom row carries homogeneous data; nothing to lift
        }
      }
    }
  }

  AssembledSystem s;
  s.n_free = dofmap.n_free;
  s.A.resize(dofmap.n_free, dofmap.n_free);
  s.A.setFromTriplets(trip.begin(), trip.end());
  s.A.makeCompressed();
  s.A_top.resize(dofmap.n_free, Ny);
  s.A_top.setFromTriplets(trip_top.begin(), trip_top.end());
  s.A_top.makeCompressed();
  s.b0 = b0;
  s.b = b0;
  s.g_top = VectorC::Zero(Ny);
  return s;
}

AssembledSystem apply_dirichlet(const AssembledSystem& system, const DofMap& dofmap,
                                const VectorC& G) {
  (void)dofmap;
  if (G.size() != system.A_top.cols())
    throw ValidationError("size mismatch: top boundary data needs " +
                          std::to_string(system.A_top.cols()) + " values, got " +
                          std::to_string(G.size()));
  AssembledSystem out = system;
  out.g_top = G;
  out.b = system.b0 - system.A_top * G;
  return out;
}

void dump_matrix(const AssembledSystem& system, std::ostream& os) {
  for (int k = 0; k < system.A.outerSize(); ++k)
    for (SparseC::InnerIterator it(system.A, k); it; ++it)
      os << it.row() << " " << it.col() << " " << it.value().real() << " " << it.value().imag()
         << "\n";
}

}  // namespace qpml::fem
