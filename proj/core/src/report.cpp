#include "qpml/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qpml::harness {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string to_csv(const ConvergenceReport& rep) {
  std::ostringstream os;
  os << "R,error_h1_ET,norm_h1,seconds\n";
  for (const auto& r : rep.rows)
    os << fmt(r.R) << "," << fmt(r.err) << "," << fmt(r.norm_h1) << "," << fmt(r.seconds) << "\n";
  return os.str();
}

std::string to_csv(const PhiSweepReport& rep) {
  std::ostringstream os;
  os << "phi_i,phi_j,diff_h1_ET\n";
  for (const auto& p : rep.pairs)
    os << fmt(p.phi_i) << "," << fmt(p.phi_j) << "," << fmt(p.diff_h1) << "\n";
  return os.str();
}

std::string to_csv(const HSweepReport& rep) {
  std::ostringstream os;
  os << "level,h_t,err_l2,err_h1,order_l2,order_h1\n";
  for (const auto& r : rep.rows) {
    os << r.level << "," << fmt(r.h_t) << "," << fmt(r.err_l2) << "," << fmt(r.err_h1) << ",";
    if (std::isnan(r.order_l2))
      os << ",";
    else
      os << fmt(r.order_l2) << "," << fmt(r.order_h1);
    os << "\n";
  }
  return os.str();
}

std::string to_csv(const StabilityReport& rep) {
  std::ostringstream os;
  os << "R,norm_h1_ER,seconds\n";
  for (const auto& r : rep.rows)
    os << fmt(r.R) << "," << fmt(r.norm_h1_ER) << "," << fmt(r.seconds) << "\n";
  return os.str();
}

std::string to_csv(const radiation::LaplaceProbeResult& probe) {
  std::ostringstream os;
  os << "lambda_re,lambda_im,uhat_re,uhat_im,flag\n";
  for (const auto& s : probe.samples)
    os << fmt(s.lambda.real()) << "," << fmt(s.lambda.imag()) << "," << fmt(s.value.real()) << ","
       << fmt(s.value.imag()) << "," << s.flag << "\n";
  return os.str();
}

std::string field_csv(const solver::Field& field) {
  std::ostringstream os;
  os << "y,t,re,im\n";
  const auto& m = *field.mesh;
  for (int it = 0; it <= m.Nt(); ++it)
    for (int iy = 0; iy <= m.Ny; ++iy) {
      const auto v = field.at(iy, it);
      os << fmt(m.y(iy)) << "," << fmt(m.t(iy, it)) << "," << fmt(v.real()) << ","
         << fmt(v.imag()) << "\n";
    }
  return os.str();
}

namespace {

json params_json(const ProblemConfig& cfg) {
  return json{{"k", cfg.k},         {"alpha", cfg.alpha}, {"phi", cfg.phi},
              {"T", cfg.geometry.T}, {"R", cfg.geometry.R}, {"Ny", cfg.mesh.Ny},
              {"Nt_phys", cfg.mesh.Nt_phys}, {"Nt_pml", cfg.mesh.Nt_pml},
              {"tau", cfg.source.tau}};
}

}  // namespace

std::string to_json(const ConvergenceReport& rep, const ProblemConfig& cfg) {
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"R", r.R},
                    {"error_h1_ET", r.err},
                    {"err_oracle", r.err_oracle},
                    {"err_trunc", r.err_trunc},
                    {"norm_h1", r.norm_h1},
                    {"seconds", r.seconds},
                    {"used_in_fit", r.used_in_fit}});
  json j{{"experiment", "sweep_r"},
         {"params", params_json(cfg)},
         {"rows", rows},
         {"slope", rep.slope},
         {"gamma_max", rep.gamma_max},
         {"floor_h", rep.floor_h},
         {"R_ref", rep.R_ref},
         {"fit_basis", rep.fit_basis},
         {"reference", rep.reference},
         {"monotone", rep.monotone},
         {"slope_safety_factor", 0.9},
         {"verdict", rep.verdict}};
  return j.dump(2) + "\n";
}

std::string to_json(const PhiSweepReport& rep, const ProblemConfig& cfg) {
  json pairs = json::array();
  for (const auto& p : rep.pairs)
    pairs.push_back({{"phi_i", p.phi_i}, {"phi_j", p.phi_j}, {"diff_h1_ET", p.diff_h1}});
  json j{{"experiment", "sweep_phi"}, {"params", params_json(cfg)},
         {"rows", pairs},             {"max_diff", rep.max_diff},
         {"threshold", rep.threshold}, {"oracle_error", rep.oracle_error},
         {"verdict", rep.verdict}};
  return j.dump(2) + "\n";
}

std::string to_json(const HSweepReport& rep, const ProblemConfig& cfg) {
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json jr{{"level", r.level}, {"h_t", r.h_t}, {"err_l2", r.err_l2}, {"err_h1", r.err_h1}};
    if (!std::isnan(r.order_l2)) {
      jr["order_l2"] = r.order_l2;
      jr["order_h1"] = r.order_h1;
    }
    rows.push_back(jr);
  }
  json j{{"experiment", "sweep_h"},
         {"params", params_json(cfg)},
         {"rows", rows},
         {"verdict", rep.verdict}};
  return j.dump(2) + "\n";
}

std::string to_json(const StabilityReport& rep, const ProblemConfig& cfg) {
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"R", r.R}, {"norm_h1_ER", r.norm_h1_ER}, {"seconds", r.seconds}});
  json j{{"experiment", "stability"},
         {"params", params_json(cfg)},
         {"rows", rows},
         {"variation_beyond_smallest_R", rep.variation},
         {"verdict", rep.verdict}};
  return j.dump(2) + "\n";
}

std::string to_json(const RunSummary& s, const ProblemConfig& cfg) {
  json coeffs = json::object();
  for (const auto& [n, c] : s.outgoing_coeffs)
    coeffs[std::to_string(n)] = {c.real(), c.imag()};
  json j{{"experiment", "solve"},
         {"params", params_json(cfg)},
         {"norm_h1_ET", s.norm_h1_ET},
         {"norm_h1_ER", s.norm_h1_ER},
         {"norm_l2_ET", s.norm_l2_ET},
         {"residual", s.residual},
         {"outgoing_residual", s.outgoing_residual},
         {"outgoing_coeffs", coeffs},
         {"err_oracle", s.err_oracle},
         {"seconds", s.seconds}};
  return j.dump(2) + "\n";
}

std::string to_svg(const ConvergenceReport& rep) {
  const int W = 480, H = 320, pad = 48;
  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  for (const auto& r : rep.rows) {
    if (r.err <= 0.0) continue;
    xlo = std::min(xlo, r.R);
    xhi = std::max(xhi, r.R);
    ylo = std::min(ylo, std::log10(r.err));
    yhi = std::max(yhi, std::log10(r.err));
  }
  if (xhi <= xlo) xhi = xlo + 1;
  if (yhi <= ylo) yhi = ylo + 1;
  auto px = [&](double R) { return pad + (R - xlo) / (xhi - xlo) * (W - 2 * pad); };
  auto py = [&](double e) { return H - pad - (std::log10(e) - ylo) / (yhi - ylo) * (H - 2 * pad); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"16\" text-anchor=\"middle\" font-size=\"12\">"
     << "H1(E^T) error vs R (log scale), slope " << fmt(rep.slope) << ", " << rep.verdict
     << "</text>\n";
  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (const auto& r : rep.rows)
    if (r.err > 0.0) os << fmt(px(r.R)) << "," << fmt(py(r.err)) << " ";
  os << "\"/>\n";
  for (const auto& r : rep.rows)
    if (r.err > 0.0)
      os << "<circle cx=\"" << fmt(px(r.R)) << "\" cy=\"" << fmt(py(r.err))
         << "\" r=\"3\" fill=\"" << (r.used_in_fit ? "crimson" : "gray") << "\"/>\n";
  os << "</svg>\n";
  return os.str();
}

void write_text(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

}  // namespace qpml::harness
