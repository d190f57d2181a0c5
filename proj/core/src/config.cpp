#include "qpml/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qpml::harness {

using nlohmann::json;

bool ProblemConfig::has_oracle() const {
  return geometry.flat() && potential.t_only() && source.all_compact();
}

std::vector<std::string> ProblemConfig::validate() const {
  std::vector<std::string> warnings;
  modes::validate_parameters(k, alpha, n_window);
  if (!(phi > 0.0 && phi < M_PI / 2.0)) throw ValidationError("phi must lie in (0, pi/2)");
  geometry.validate();
  potential.validate();
  source.validate();
  if (potential.kind != model::PotentialKind::zero && phi > potential.cone_angle)
    throw ValidationError("phi exceeds the potential cone angle");
  if (geometry.T < potential.cone_onset)
    throw ValidationError("T must not precede the potential analyticity onset");
  if (source.max_support() >= geometry.T)
    throw ValidationError("compact source support must lie below the interface T");
  for (double R : experiment.R_values)
    if (!(R > geometry.T)) throw ValidationError("every swept R must exceed T");
  for (double p : experiment.phi_values)
    if (!(p > 0.0 && p < M_PI / 2.0)) throw ValidationError("swept phi outside (0, pi/2)");

  // admissibility of the built-in families
  model::check_source_admissibility(source, geometry.T, phi, source.tau);
  const auto q_rep = model::check_potential_admissibility(potential, geometry.T, phi);
  if (!q_rep.pass) throw ValidationError("potential admissibility check failed: " + q_rep.note);

  // resolution: at least 8 nodes per wavelength of the fastest propagating mode
  const double h_y = 2.0 * M_PI / mesh.Ny;
  const double h_t = std::max((geometry.T - geometry.profile.max_value()) / mesh.Nt_phys,
                              (geometry.R - geometry.T) / mesh.Nt_pml);
  const double wavelength = 2.0 * M_PI / std::abs(k);
  if (wavelength / std::max(h_y, h_t) < 8.0)
    throw ValidationError("mesh resolves fewer than 8 nodes per wavelength");

  const double qT = std::abs(model::potential_eval(potential, 0.0, geometry.T));
  if (qT > 0.1 * k * k)
    warnings.push_back("potential at the interface is " + std::to_string(qT / (k * k)) +
                       " of k^2; the scaling interface may sit too low");
  return warnings;
}

namespace {

model::TrigPoly trig_from_json(const json& j) {
  model::TrigPoly p;
  p.c0 = j.value("c0", 0.0);
  if (j.contains("cos")) p.cos_coeffs = j.at("cos").get<std::vector<double>>();
  if (j.contains("sin")) p.sin_coeffs = j.at("sin").get<std::vector<double>>();
  return p;
}

json trig_to_json(const model::TrigPoly& p) {
  return json{{"c0", p.c0}, {"cos", p.cos_coeffs}, {"sin", p.sin_coeffs}};
}

model::PotentialKind potential_kind(const std::string& s) {
  if (s == "zero") return model::PotentialKind::zero;
  if (s == "compact_bump") return model::PotentialKind::compact_bump;
  if (s == "power_decay") return model::PotentialKind::power_decay;
  if (s == "log_decay") return model::PotentialKind::log_decay;
  throw ValidationError("unknown potential kind '" + s + "'");
}

std::string potential_kind_name(model::PotentialKind k) {
  switch (k) {
    case model::PotentialKind::zero: return "zero";
    case model::PotentialKind::compact_bump: return "compact_bump";
    case model::PotentialKind::power_decay: return "power_decay";
    case model::PotentialKind::log_decay: return "log_decay";
  }
  return "zero";
}

}  // namespace

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("malformed config '" + path + "': " + e.what());
  }

  ProblemConfig cfg;
  try {
    cfg.k = j.at("k").get<double>();
    cfg.alpha = j.value("alpha", 0.0);
    cfg.phi = j.at("phi").get<double>();
    cfg.n_window = j.value("n_window", 8);

    const auto& jg = j.at("geometry");
    cfg.geometry.T = jg.at("T").get<double>();
    cfg.geometry.R = jg.at("R").get<double>();
    if (jg.contains("profile")) cfg.geometry.profile = trig_from_json(jg.at("profile"));

    if (j.contains("potential")) {
      const auto& jq = j.at("potential");
      cfg.potential.kind = potential_kind(jq.value("kind", "zero"));
      cfg.potential.amplitude = jq.value("amplitude", 0.0);
      cfg.potential.exponent = jq.value("exponent", -1.0);
      cfg.potential.offset = jq.value("offset", 1.0);
      cfg.potential.t0 = jq.value("t0", 0.0);
      cfg.potential.t1 = jq.value("t1", 0.0);
      cfg.potential.cone_onset = jq.value("cone_onset", 0.0);
      cfg.potential.cone_angle = jq.value("cone_angle", 1.4);
      if (jq.contains("y_factor")) cfg.potential.y_factor = trig_from_json(jq.at("y_factor"));
    }

    const auto& js = j.at("source");
    cfg.source.tau = js.value("tau", 1.0);
    for (const auto& jc : js.at("components")) {
      model::SourceComponent c;
      c.n = jc.at("n").get<int>();
      const std::string prof = jc.at("profile").get<std::string>();
      c.amplitude = jc.value("amplitude", 1.0);
      if (prof == "compact_bump") {
        c.profile = model::SourceProfile::compact_bump;
        c.t0 = jc.at("t0").get<double>();
        c.t1 = jc.at("t1").get<double>();
      } else if (prof == "exp_decay") {
        c.profile = model::SourceProfile::exp_decay;
        c.rate = jc.at("rate").get<double>();
        c.onset = jc.value("onset", 0.0);
      } else {
        throw ValidationError("unknown source profile '" + prof + "'");
      }
      cfg.source.components.push_back(c);
    }

    if (j.contains("mesh")) {
      cfg.mesh.Ny = j.at("mesh").value("Ny", 32);
      cfg.mesh.Nt_phys = j.at("mesh").value("Nt_phys", 10);
      cfg.mesh.Nt_pml = j.at("mesh").value("Nt_pml", 25);
    }
    if (j.contains("experiment")) {
      const auto& je = j.at("experiment");
      if (je.contains("R_values")) cfg.experiment.R_values = je.at("R_values").get<std::vector<double>>();
      if (je.contains("phi_values"))
        cfg.experiment.phi_values = je.at("phi_values").get<std::vector<double>>();
      cfg.experiment.h_levels = je.value("h_levels", 3);
      cfg.experiment.workers = je.value("workers", 0);
    }
    if (j.contains("output")) {
      cfg.output.dir = j.at("output").value("dir", "out");
      cfg.output.format = j.at("output").value("format", "csv");
    }
  } catch (const json::exception& e) {
    throw ValidationError("config '" + path + "': " + e.what());
  }
  return cfg;
}

std::string to_json_string(const ProblemConfig& cfg) {
  json j;
  j["k"] = cfg.k;
  j["alpha"] = cfg.alpha;
  j["phi"] = cfg.phi;
  j["n_window"] = cfg.n_window;
  j["geometry"] = {{"T", cfg.geometry.T},
                   {"R", cfg.geometry.R},
                   {"profile", trig_to_json(cfg.geometry.profile)}};
  j["potential"] = {{"kind", potential_kind_name(cfg.potential.kind)},
                    {"amplitude", cfg.potential.amplitude},
                    {"exponent", cfg.potential.exponent},
                    {"offset", cfg.potential.offset},
                    {"t0", cfg.potential.t0},
                    {"t1", cfg.potential.t1},
                    {"cone_onset", cfg.potential.cone_onset},
                    {"cone_angle", cfg.potential.cone_angle},
                    {"y_factor", trig_to_json(cfg.potential.y_factor)}};
  json comps = json::array();
  for (const auto& c : cfg.source.components) {
    json jc;
    jc["n"] = c.n;
    jc["amplitude"] = c.amplitude;
    if (c.profile == model::SourceProfile::compact_bump) {
      jc["profile"] = "compact_bump";
      jc["t0"] = c.t0;
      jc["t1"] = c.t1;
    } else {
      jc["profile"] = "exp_decay";
      jc["rate"] = c.rate;
      jc["onset"] = c.onset;
    }
    comps.push_back(jc);
  }
  j["source"] = {{"tau", cfg.source.tau}, {"components", comps}};
  j["mesh"] = {{"Ny", cfg.mesh.Ny}, {"Nt_phys", cfg.mesh.Nt_phys}, {"Nt_pml", cfg.mesh.Nt_pml}};
  j["experiment"] = {{"R_values", cfg.experiment.R_values},
                     {"phi_values", cfg.experiment.phi_values},
                     {"h_levels", cfg.experiment.h_levels},
                     {"workers", cfg.experiment.workers}};
  j["output"] = {{"dir", cfg.output.dir}, {"format", cfg.output.format}};
  return j.dump(2) + "\n";
}

ProblemConfig canonical_config() {
  ProblemConfig cfg;
  cfg.k = 1.5;
  cfg.alpha = 0.0;
  cfg.phi = 0.25 * M_PI;
  cfg.geometry.T = 2.0;
  cfg.geometry.R = 7.0;
  cfg.source.tau = 1.0;
  model::SourceComponent c;
  c.n = 0;
  c.profile = model::SourceProfile::compact_bump;
  c.t0 = 0.5;
  c.t1 = 1.5;
  c.amplitude = 1.0;
  cfg.source.components = {c};
  cfg.mesh.Ny = 32;
  cfg.mesh.Nt_phys = 10;  // h_t = 0.2 ~ h_y = 2 pi / 32
  cfg.mesh.Nt_pml = 25;
  cfg.experiment.R_values = {3, 4, 5, 6, 7};
  cfg.experiment.phi_values = {M_PI / 6.0, M_PI / 4.0, M_PI / 3.0};
  return cfg;
}

namespace {

ProblemConfig slow_decay_base() {
  ProblemConfig cfg;
  cfg.k = 0.5;
  cfg.alpha = 0.0;
  cfg.phi = 0.25 * M_PI;
  cfg.geometry.T = 2.0;
  cfg.geometry.R = 8.0;
  cfg.source.tau = 1.0;
  model::SourceComponent c;
  c.n = 0;
  c.profile = model::SourceProfile::compact_bump;
  c.t0 = 0.5;
  c.t1 = 1.5;
  c.amplitude = 1.0;
  cfg.source.components = {c};
  cfg.mesh.Ny = 64;  // h = 0.1: keeps several sweep rows above the h^2 floor
  cfg.mesh.Nt_phys = 20;
  cfg.mesh.Nt_pml = 60;
  cfg.experiment.R_values = {4, 5, 6, 7, 8};
  cfg.experiment.phi_values = {M_PI / 6.0, M_PI / 4.0, M_PI / 3.0};
  return cfg;
}

}  // namespace

ProblemConfig power_decay_config() {
  ProblemConfig cfg = slow_decay_base();
  cfg.potential.kind = model::PotentialKind::power_decay;
  cfg.potential.amplitude = -0.06;
  cfg.potential.exponent = -1.0;
  cfg.potential.offset = 1.0;
  cfg.potential.cone_angle = 1.4;
  return cfg;
}

ProblemConfig log_decay_config() {
  ProblemConfig cfg = slow_decay_base();
  cfg.potential.kind = model::PotentialKind::log_decay;
  cfg.potential.amplitude = -0.038;
  cfg.potential.cone_angle = 1.4;
  return cfg;
}

}  // namespace qpml::harness
