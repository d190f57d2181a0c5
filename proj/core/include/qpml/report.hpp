#pragma once

#include <string>

#include "qpml/experiments.hpp"
#include "qpml/radiation.hpp"

namespace qpml::harness {

/// Deterministic shortest-roundtrip float formatting shared by all writers.
std::string fmt(double v);

std::string to_csv(const ConvergenceReport& rep);
std::string to_csv(const PhiSweepReport& rep);
std::string to_csv(const HSweepReport& rep);
std::string to_csv(const StabilityReport& rep);
std::string to_csv(const radiation::LaplaceProbeResult& probe);
std::string field_csv(const solver::Field& field);

std::string to_json(const ConvergenceReport& rep, const ProblemConfig& cfg);
std::string to_json(const PhiSweepReport& rep, const ProblemConfig& cfg);
std::string to_json(const HSweepReport& rep, const ProblemConfig& cfg);
std::string to_json(const StabilityReport& rep, const ProblemConfig& cfg);
std::string to_json(const RunSummary& s, const ProblemConfig& cfg);

/// Log-linear polyline plot (errors vs R) as a standalone SVG document.
std::string to_svg(const ConvergenceReport& rep);

void write_text(const std::string& path, const std::string& content);

}  // namespace qpml::harness
