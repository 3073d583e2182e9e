#pragma once

#include <filesystem>
#include <string>

#include "rmc/solver.hpp"

namespace rmc::io {

/// Report as a JSON document (per-iteration records plus summary fields).
std::string report_json(const SolverReport& report, const SolverConfig& config);

void write_report(const std::filesystem::path& path, const SolverReport& report,
                  const SolverConfig& config);

}  // namespace rmc::io
