#include "rmc/solver_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "rmc/errors.hpp"

namespace rmc::io {

std::string report_json(const SolverReport& report, const SolverConfig& config) {
  nlohmann::ordered_json j;
  j["termination"] = std::string(to_string(report.termination));
  j["converged"] = report.converged();
  j["stages"] = report.stages;
  j["inner_iterations"] = report.inner_iterations;
  j["stalls"] = report.stalls;
  j["svd_fallbacks"] = report.svd_fallbacks;
  j["final_zeta"] = report.final_zeta;
  j["final_residual_sigma"] = report.final_residual_sigma;

  auto& c = j["config"];
  c["variant"] = std::string(to_string(config.variant));
  c["split_mode"] = std::string(to_string(config.split_mode));
  c["epsilon"] = config.epsilon;
  c["target_rank"] = config.target_rank;
  c["mu"] = config.mu;
  c["eta"] = report.eta;
  c["sigma"] = report.sigma;
  c["inner_iters"] = report.inner_iters;
  c["max_stages"] = report.max_stages;
  c["step_scale"] = config.step_scale;
  c["threshold_decay"] = config.threshold_decay;
  c["track_contraction"] = config.track_contraction;
  if (config.adaptive_lambda) c["adaptive_lambda"] = *config.adaptive_lambda;
  c["seed"] = config.seed;

  auto& its = j["iterations"];
  its = nlohmann::ordered_json::array();
  for (const auto& r : report.iterations) {
    nlohmann::ordered_json row;
    row["stage"] = r.stage;
    row["t"] = r.t;
    row["stage_rank"] = r.stage_rank;
    row["zeta"] = r.zeta;
    row["sigma_k"] = r.sigma_k;
    row["sigma_k1"] = r.sigma_k1;
    row["support"] = r.support;
    row["step_change"] = r.step_change;
    its.push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

void write_report(const std::filesystem::path& path, const SolverReport& report,
                  const SolverConfig& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << report_json(report, config);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace rmc::io
