#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "spectile/experiment.hpp"

namespace spectile {

struct CommandOptions {
  std::filesystem::path out = "spectile_out";
  /// tile / probe: lattice CSV (default <out>/lattice.csv).
  std::optional<std::filesystem::path> lattice;
  /// tile / probe: window-spectrum JSON (default <out>/window_spectrum.json).
  std::optional<std::filesystem::path> window;
  /// tile: "pair" (f and g) or a named density.
  std::string density = "pair";
  /// positivity: level w (default from the config).
  std::optional<double> w;
  /// report: manifest file (default <out>/manifest.json).
  std::optional<std::filesystem::path> manifest;
};

/// Every command returns 0 when all its checks pass, 3 when a numeric check
/// fails and 4 when a result is inconclusive; configuration and contract
/// errors are thrown as spectile::Error after the stage is recorded.
int cmd_solve(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_tile(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_addendum(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_positivity(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_probe(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log);
/// Reads a manifest and writes report.txt and report.json next to it.
int cmd_report(const CommandOptions& opt, std::ostream& log);

/// solve, tile, addendum, positivity, probe and report in sequence; returns
/// the first nonzero stage code (stages after a failure still run).
int run_pipeline(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log);

/// Stage names in pipeline order.
const std::vector<std::string>& pipeline_stages();

}  // namespace spectile
