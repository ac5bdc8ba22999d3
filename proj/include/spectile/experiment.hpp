#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectile/density.hpp"
#include "spectile/geometry.hpp"
#include "spectile/positivity.hpp"
#include "spectile/solver.hpp"
#include "spectile/spectral_target.hpp"

namespace spectile {

struct TilingSettings {
  double lo = -50.0;
  double hi = 50.0;
  std::size_t count = 512;
  double tol = 1e-5;
  double table_step = 1.0 / 16;
  int necessity_points = 1024;   // probes of |f-hat| on supp S
  double necessity_tol = 1e-6;
  double level_zero_tol = 1e-6;
};

struct ProbeSettings {
  int test_count = 10;
  std::uint64_t seed = 0x5EED;
  double tol = 1e-5;
  int poisson_count = 20;
  double poisson_tol = 1e-9;
  double convolution_half_range = 400.0;
  double convolution_step = 0.5;
};

/// Experiment description: every field has an embedded default, and the
/// effective JSON (defaults merged with the user file and CLI overrides) is
/// echoed into the manifest.
class ExperimentConfig {
 public:
  /// The complete default configuration.
  static nlohmann::json defaults();
  /// Defaults merge-patched with `user`; throws ConfigError on invalid input.
  static ExperimentConfig from_json(const nlohmann::json& user);
  static ExperimentConfig load(const std::filesystem::path& path);

  /// --seed: probe family and contraction-probe seeds.
  void override_seed(std::uint64_t seed);
  /// --tol: tiling and window-probe tolerances.
  void override_tol(double tol);

  const nlohmann::json& to_json() const { return effective_; }
  /// FNV-1a 64 of the canonical effective JSON, as 16 hex digits.
  std::string hash() const;

  Geometry geometry;
  SolverConfig solver;
  TilingSettings tiling;
  ProbeSettings probes;
  PositivityOptions positivity;
  double positivity_w = 1.0;
  std::string out_dir;

  /// Named target ("sigma", "psi", "phi", "addendumPsi", ...).
  SpectralTarget target(const std::string& name, const QuadratureGrid& grid) const;
  const nlohmann::json& target_spec(const std::string& name) const;
  /// Named density spec ("pair", "levelZero", "unitMass", "convolutionH").
  const nlohmann::json& density_spec(const std::string& name) const;
  /// Density from a {terms, mirror} spec; `mirror` adds conj p(-t).
  DensityFunction density(const std::string& name,
                          std::shared_ptr<const QuadratureGrid> grid) const;
  /// Window from probes.convolutionBeta.
  Profile convolution_beta() const;

 private:
  void parse();
  nlohmann::json effective_;
};

/// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(const std::string& bytes);

/// JSON description of a window spectrum, enough to rebuild it from a config.
/// `symmetrized`: the S-part is r (S + S~) of a one-sided target (calibrated
/// build); otherwise it is the named target itself.
nlohmann::json window_spectrum_json(const WindowSpectrum& w, const std::string& target_name,
                                    bool symmetrized = true);
WindowSpectrum window_spectrum_from_json(const nlohmann::json& j, const ExperimentConfig& cfg,
                                         const QuadratureGrid& grid);

struct StageRecord {
  std::string status;        // passed / failed / inconclusive / error
  int exit_code = 0;
  double seconds = 0.0;
  std::vector<std::string> files;
  nlohmann::json summary = nlohmann::json::object();
};

/// Per-run bookkeeping, merged across subcommands writing to one directory.
class RunManifest {
 public:
  RunManifest() = default;
  explicit RunManifest(const ExperimentConfig& cfg);

  /// Existing manifest in `dir` if it was written for the same config hash,
  /// otherwise a fresh one.
  static RunManifest load_or_create(const std::filesystem::path& dir, const ExperimentConfig& cfg);
  static RunManifest load(const std::filesystem::path& file);

  void record(const std::string& stage, StageRecord rec);
  void save(const std::filesystem::path& dir) const;
  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);

  const std::string& config_hash() const { return config_hash_; }
  const nlohmann::json& config() const { return config_; }
  const std::map<std::string, StageRecord>& stages() const { return stages_; }
  /// Union of all stage files, sorted.
  std::vector<std::string> files() const;

  static constexpr const char* kFileName = "manifest.json";

 private:
  std::string config_hash_;
  nlohmann::json config_;
  nlohmann::json versions_;
  std::map<std::string, StageRecord> stages_;
};

/// Library and toolchain versions recorded in manifests.
nlohmann::json version_info();

}  // namespace spectile
