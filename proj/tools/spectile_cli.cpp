// Command-line driver: config-driven runs of the lattice, tiling, positivity
// and probe stages. Exit codes: 0 ok, 2 config error, 3 numeric failure,
// 4 inconclusive.
#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "spectile/commands.hpp"
#include "spectile/errors.hpp"

namespace {

struct GlobalFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

spectile::ExperimentConfig load_config(const GlobalFlags& g) {
  auto cfg = g.config.empty() ? spectile::ExperimentConfig::from_json(nlohmann::json::object())
                              : spectile::ExperimentConfig::load(g.config);
  if (g.seed) cfg.override_seed(*g.seed);
  if (g.tol) {
    if (!(*g.tol > 0.0)) throw spectile::ConfigError("--tol must be positive");
    cfg.override_tol(*g.tol);
  }
  return cfg;
}

void add_global_flags(CLI::App* app, GlobalFlags& g) {
  app->add_option("--config", g.config, "experiment config JSON")->check(CLI::ExistingFile);
  app->add_option("--out", g.out, "output directory (default: outputs.directory)");
  app->add_option("--seed", g.seed, "seed override for probe families and contraction probes");
  app->add_option("--tol", g.tol, "tolerance override for tiling and window probes");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectile: perturbed-lattice spectra, tilings and probes"};
  app.require_subcommand(1);
  GlobalFlags g;
  add_global_flags(&app, g);

  spectile::CommandOptions opt;
  std::string lattice, window, manifest;
  double w = 0.0;

  auto* solve = app.add_subcommand("solve", "build the lattice with the prescribed window spectrum");
  auto* tile = app.add_subcommand("tile", "translate sums of a density over a lattice");
  tile->add_option("--lattice", lattice, "lattice CSV (default <out>/lattice.csv)");
  tile->add_option("--window", window, "window-spectrum JSON (default <out>/window_spectrum.json)");
  tile->add_option("--density", opt.density, "'pair' or a named density")->capture_default_str();
  auto* addendum = app.add_subcommand("addendum", "level-zero lattice and its three checks");
  auto* positivity = app.add_subcommand("positivity", "positive tiling/non-tiling pair");
  auto* w_opt = positivity->add_option("--w", w, "tiling level (default from config)");
  auto* probe = app.add_subcommand("probe", "Poisson, window, convolution and bound probes");
  probe->add_option("--lattice", lattice, "lattice CSV (default <out>/lattice.csv)");
  probe->add_option("--window", window, "window-spectrum JSON (default <out>/window_spectrum.json)");
  auto* report = app.add_subcommand("report", "summary and plot index from a manifest");
  report->add_option("--manifest", manifest, "manifest JSON (default <out>/manifest.json)");
  auto* run = app.add_subcommand("run", "all stages followed by the report");
  for (auto* sub : {solve, tile, addendum, positivity, probe, report, run}) {
    add_global_flags(sub, g);
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*report && g.config.empty()) {
      opt.out = g.out.empty() ? "spectile_out" : g.out;
      if (!manifest.empty()) opt.manifest = manifest;
      return spectile::cmd_report(opt, std::cout);
    }
    const auto cfg = load_config(g);
    opt.out = g.out.empty() ? cfg.out_dir : g.out;
    if (!lattice.empty()) opt.lattice = lattice;
    if (!window.empty()) opt.window = window;
    if (!manifest.empty()) opt.manifest = manifest;
    if (*w_opt) opt.w = w;

    if (*solve) return spectile::cmd_solve(cfg, opt, std::cout);
    if (*tile) return spectile::cmd_tile(cfg, opt, std::cout);
    if (*addendum) return spectile::cmd_addendum(cfg, opt, std::cout);
    if (*positivity) return spectile::cmd_positivity(cfg, opt, std::cout);
    if (*probe) return spectile::cmd_probe(cfg, opt, std::cout);
    if (*report) return spectile::cmd_report(opt, std::cout);
    if (*run) return spectile::run_pipeline(cfg, opt, std::cout);
  } catch (const spectile::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return spectile::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
