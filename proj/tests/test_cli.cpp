#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spectile/commands.hpp"
#include "spectile/errors.hpp"
#include "spectile/experiment.hpp"

using namespace spectile;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("spectile_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

/// Reduced solver sizes so that a full solve takes a fraction of a second.
json small_user_config() {
  return {{"solver", {{"N", 256}, {"K", 128}, {"gridNodes", 4096}}},
          {"probes", {{"testCount", 4}}}};
}

fs::path write_config(const fs::path& dir, const json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(SPECTILE_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config: defaults, overrides and hash") {
  const auto d = ExperimentConfig::from_json(json::object());
  CHECK(d.tiling.tol == 1e-5);
  CHECK(d.probes.test_count == 10);
  CHECK(d.to_json().at("lattice").at("target") == "sigma");
  auto c = ExperimentConfig::from_json({{"tiling", {{"count", 64}}}});
  CHECK(c.tiling.count == 64);
  CHECK(c.tiling.lo == -50.0);  // untouched defaults survive the merge
  const std::string h = c.hash();
  CHECK(h.size() == 16);
  c.override_seed(7);
  CHECK(c.probes.seed == 7);
  CHECK(c.solver.seed == 7);
  CHECK(c.hash() != h);
  c.override_tol(1e-7);
  CHECK(c.tiling.tol == 1e-7);
  CHECK(c.probes.tol == 1e-7);
  CHECK(ExperimentConfig::from_json(c.to_json()).hash() == c.hash());
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"solver", {{"epsilon", 0.6}}}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"geometry", {{"a", 0.35}}}}), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"tiling", {{"count", "many"}}}}), ConfigError);
}

TEST_CASE("manifest: record, save, reload and hash-gated reuse") {
  const auto dir = scratch("manifest");
  const auto cfg = ExperimentConfig::from_json(json::object());
  RunManifest m(cfg);
  m.record("solve", StageRecord{"ok", 0, 1.5, {"b.csv", "a.csv"}, {{"x", 1}}});
  m.save(dir);
  const auto back = RunManifest::load(dir / RunManifest::kFileName);
  CHECK(back.config_hash() == cfg.hash());
  REQUIRE(back.stages().count("solve") == 1);
  CHECK(back.stages().at("solve").files == std::vector<std::string>{"a.csv", "b.csv"});
  CHECK(back.files() == std::vector<std::string>{"a.csv", "b.csv"});
  CHECK(RunManifest::load_or_create(dir, cfg).stages().size() == 1);
  auto other = cfg;
  other.override_seed(123);
  CHECK(RunManifest::load_or_create(dir, other).stages().empty());
  CHECK_THROWS_AS(RunManifest::load(dir / "missing.json"), ConfigError);
}

TEST_CASE("report: missing manifest is a configuration error; absent stages warn") {
  const auto dir = scratch("report");
  CommandOptions opt;
  opt.out = dir;
  std::ostringstream log;
  CHECK_THROWS_AS(cmd_report(opt, log), ConfigError);
  RunManifest m(ExperimentConfig::from_json(json::object()));
  m.record("solve", StageRecord{"ok", 0, 0.1, {"lattice.csv"}, {}});
  m.save(dir);
  CHECK(cmd_report(opt, log) == 0);
  CHECK(log.str().find("warning: stage 'tile' is absent") != std::string::npos);
  CHECK(fs::exists(dir / "report.txt"));
  CHECK(fs::exists(dir / "report.json"));
}

TEST_CASE("cli: usage errors map to exit code 2") {
  const auto dir = scratch("usage");
  const auto log = dir / "log.txt";
  CHECK(run_cli("--help", log) == 0);
  CHECK(run_cli("", log) == 2);
  CHECK(run_cli("solve --no-such-flag", log) == 2);
  CHECK(run_cli("solve --config " + (dir / "missing.json").string(), log) == 2);
  const auto bad = write_config(dir, {{"solver", {{"epsilon", 0.6}}}});
  CHECK(run_cli("solve --config " + bad.string() + " --out " + (dir / "o").string(), log) == 2);
  CHECK(slurp(log).find("error") != std::string::npos);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(run_cli("solve --config " + (dir / "broken.json").string(), log) == 2);
  CHECK(run_cli("report --out " + (dir / "nowhere").string(), log) == 2);
}

TEST_CASE("cli: solve writes its artifacts; a corrupted lattice fails the probes") {
  const auto dir = scratch("solve");
  const auto cfg = write_config(dir, small_user_config());
  const auto out = dir / "out";
  const auto log = dir / "log.txt";
  REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + out.string(), log) == 0);
  for (const char* f : {"lattice.csv", "solve_diagnostics.json", "window_spectrum.json",
                        "target_spectrum.csv", "lattice_alpha.dat", "manifest.json"})
    CHECK(fs::exists(out / f));
  CHECK(slurp(out / "lattice.csv").rfind("n,alpha_n,lambda_n\n", 0) == 0);
  CHECK(slurp(out / "target_spectrum.csv").rfind("k,re,im\n", 0) == 0);
  const auto diag = json::parse(slurp(out / "solve_diagnostics.json"));
  CHECK(diag.at("finalResidual").get<double>() <= 1e-10);

  // Move lambda_3 by 0.3 and rerun the probes on the edited lattice.
  std::istringstream in(slurp(out / "lattice.csv"));
  std::ofstream edited(dir / "corrupt.csv");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("3,", 0) == 0) {
      const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
      const double lam = std::stod(line.substr(c2 + 1)) + 0.3;
      std::ostringstream os;
      os.precision(17);
      os << line.substr(0, c2 + 1) << lam;
      line = os.str();
    }
    edited << line << '\n';
  }
  edited.close();
  CHECK(run_cli("probe --config " + cfg.string() + " --out " + out.string() + " --lattice " +
                    (dir / "corrupt.csv").string(),
                log) == 3);
  const auto report = json::parse(slurp(out / "probe_report.json"));
  CHECK_FALSE(report.at("windowCertificate").get<bool>());
  CHECK_FALSE(report.at("convolution").at("pass").get<bool>());

  CHECK(run_cli("report --out " + out.string(), log) == 0);
  CHECK(slurp(log).find("warning") != std::string::npos);
  const auto rep = json::parse(slurp(out / "report.json"));
  CHECK(rep.dump().find("absent") != std::string::npos);
}

TEST_CASE("cli: zero target yields the integer lattice") {
  const auto dir = scratch("zero");
  auto j = small_user_config();
  j["targets"]["none"] = {{"symmetry", "hermitian_even"}, {"label", "none"}, {"terms", json::array()}};
  j["lattice"] = {{"target", "none"}};
  const auto cfg = write_config(dir, j);
  const auto out = dir / "out";
  REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + out.string(), dir / "log.txt") == 0);
  std::istringstream in(slurp(out / "lattice.csv"));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    CHECK(std::stod(line.substr(c1 + 1)) == 0.0);
    ++rows;
  }
  CHECK(rows == 2 * 256 + 1);
}
