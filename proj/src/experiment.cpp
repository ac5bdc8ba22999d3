#include "spectile/experiment.hpp"

#include <boost/version.hpp>
#include <fftw3.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "spectile/errors.hpp"

namespace spectile {

namespace {

using nlohmann::json;

json bump_json(double lo, double hi, double amplitude = 1.0) {
  json j = {{"mode", "bump"}, {"support", {lo, hi}}};
  if (amplitude != 1.0) j["amplitude"] = amplitude;
  return j;
}

template <class T>
T read(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

const json& section(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_object())
    throw ConfigError(std::string("config section '") + key + "' must be an object");
  return j.at(key);
}

}  // namespace

json ExperimentConfig::defaults() {
  return {
      {"geometry", {{"a", 0.15}, {"b", 0.30}, {"l", 0.40}}},
      {"solver", SolverConfig{}.to_json()},
      {"targets",
       {{"sigma", {{"symmetry", "one_sided"}, {"label", "sigma"}, {"terms", {bump_json(0.20, 0.26)}}}},
        {"psi",
         {{"symmetry", "one_sided"},
          {"label", "psi"},
          {"terms", {bump_json(0.152, 0.196), bump_json(0.264, 0.298)}}}},
        {"phi",
         {{"symmetry", "one_sided"},
          {"label", "phi"},
          {"terms", {bump_json(0.152, 0.196), bump_json(0.264, 0.298), bump_json(0.19, 0.27, 4.0)}}}},
        {"addendumPsi",
         {{"symmetry", "hermitian_even"},
          {"label", "addendum psi"},
          {"terms", {bump_json(-0.15, 0.15)}}}}}},
      {"lattice", {{"target", "sigma"}}},
      {"densities",
       {{"pair",
         {{"w", 1.0},
          {"psi", "psi"},
          {"phi", "phi"},
          {"tau", bump_json(-0.135, 0.135)},
          {"exemption", {{0.19, 0.27}}}}},
        {"levelZero", {{"label", "level-zero"}, {"mirror", true}, {"terms", {bump_json(0.20, 0.26)}}}},
        {"unitMass", {{"label", "unit-mass"}, {"mirror", false}, {"terms", {bump_json(-0.135, 0.135)}}}},
        {"convolutionH", {{"label", "h"}, {"mirror", false}, {"terms", {bump_json(-0.2, 0.2)}}}}}},
      {"tiling",
       {{"lo", -50.0},
        {"hi", 50.0},
        {"count", 512},
        {"tol", 1e-5},
        {"tableStep", 1.0 / 16},
        {"necessityPoints", 1024},
        {"necessityTol", 1e-6},
        {"levelZeroTol", 1e-6}}},
      {"positivity",
       {{"w", 1.0}, {"nEnv", 128}, {"scanLo", -100.0}, {"scanHi", 100.0}, {"scanStep", 1e-2}}},
      {"probes",
       {{"testCount", 10},
        {"seed", 0x5EED},
        {"tol", 1e-5},
        {"poissonCount", 20},
        {"poissonTol", 1e-9},
        {"convolutionHalfRange", 400.0},
        {"convolutionStep", 0.5},
        {"convolutionBeta", bump_json(-0.1, 0.15)}}},
      {"outputs", {{"directory", "spectile_out"}, {"formats", {"csv", "json", "dat"}}}},
  };
}

ExperimentConfig ExperimentConfig::from_json(const json& user) {
  if (!user.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  c.effective_ = defaults();
  // RFC 7386 merge: objects merge key by key; arrays and scalars are replaced.
  c.effective_.merge_patch(user);
  c.parse();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path.string() + "'");
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

void ExperimentConfig::override_seed(std::uint64_t seed) {
  effective_["probes"]["seed"] = seed;
  effective_["solver"]["seed"] = seed;
  parse();
}

void ExperimentConfig::override_tol(double tol) {
  effective_["tiling"]["tol"] = tol;
  effective_["probes"]["tol"] = tol;
  parse();
}

void ExperimentConfig::parse() {
  const json& e = effective_;
  const json& geo = section(e, "geometry");
  geometry = Geometry{read<double>(geo, "a", "geometry"), read<double>(geo, "b", "geometry"),
                      read<double>(geo, "l", "geometry")};
  try {
    geometry.validate();
  } catch (const GeometryError& err) {
    throw ConfigError(err.what());
  }
  solver = SolverConfig::from_json(section(e, "solver"));

  const json& t = section(e, "tiling");
  tiling.lo = read<double>(t, "lo", "tiling");
  tiling.hi = read<double>(t, "hi", "tiling");
  tiling.count = read<std::size_t>(t, "count", "tiling");
  tiling.tol = read<double>(t, "tol", "tiling");
  tiling.table_step = read<double>(t, "tableStep", "tiling");
  tiling.necessity_points = read<int>(t, "necessityPoints", "tiling");
  tiling.necessity_tol = read<double>(t, "necessityTol", "tiling");
  tiling.level_zero_tol = read<double>(t, "levelZeroTol", "tiling");
  if (!(tiling.hi > tiling.lo) || tiling.count < 2) throw ConfigError("tiling grid is empty");
  if (!(tiling.tol > 0 && tiling.necessity_tol > 0 && tiling.level_zero_tol > 0))
    throw ConfigError("tiling tolerances must be positive");
  if (!(tiling.table_step > 0 && tiling.table_step <= 0.25))
    throw ConfigError("tiling.tableStep must lie in (0, 1/4]");
  if (tiling.necessity_points < 2) throw ConfigError("tiling.necessityPoints must be >= 2");

  const json& p = section(e, "probes");
  probes.test_count = read<int>(p, "testCount", "probes");
  probes.seed = read<std::uint64_t>(p, "seed", "probes");
  probes.tol = read<double>(p, "tol", "probes");
  probes.poisson_count = read<int>(p, "poissonCount", "probes");
  probes.poisson_tol = read<double>(p, "poissonTol", "probes");
  probes.convolution_half_range = read<double>(p, "convolutionHalfRange", "probes");
  probes.convolution_step = read<double>(p, "convolutionStep", "probes");
  if (probes.test_count < 1 || probes.poisson_count < 1)
    throw ConfigError("probe counts must be positive");
  if (!(probes.tol > 0 && probes.poisson_tol > 0)) throw ConfigError("probe tolerances must be positive");
  if (!(probes.convolution_half_range > 0 && probes.convolution_step > 0))
    throw ConfigError("convolution grid must be positive");

  const json& pos = section(e, "positivity");
  positivity_w = read<double>(pos, "w", "positivity");
  positivity.n_env = read<int>(pos, "nEnv", "positivity");
  positivity.scan_lo = read<double>(pos, "scanLo", "positivity");
  positivity.scan_hi = read<double>(pos, "scanHi", "positivity");
  positivity.scan_step = read<double>(pos, "scanStep", "positivity");
  if (positivity.n_env < 1) throw ConfigError("positivity.nEnv must be positive");
  if (!(positivity.scan_hi > positivity.scan_lo && positivity.scan_step > 0))
    throw ConfigError("positivity scan range is empty");

  out_dir = read<std::string>(section(e, "outputs"), "directory", "outputs");
  section(e, "targets");
  section(e, "densities");
  section(e, "lattice");
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ExperimentConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(effective_.dump())));
  return buf;
}

const json& ExperimentConfig::target_spec(const std::string& name) const {
  const json& t = effective_.at("targets");
  if (!t.contains(name)) throw ConfigError("unknown target '" + name + "'");
  return t.at(name);
}

SpectralTarget ExperimentConfig::target(const std::string& name, const QuadratureGrid& grid) const {
  return SpectralTarget::from_json(target_spec(name), geometry, grid, solver.max_freq);
}

const json& ExperimentConfig::density_spec(const std::string& name) const {
  const json& d = effective_.at("densities");
  if (!d.contains(name)) throw ConfigError("unknown density '" + name + "'");
  return d.at(name);
}

DensityFunction ExperimentConfig::density(const std::string& name,
                                          std::shared_ptr<const QuadratureGrid> grid) const {
  const json& spec = density_spec(name);
  if (!spec.contains("terms") || !spec.at("terms").is_array())
    throw ConfigError("density '" + name + "' has no terms");
  std::vector<SmoothWindow> terms;
  for (const auto& t : spec.at("terms")) terms.push_back(SmoothWindow::from_json(t, geometry));
  if (terms.empty()) throw ConfigError("density '" + name + "' has no terms");
  const std::string label = spec.value("label", name);
  Profile p = sum_profile(terms, label);
  if (spec.value("mirror", false)) p = combine({{1.0, p}, {1.0, reflected(p)}}, label);
  return make_density(std::move(p), std::move(grid));
}

Profile ExperimentConfig::convolution_beta() const {
  return SmoothWindow::from_json(effective_.at("probes").at("convolutionBeta"), geometry)
      .profile("beta");
}

json window_spectrum_json(const WindowSpectrum& w, const std::string& target_name,
                          bool symmetrized) {
  return {{"kind", w.kind()},
          {"symmetrized", symmetrized},
          {"scale", w.scale()},
          {"target", target_name},
          {"window", {w.window().lo, w.window().hi}}};
}

WindowSpectrum window_spectrum_from_json(const json& j, const ExperimentConfig& cfg,
                                         const QuadratureGrid& grid) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "poisson") return WindowSpectrum::poisson(cfg.geometry);
    const double r = j.at("scale").get<double>();
    const SpectralTarget t = cfg.target(j.at("target").get<std::string>(), grid);
    if (kind == "delta0+S") {
      if (!j.value("symmetrized", true))
        return WindowSpectrum(t.scaled(r).profile(), cfg.geometry.window(), kind, r);
      const SpectralTarget s = build_Tr(t, r);
      return WindowSpectrum(s.profile(), cfg.geometry.window(), kind, r);
    }
    if (kind == "delta0-2piirtpsi") {
      auto base = t.profile();
      return WindowSpectrum(
          Profile{[base, r](double x) { return cplx(0.0, -kTwoPi * r * x) * base(x); },
                  t.support(), "-2 pi i r t psi"},
          cfg.geometry.window(), kind, r);
    }
    throw ConfigError("unknown window spectrum kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed window spectrum JSON: ") + e.what());
  }
}

json version_info() {
  return {{"spectile", "1.0.0"},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"boost", BOOST_LIB_VERSION},
          {"fftw", std::string(fftw_version)},
          {"compiler", __VERSION__},
#ifdef _OPENMP
          {"openmp", _OPENMP},
#endif
          {"cxx", __cplusplus}};
}

RunManifest::RunManifest(const ExperimentConfig& cfg)
    : config_hash_(cfg.hash()), config_(cfg.to_json()), versions_(version_info()) {}

RunManifest RunManifest::load(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot open manifest '" + file.string() + "'");
  try {
    json j;
    is >> j;
    return from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError("manifest '" + file.string() + "' is malformed: " + e.what());
  }
}

RunManifest RunManifest::load_or_create(const std::filesystem::path& dir,
                                        const ExperimentConfig& cfg) {
  const auto file = dir / kFileName;
  if (std::filesystem::exists(file)) {
    try {
      RunManifest m = load(file);
      if (m.config_hash_ == cfg.hash()) return m;
    } catch (const ConfigError&) {
      // Unreadable manifests are replaced.
    }
  }
  return RunManifest(cfg);
}

void RunManifest::record(const std::string& stage, StageRecord rec) {
  std::sort(rec.files.begin(), rec.files.end());
  stages_[stage] = std::move(rec);
}

std::vector<std::string> RunManifest::files() const {
  std::set<std::string> all;
  for (const auto& [name, s] : stages_) all.insert(s.files.begin(), s.files.end());
  return {all.begin(), all.end()};
}

json RunManifest::to_json() const {
  json stages = json::object();
  for (const auto& [name, s] : stages_)
    stages[name] = {{"status", s.status},
                    {"exitCode", s.exit_code},
                    {"seconds", s.seconds},
                    {"files", s.files},
                    {"summary", s.summary}};
  return {{"configHash", config_hash_},
          {"config", config_},
          {"versions", versions_},
          {"stages", stages},
          {"files", files()}};
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  m.config_hash_ = j.at("configHash").get<std::string>();
  m.config_ = j.at("config");
  m.versions_ = j.value("versions", json::object());
  for (const auto& [name, s] : j.at("stages").items()) {
    StageRecord r;
    r.status = s.at("status").get<std::string>();
    r.exit_code = s.value("exitCode", 0);
    r.seconds = s.value("seconds", 0.0);
    r.files = s.value("files", std::vector<std::string>{});
    r.summary = s.value("summary", json::object());
    m.stages_[name] = std::move(r);
  }
  return m;
}

void RunManifest::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream os(dir / kFileName);
  if (!os) throw ConfigError("cannot write manifest in '" + dir.string() + "'");
  os << to_json().dump(2) << '\n';
}

}  // namespace spectile
