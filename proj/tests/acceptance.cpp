// Acceptance harness: runs the default pipeline twice and checks the ten
// acceptance criteria, printing one PASS/FAIL line per criterion.
//
// usage: acceptance <work-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectile/commands.hpp"
#include "spectile/experiment.hpp"
#include "spectile/probe.hpp"
#include "spectile/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spectile;

namespace {

struct Verdict {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::map<int, bool> g_results;

void report(int id, const std::string& title, Verdict& v) {
  g_results[id] = v.ok;
  std::cout << (v.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " --"
            << v.detail.str() << std::endl;
}

json load_json(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw std::runtime_error("missing artifact " + p.string());
  return json::parse(is);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

/// Rows of a probe CSV: id, discrepancy, tail.
struct ProbeRow {
  std::string id;
  double discrepancy = 0.0, tail = 0.0;
};

std::vector<ProbeRow> read_probe_csv(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw std::runtime_error("missing artifact " + p.string());
  std::string line;
  std::getline(is, line);
  std::vector<ProbeRow> rows;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    if (cells.size() != 7) throw std::runtime_error("malformed probe row in " + p.string());
    rows.push_back({cells[0], std::stod(cells[5]), std::stod(cells[6])});
  }
  return rows;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Independent Poisson oracle: sum_{|n|<=N} q-hat(n) computed as the trapezoid
/// sum of q against the Dirichlet kernel D_N(t) = sin((2N+1) pi t) / sin(pi t)
/// on `nodes` points of [-1/2, 1/2). This never touches the library transforms.
double dirichlet_poisson_sum(const Profile& q, int n_half, std::size_t nodes, double* imag) {
  const double h = 1.0 / static_cast<double>(nodes);
  double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;  // Kahan compensation
  const auto half = static_cast<long>(nodes / 2);
  for (long j = -half; j < half; ++j) {
    const double t = static_cast<double>(j) * h;
    const std::complex<double> v = q(t);
    if (v == std::complex<double>{}) continue;
    const double d = (j == 0) ? 2.0 * n_half + 1.0
                              : std::sin((2.0 * n_half + 1.0) * std::numbers::pi * t) /
                                    std::sin(std::numbers::pi * t);
    const double yr = v.real() * d * h - cre;
    const double tr = re + yr;
    cre = (tr - re) - yr;
    re = tr;
    const double yi = v.imag() * d * h - cim;
    const double ti = im + yi;
    cim = (ti - im) - yi;
    im = ti;
  }
  *imag = im;
  return re;
}

// ---------------------------------------------------------------- criteria

void criterion1(const ExperimentConfig& cfg) {
  Verdict v;
  const int n_half = 2048;
  const auto t0 = std::chrono::steady_clock::now();
  const auto tests = random_test_family(20, cfg.probes.seed, cfg.geometry.b, n_half);
  const auto lat = PerturbedLattice::integers(n_half);
  const auto results = verify_window_spectrum(lat, WindowSpectrum::poisson(cfg.geometry), tests,
                                              1e-9, cfg.solver.exec);
  const double runtime = seconds_since(t0);
  double worst_lib = 0.0, worst_oracle = 0.0, worst_tail = 0.0;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    double im = 0.0;
    const double sum = dirichlet_poisson_sum(tests[i].profile(), n_half, std::size_t{1} << 16, &im);
    const double q0 = tests[i].value_at_zero().real();
    // Certified tail of the |n| <= N partial sum: exact |q-hat(n)| up to 4N
    // plus the fitted envelope bound beyond.
    double tail = tests[i].far_tail_bound();
    for (int n = n_half + 1; n <= 4 * n_half; ++n)
      tail += std::abs(tests[i].transform_at_integer(n)) + std::abs(tests[i].transform_at_integer(-n));
    const double oracle_err = std::hypot(sum - q0, im);
    worst_oracle = std::max(worst_oracle, oracle_err);
    worst_lib = std::max(worst_lib, results[i].discrepancy);
    worst_tail = std::max(worst_tail, tail);
    v.require(oracle_err <= 1e-9 + tail, "oracle sum for " + results[i].id);
    v.require(results[i].discrepancy <= 1e-9 + results[i].tail, "library pairing for " + results[i].id);
  }
  v.require(tests.size() == 20, "20 test functions");
  v.require(runtime < 5.0, "runtime < 5 s");
  v.detail << " tests=" << tests.size() << " max|lib-q(0)|=" << worst_lib
           << " max|oracle-q(0)|=" << worst_oracle << " maxTail=" << worst_tail
           << " runtime=" << runtime << "s";
  report(1, "Poisson baseline on Z", v);
}

void criterion2(const fs::path& run, const json& manifest) {
  Verdict v;
  const json d = load_json(run / "solve_diagnostics.json");
  const json& solver = manifest.at("config").at("solver");
  const double eps = solver.at("epsilon").get<double>();
  const double seconds = manifest.at("stages").at("solve").at("seconds").get<double>();
  v.require(d.at("converged").get<bool>(), "converged");
  v.require(d.at("finalResidual").get<double>() <= 1e-10, "residual <= 1e-10");
  v.require(d.at("iterations").get<int>() <= 60, "iterations <= 60");
  v.require(eps == 0.1, "epsilon = 0.1");
  v.require(d.at("ballRatio").get<double>() <= eps, "||T - S1|| <= eps ||S1||");
  v.require(d.at("alphaSup").get<double>() <= eps, "sup |alpha| <= eps");
  v.require(solver.at("N").get<int>() == 2048 && solver.at("K").get<int>() == 512, "N = 2048, K = 512");
  v.require(seconds < 60.0, "runtime < 60 s");
  v.detail << " residual=" << d.at("finalResidual").get<double>()
           << " iterations=" << d.at("iterations").get<int>()
           << " ballRatio=" << d.at("ballRatio").get<double>()
           << " alphaSup=" << d.at("alphaSup").get<double>() << " scale=" << d.at("scale").get<double>()
           << " runtime=" << seconds << "s";
  report(2, "fixed-point solver convergence", v);
}

void criterion3(const fs::path& run) {
  Verdict v;
  const json law = load_json(run / "probe_report.json").at("operatorLaw");
  const auto ratios = law.at("ratios").get<std::vector<double>>();
  const auto sups = law.at("supNorms").get<std::vector<double>>();
  v.require(sups == std::vector<double>{1e-2, 5e-3, 2.5e-3}, "sup norms {1e-2, 5e-3, 2.5e-3}");
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  v.require(!ratios.empty() && *lo > 0.0 && *hi / *lo <= 2.0, "ratios within factor 2");
  const double cr = law.at("probeAtHalfR").get<double>() / law.at("probeAtR").get<double>();
  v.require(cr >= 0.35 && cr <= 0.65, "contraction ratio in [0.35, 0.65]");
  v.detail << " ratios=[" << ratios[0] << ", " << ratios[1] << ", " << ratios[2]
           << "] contractionRatio=" << cr << " r=" << law.at("radius").get<double>();
  report(3, "quadratic operator law and contraction", v);
}

void criterion4(const fs::path& run, const ExperimentConfig& cfg) {
  Verdict v;
  const auto rows = read_probe_csv(run / "probe_window.csv");
  const json rep = load_json(run / "probe_report.json");
  double worst = 0.0, tail = 0.0;
  for (const auto& r : rows) {
    worst = std::max(worst, r.discrepancy);
    tail = std::max(tail, r.tail);
    v.require(r.discrepancy <= 1e-5 && r.tail <= 1e-5, "test " + r.id);
  }
  v.require(rows.size() == 10, "10 random tests");
  v.require(cfg.probes.tol <= 1e-5, "tolerance <= 1e-5");
  v.require(rep.at("window").get<std::string>() == "delta0+S", "expected spectrum delta0 + S");
  v.require(rep.at("windowCertificate").get<bool>(), "certificate");
  v.detail << " tests=" << rows.size() << " maxDiscrepancy=" << worst << " maxTail=" << tail;
  report(4, "window-spectrum certificate", v);
}

void criterion5(const fs::path& run, const ExperimentConfig& cfg) {
  Verdict v;
  const json t = load_json(run / "tiling_report.json");
  const json& f = t.at("f");
  const json& g = t.at("g");
  const double tol = cfg.tiling.tol;
  const double w = t.at("w").get<double>();
  v.require(cfg.tiling.count == 512 && cfg.tiling.lo == -50.0 && cfg.tiling.hi == 50.0,
            "512-point grid on [-50, 50]");
  v.require(tol <= 1e-5, "tiling tolerance <= 1e-5");
  v.require(f.at("verdict") == "tiling", "f verdict tiling");
  v.require(std::abs(f.at("level").get<double>() - w) <= 1e-5, "|level - w| <= 1e-5");
  v.require(f.at("supDeviation").get<double>() <= 1e-5, "f sup deviation <= 1e-5");
  v.require(g.at("verdict") == "not-tiling", "g verdict not-tiling");
  const double predicted = g.at("predictedDeviation").get<double>();
  const double measured = g.at("supDeviation").get<double>();
  v.require(predicted >= 1e3 * tol, "predicted deviation >= 1e3 tol");
  v.require(measured >= 1e3 * tol, "measured deviation >= 1e3 tol");
  v.require(measured >= 0.5 * predicted && measured <= 2.0 * predicted,
            "measured deviation matches the oracle prediction");
  v.detail << " fLevel=" << f.at("level").get<double>() << " fDev=" << f.at("supDeviation").get<double>()
           << " gDev=" << measured << " predicted=" << predicted << " threshold=" << 1e3 * tol;
  report(5, "tiling / non-tiling dichotomy", v);
}

void criterion6(const fs::path& run) {
  Verdict v;
  const json t = load_json(run / "tiling_report.json");
  const json a = load_json(run / "addendum_report.json");
  std::vector<std::pair<std::string, json>> runs = {{"f", t.at("f")},
                                                     {"g", t.at("g")},
                                                     {"baseline", t.at("baseline")},
                                                     {"levelZero", a.at("levelZero")},
                                                     {"unitMass", a.at("unitMass")}};
  double worst_margin = 0.0;
  for (const auto& [name, r] : runs) {
    const double agree = r.at("oracleAgreement").get<double>();
    const double budget = r.at("truncationBudget").get<double>();
    v.require(agree <= 1e-6 + budget, name);
    worst_margin = std::max(worst_margin, agree - budget);
    v.detail << " " << name << "=" << agree << "(budget " << budget << ")";
  }
  report(6, "direct / spectral oracle equivalence", v);
}

void criterion7(const fs::path& run) {
  Verdict v;
  const json a = load_json(run / "addendum_report.json");
  const auto rows = read_probe_csv(run / "addendum_probe.csv");
  const json& lz = a.at("levelZero");
  const json& um = a.at("unitMass");
  v.require(lz.at("verdict") == "tiling", "level-zero verdict tiling");
  v.require(std::abs(lz.at("level").get<double>()) <= 1e-6, "|level| <= 1e-6");
  v.require(um.at("verdict") == "not-tiling", "unit-mass verdict not-tiling");
  v.require(std::abs(um.at("level").get<double>() - 1.0) <= 1e-6, "unit mass f-hat(0) = 1");
  double worst = 0.0;
  for (const auto& r : rows) {
    worst = std::max(worst, r.discrepancy);
    v.require(r.discrepancy <= 1e-5 && r.tail <= 1e-5, "spectrum probe " + r.id);
  }
  v.require(!rows.empty(), "spectrum probe rows present");
  v.require(a.at("obstruction").at("pass").get<bool>(), "no delta_0 multiple near 0");
  v.require(a.at("levelZeroPass").get<bool>() && a.at("unitMassPass").get<bool>() &&
                a.at("spectrumProbePass").get<bool>(),
            "sub-check flags");
  v.detail << " levelZero=" << lz.at("level").get<double>()
           << " unitMassDev=" << um.at("supDeviation").get<double>() << " probeMax=" << worst
           << " obstructionResidual=" << a.at("obstruction").at("residual").get<double>()
           << " scale=" << a.at("scale").get<double>();
  report(7, "level-zero addendum", v);
}

void criterion8(const fs::path& run, const ExperimentConfig& cfg) {
  Verdict v;
  const json p = load_json(run / "positivity.json");
  const auto c = p.at("c").get<std::vector<double>>();
  const auto d = p.at("d").get<std::vector<double>>();
  const double tau0 = p.at("envelope").at("tauAtZero").get<double>();
  const double w = p.at("w").get<double>();
  v.require(w == 1.0, "w = 1");
  v.require(cfg.positivity.scan_lo == -100.0 && cfg.positivity.scan_hi == 100.0 &&
                cfg.positivity.scan_step == 1e-2,
            "scan [-100, 100] at step 1e-2");
  const double fmin = p.at("f").at("min").get<double>(), gmin = p.at("g").at("min").get<double>();
  v.require(fmin > 0.0 && gmin > 0.0, "both minima > 0");
  v.require(fmin > p.at("f").at("errorBound").get<double>() &&
                gmin > p.at("g").at("errorBound").get<double>(),
            "minima exceed the between-sample error bound");
  // Recompute the margin w / tau(0) min_{|k| <= kmax} (d - c) from the stored envelopes.
  const int n = static_cast<int>(c.size() / 2);
  const int kmax = static_cast<int>(std::ceil(100.0)) + 1;
  double gap = INFINITY;
  for (int k = -kmax; k <= kmax; ++k) gap = std::min(gap, d[k + n] - c[k + n]);
  const double margin = w / tau0 * gap;
  v.require(gap > 0.0, "d > c on the scan range");
  v.require(std::abs(margin - p.at("margin").get<double>()) <= 1e-12 * margin, "margin recomputed");
  v.require(std::min(fmin, gmin) >= 0.5 * margin, "minima consistent with the envelope margin");
  v.detail << " minF=" << fmin << " minG=" << gmin << " margin=" << margin;
  report(8, "positivity lift", v);
}

void criterion9(const fs::path& run, const ExperimentConfig& cfg) {
  Verdict v;
  const json t = load_json(run / "tiling_report.json");
  const json& nec = t.at("necessity");
  const double tol = nec.at("tol").get<double>();
  v.require(tol <= 1e-6, "necessity tolerance <= 1e-6");
  if (t.at("f").at("verdict") == "tiling")
    v.require(nec.at("maxHatF").get<double>() <= 1e-6, "f-hat vanishes on supp S");
  if (t.at("g").at("verdict") == "tiling")
    v.require(nec.at("maxHatG").get<double>() <= 1e-6, "g-hat vanishes on supp S");

  // Level-zero addendum run: probe its density on the support of its S-part.
  const json a = load_json(run / "addendum_report.json");
  double lz_max = 0.0;
  if (a.at("levelZero").at("verdict") == "tiling") {
    const auto grid = std::make_shared<const QuadratureGrid>(cfg.solver.grid_nodes);
    const auto w = window_spectrum_from_json(load_json(run / "addendum_window_spectrum.json"), cfg, *grid);
    const auto f = cfg.density("levelZero", grid);
    const int points = cfg.tiling.necessity_points;
    for (const auto& iv : w.s_part().support)
      for (int i = 0; i < points; ++i) {
        const double s = iv.lo + (iv.hi - iv.lo) * (i + 0.5) / points;
        lz_max = std::max(lz_max, std::abs(f.spectral(s)));
      }
    v.require(lz_max <= 1e-6, "level-zero density vanishes on supp S");
  }
  v.detail << " maxHatF=" << nec.at("maxHatF").get<double>() << " levelZeroMax=" << lz_max
           << " pointsPerInterval=" << nec.at("pointsPerInterval").get<int>()
           << " (g: " << t.at("g").at("verdict").get<std::string>() << ")";
  report(9, "necessity probe", v);
}

void criterion10(const fs::path& a, const fs::path& b) {
  Verdict v;
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(a))
    if (e.is_regular_file() && e.path().filename() != RunManifest::kFileName)
      files.push_back(e.path().filename().string());
  std::sort(files.begin(), files.end());
  std::size_t compared = 0, csv_json = 0;
  for (const auto& f : files) {
    if (!fs::exists(b / f)) {
      v.require(false, f + " missing in second run");
      continue;
    }
    v.require(slurp(a / f) == slurp(b / f), f + " differs");
    ++compared;
    const auto ext = fs::path(f).extension();
    if (ext == ".csv" || ext == ".json") ++csv_json;
  }
  std::size_t in_b = 0;
  for (const auto& e : fs::directory_iterator(b))
    if (e.is_regular_file() && e.path().filename() != RunManifest::kFileName) ++in_b;
  v.require(in_b == files.size(), "same artifact set");
  v.require(csv_json > 0, "CSV/JSON artifacts present");
  // The manifests may only differ in stage timings.
  json ma = load_json(a / RunManifest::kFileName), mb = load_json(b / RunManifest::kFileName);
  for (auto* m : {&ma, &mb})
    for (auto& [name, st] : m->at("stages").items()) st.erase("seconds");
  v.require(ma == mb, "manifests differ beyond timings");
  v.detail << " filesCompared=" << compared << " csvJson=" << csv_json;
  report(10, "deterministic pipeline artifacts", v);
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "spectile_acceptance";
  const fs::path run_a = work / "runA", run_b = work / "runB";
  const auto cfg = ExperimentConfig::from_json(json::object());

  int code_a = -1, code_b = -1;
  try {
    for (const auto& [dir, code] : {std::pair{run_a, &code_a}, std::pair{run_b, &code_b}}) {
      fs::remove_all(dir);
      fs::create_directories(dir);
      CommandOptions opt;
      opt.out = dir;
      std::ofstream log(work / (dir.filename().string() + ".log"));
      const auto t0 = std::chrono::steady_clock::now();
      *code = run_pipeline(cfg, opt, log);
      std::cout << "pipeline " << dir.filename().string() << ": exit " << *code << " in "
                << seconds_since(t0) << " s" << std::endl;
    }
  } catch (const std::exception& e) {
    std::cout << "pipeline error: " << e.what() << std::endl;
  }

  const json manifest = fs::exists(run_a / RunManifest::kFileName)
                            ? load_json(run_a / RunManifest::kFileName)
                            : json::object();
  auto guarded = [](int id, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      g_results[id] = false;
      std::cout << "FAIL criterion " << id << ": " << e.what() << std::endl;
    }
  };
  guarded(1, [&] { criterion1(cfg); });
  guarded(2, [&] { criterion2(run_a, manifest); });
  guarded(3, [&] { criterion3(run_a); });
  guarded(4, [&] { criterion4(run_a, cfg); });
  guarded(5, [&] { criterion5(run_a, cfg); });
  guarded(6, [&] { criterion6(run_a); });
  guarded(7, [&] { criterion7(run_a); });
  guarded(8, [&] { criterion8(run_a, cfg); });
  guarded(9, [&] { criterion9(run_a, cfg); });
  guarded(10, [&] { criterion10(run_a, run_b); });

  const bool all = std::all_of(g_results.begin(), g_results.end(), [](const auto& kv) { return kv.second; });
  std::cout << "pipeline exit codes: " << code_a << ", " << code_b << std::endl;
  std::cout << (all && code_a == 0 && code_b == 0 ? "ALL CRITERIA PASS" : "SOME CRITERIA FAILED")
            << std::endl;
  return all && code_a == 0 && code_b == 0 ? 0 : 1;
}
