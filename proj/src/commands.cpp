#include "spectile/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "spectile/errors.hpp"
#include "spectile/positivity.hpp"
#include "spectile/probe.hpp"
#include "spectile/tiling.hpp"

namespace spectile {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string status_of(int code) {
  switch (code) {
    case 0: return "passed";
    case 3: return "failed";
    case 4: return "inconclusive";
    default: return "error";
  }
}

/// Combines check outcomes: any failure -> 3, else any inconclusive -> 4.
struct Outcome {
  bool failed = false;
  bool inconclusive = false;
  void fail(bool bad) { failed = failed || bad; }
  void unsure(bool bad) { inconclusive = inconclusive || bad; }
  int code() const { return failed ? 3 : inconclusive ? 4 : 0; }
};

/// Artifact writer for one stage; records the stage in the manifest.
class Stage {
 public:
  Stage(const ExperimentConfig& cfg, fs::path out, std::string name, std::ostream& log)
      : cfg_(cfg), out_(std::move(out)), name_(std::move(name)), log_(log),
        start_(std::chrono::steady_clock::now()) {
    fs::create_directories(out_);
    const auto& formats = cfg.to_json().at("outputs").at("formats");
    plots_ = std::find(formats.begin(), formats.end(), "dat") != formats.end();
  }

  const fs::path& out() const { return out_; }
  std::ostream& log() { return log_; }

  void write_text(const std::string& file, const std::string& content) {
    std::ofstream os(out_ / file, std::ios::binary);
    if (!os) throw ConfigError("cannot write '" + (out_ / file).string() + "'");
    os << content;
    files_.push_back(file);
  }
  void write_json(const std::string& file, const json& j) { write_text(file, j.dump(2) + "\n"); }
  template <class Fn>
  void write_with(const std::string& file, Fn&& fn) {
    std::ostringstream os;
    fn(os);
    write_text(file, os.str());
  }
  /// Two-column plot data "x y" with a comment header.
  void write_plot(const std::string& file, const std::string& header,
                  std::span<const double> x, std::span<const double> y) {
    if (!plots_) return;
    std::ostringstream os;
    os << "# " << header << '\n';
    for (std::size_t i = 0; i < x.size(); ++i)
      os << format_double(x[i]) << ' ' << format_double(y[i]) << '\n';
    write_text(file, os.str());
  }

  int finish(int code, json summary) {
    StageRecord rec{status_of(code), code, elapsed(), files_, std::move(summary)};
    save(std::move(rec));
    log_ << name_ << ": " << status_of(code) << '\n';
    return code;
  }
  void abort(const Error& e) {
    StageRecord rec{"error", exit_code(e.kind()), elapsed(), files_, {{"error", e.what()}}};
    save(std::move(rec));
    log_ << name_ << ": error: " << e.what() << '\n';
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  void save(StageRecord rec) {
    RunManifest m = RunManifest::load_or_create(out_, cfg_);
    m.record(name_, std::move(rec));
    m.save(out_);
  }

  const ExperimentConfig& cfg_;
  fs::path out_;
  std::string name_;
  std::ostream& log_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> files_;
  bool plots_ = true;
};

int run_stage(const ExperimentConfig& cfg, const CommandOptions& opt, const std::string& name,
              std::ostream& log, const std::function<int(Stage&)>& body) {
  Stage stage(cfg, opt.out, name, log);
  try {
    return body(stage);
  } catch (const Error& e) {
    stage.abort(e);
    throw;
  }
}

std::shared_ptr<const QuadratureGrid> make_grid(const ExperimentConfig& cfg) {
  return std::make_shared<QuadratureGrid>(cfg.solver.grid_nodes);
}

PerturbedLattice load_lattice(const fs::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot open lattice file '" + file.string() + "'");
  return read_lattice_csv(is);
}

json load_json(const fs::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot open '" + file.string() + "'");
  try {
    json j;
    is >> j;
    return j;
  } catch (const json::exception& e) {
    throw ConfigError("'" + file.string() + "' is not valid JSON: " + e.what());
  }
}

std::vector<double> alpha_index(const PerturbedLattice& lat, std::vector<double>* values) {
  std::vector<double> n;
  const auto& a = lat.alpha();
  for (int k = -a.half_width(); k <= a.half_width(); ++k) {
    n.push_back(k);
    values->push_back(a[k]);
  }
  return n;
}

/// Direct and spectral translate sums of f over the tiling grid.
struct TileRun {
  std::vector<double> direct, spectral;
  TilingReport report;
  double predicted_deviation = 0.0;  // sup |spectral - f-hat(0)|, from the oracle alone
};

TileRun tile_density(const DensityFunction& f, const PerturbedLattice& lat, const WindowSpectrum& w,
                     const std::vector<double>& xs, const ExperimentConfig& cfg) {
  TileRun run;
  run.spectral = translate_sum_spectral(f, w, xs, cfg.solver.exec);
  for (double v : run.spectral)
    run.predicted_deviation = std::max(run.predicted_deviation, std::abs(v - f.mass()));
  const auto direct = translate_sum_direct(f, lat, xs, cfg.tiling.table_step, cfg.solver.exec);
  run.direct = direct.values;
  run.report = assess_tiling(run.direct, run.spectral, direct.budget, cfg.tiling.tol);
  return run;
}

void write_tile_files(Stage& st, const std::string& stem, const std::vector<double>& xs,
                      const TileRun& run) {
  st.write_with(stem + "_samples.csv", [&](std::ostream& os) {
    write_samples_csv(os, xs, run.direct, run.spectral, run.report.level);
  });
  st.write_plot(stem + ".dat", "x direct", xs, run.direct);
}

/// max |f-hat| over `points` interior points of each interval of `support`.
double necessity_probe(const DensityFunction& f, const Support& support, int points) {
  double worst = 0.0;
  for (const auto& iv : support)
    for (int i = 0; i < points; ++i) {
      const double t = iv.lo + (i + 0.5) * (iv.hi - iv.lo) / points;
      worst = std::max(worst, std::abs(f.spectral(t)));
    }
  return worst;
}

json tile_json(const TileRun& run) {
  json j = run.report.to_json();
  j["predictedDeviation"] = run.predicted_deviation;
  return j;
}

}  // namespace

const std::vector<std::string>& pipeline_stages() {
  static const std::vector<std::string> stages{"solve", "tile", "addendum", "positivity", "probe"};
  return stages;
}

// ------------------------------------------------------------------- solve

int cmd_solve(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  return run_stage(cfg, opt, "solve", log, [&](Stage& st) {
    const Workspace ws(cfg.geometry, cfg.solver);
    const std::string name = cfg.to_json().at("lattice").value("target", std::string("sigma"));
    const SpectralTarget target = cfg.target(name, ws.grid());
    LatticeBuild b;
    bool symmetrized = true;
    if (target.is_zero()) {
      b.lattice = PerturbedLattice::integers(cfg.solver.lattice_half_width);
      b.expected = WindowSpectrum::poisson(cfg.geometry);
      b.diag.converged = true;
    } else if (target.symmetry() == Symmetry::one_sided) {
      b = calibrated_lattice(target, ws, cfg.solver);
    } else {
      b = build_lattice_with_spectrum(target, ws, cfg.solver);
      symmetrized = false;
    }
    st.write_with("lattice.csv", [&](std::ostream& os) { write_lattice_csv(os, b.lattice); });
    st.write_json("solve_diagnostics.json", b.diag.to_json());
    st.write_json("window_spectrum.json", window_spectrum_json(b.expected, name, symmetrized));
    if (!target.is_zero()) {
      const SpectralTarget s = symmetrized ? build_Tr(target, b.scale) : target;
      st.write_with("target_spectrum.csv", [&](std::ostream& os) { write_csv(os, s.spectrum()); });
      std::vector<double> t, re;
      for (int i = 0; i <= 1024; ++i) {
        t.push_back(cfg.geometry.b * (2.0 * i / 1024 - 1.0));
        re.push_back(b.expected(t.back()).real());
      }
      st.write_plot("target_profile.dat", "t Re S(t)", t, re);
    }
    std::vector<double> alpha;
    const auto n = alpha_index(b.lattice, &alpha);
    st.write_plot("lattice_alpha.dat", "n alpha_n", n, alpha);

    Outcome out;
    const double eps = cfg.solver.epsilon;
    if (!target.is_zero()) {
      out.fail(!b.diag.converged);
      out.fail(b.diag.final_residual > 1e-10);
      out.fail(b.diag.ball_ratio > eps);
      out.fail(b.diag.alpha_sup > eps);
    }
    json summary = {{"target", name},
                    {"scale", b.scale},
                    {"iterations", b.diag.iterations},
                    {"finalResidual", b.diag.final_residual},
                    {"ballRatio", b.diag.ball_ratio},
                    {"alphaSup", b.diag.alpha_sup},
                    {"converged", b.diag.converged}};
    return st.finish(out.code(), summary);
  });
}

// -------------------------------------------------------------------- tile

int cmd_tile(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  return run_stage(cfg, opt, "tile", log, [&](Stage& st) {
    const auto grid = make_grid(cfg);
    const PerturbedLattice lat = load_lattice(opt.lattice.value_or(opt.out / "lattice.csv"));
    const WindowSpectrum w = window_spectrum_from_json(
        load_json(opt.window.value_or(opt.out / "window_spectrum.json")), cfg, *grid);
    const auto xs = uniform_grid(cfg.tiling.lo, cfg.tiling.hi, cfg.tiling.count);
    Outcome out;
    json report = {{"window", w.kind()}, {"scale", w.scale()}};

    if (opt.density != "pair") {
      const DensityFunction f = cfg.density(opt.density, grid);
      const TileRun run = tile_density(f, lat, w, xs, cfg);
      write_tile_files(st, "tiling_" + opt.density, xs, run);
      report[opt.density] = tile_json(run);
      out.unsure(run.report.verdict == Verdict::inconclusive);
      st.write_json("tiling_" + opt.density + "_report.json", report);
      return st.finish(out.code(), {{opt.density, to_string(run.report.verdict)}});
    }

    const json& spec = cfg.density_spec("pair");
    const double wl = spec.value("w", 1.0);
    Support exempt;
    for (const auto& iv : spec.at("exemption")) exempt.push_back({iv[0].get<double>(), iv[1].get<double>()});
    const TilingPair pair =
        construct_pair(wl, cfg.target(spec.at("psi").get<std::string>(), *grid),
                       cfg.target(spec.at("phi").get<std::string>(), *grid),
                       SmoothWindow::from_json(spec.at("tau"), cfg.geometry), exempt, cfg.geometry, grid);

    const TileRun rf = tile_density(pair.f, lat, w, xs, cfg);
    const TileRun rg = tile_density(pair.g, lat, w, xs, cfg);
    write_tile_files(st, "tiling_f", xs, rf);
    write_tile_files(st, "tiling_g", xs, rg);

    // Integer-lattice baseline: tiling at level f-hat(0).
    const TileRun base = tile_density(pair.f, PerturbedLattice::integers(lat.half_width()),
                                      WindowSpectrum::poisson(cfg.geometry), xs, cfg);

    const double nec_f =
        w.trivial() ? 0.0 : necessity_probe(pair.f, w.s_part().support, cfg.tiling.necessity_points);
    const double nec_g =
        w.trivial() ? 0.0 : necessity_probe(pair.g, w.s_part().support, cfg.tiling.necessity_points);
    const bool zero_sets_agree =
        pair.zero_f.outside(pair.exemption) == pair.zero_g.outside(pair.exemption);

    report["w"] = wl;
    report["f"] = tile_json(rf);
    report["g"] = tile_json(rg);
    report["baseline"] = tile_json(base);
    report["levelError"] = std::abs(rf.report.level - wl);
    report["necessity"] = {{"maxHatF", nec_f},
                           {"maxHatG", nec_g},
                           {"tol", cfg.tiling.necessity_tol},
                           {"pointsPerInterval", cfg.tiling.necessity_points}};
    report["zeroSets"] = {{"f", pair.zero_f.to_json()},
                          {"g", pair.zero_g.to_json()},
                          {"agreeOutsideExemption", zero_sets_agree}};
    st.write_json("tiling_report.json", report);

    out.unsure(rf.report.verdict == Verdict::inconclusive);
    out.unsure(rg.report.verdict == Verdict::inconclusive);
    out.unsure(base.report.verdict == Verdict::inconclusive);
    out.fail(rf.report.verdict == Verdict::not_tiling);
    out.fail(rg.report.verdict == Verdict::tiling);
    out.fail(base.report.verdict == Verdict::not_tiling);
    if (rf.report.verdict == Verdict::tiling) {
      out.fail(std::abs(rf.report.level - wl) > cfg.tiling.tol);
      out.fail(nec_f > cfg.tiling.necessity_tol);
    }
    out.fail(!zero_sets_agree);
    return st.finish(out.code(), {{"f", to_string(rf.report.verdict)},
                                  {"g", to_string(rg.report.verdict)},
                                  {"baseline", to_string(base.report.verdict)},
                                  {"levelF", rf.report.level},
                                  {"deviationG", rg.report.sup_deviation}});
  });
}

// ---------------------------------------------------------------- addendum

int cmd_addendum(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  return run_stage(cfg, opt, "addendum", log, [&](Stage& st) {
    const Workspace ws(cfg.geometry, cfg.solver);
    const auto grid = make_grid(cfg);
    const SpectralTarget psi = cfg.target("addendumPsi", ws.grid());
    const LatticeBuild b = addendum_lattice(psi, ws, cfg.solver);
    st.write_with("addendum_lattice.csv", [&](std::ostream& os) { write_lattice_csv(os, b.lattice); });
    st.write_json("addendum_diagnostics.json", b.diag.to_json());
    st.write_json("addendum_window_spectrum.json", window_spectrum_json(b.expected, "addendumPsi"));
    std::vector<double> alpha;
    const auto n = alpha_index(b.lattice, &alpha);
    st.write_plot("addendum_alpha.dat", "n alpha_n", n, alpha);

    const auto xs = uniform_grid(cfg.tiling.lo, cfg.tiling.hi, cfg.tiling.count);
    const Geometry& g = cfg.geometry;

    // (i) supp f-hat in (-b,-a) u (a,b): tiling at level zero.
    const DensityFunction f0 = cfg.density("levelZero", grid);
    bool annulus = true;
    for (const auto& iv : f0.support())
      annulus = annulus && (iv.strictly_inside({g.a, g.b}) || iv.strictly_inside({-g.b, -g.a}));
    if (!annulus) throw ConfigError("density 'levelZero' must be supported in (-b,-a) u (a,b)");
    const TileRun r0 = tile_density(f0, b.lattice, b.expected, xs, cfg);
    write_tile_files(st, "addendum_level_zero", xs, r0);
    const bool level_zero = r0.report.verdict == Verdict::tiling &&
                            std::abs(r0.report.level) <= cfg.tiling.level_zero_tol;

    // (ii) f-hat(0) = 1: not a tiling.
    const DensityFunction f1 = cfg.density("unitMass", grid);
    if (std::abs(f1.mass() - 1.0) > 1e-12) throw ConfigError("density 'unitMass' must have f-hat(0) = 1");
    const TileRun r1 = tile_density(f1, b.lattice, b.expected, xs, cfg);
    write_tile_files(st, "addendum_unit_mass", xs, r1);
    const bool unit_not_tiling = r1.report.verdict == Verdict::not_tiling;

    // (iii) spectrum probe against delta_0 - 2 pi i r t psi.
    const auto tests = random_test_family(cfg.probes.test_count, cfg.probes.seed, g.b,
                                          b.lattice.half_width());
    const AddendumProbe probe =
        addendum_spectrum_probe(b.lattice, b.expected, tests, g.a, cfg.probes.tol, cfg.solver.exec);
    st.write_with("addendum_probe.csv", [&](std::ostream& os) { write_probe_csv(os, probe.results); });

    json report = {{"scale", b.scale},
                   {"levelZero", tile_json(r0)},
                   {"levelZeroPass", level_zero},
                   {"unitMass", tile_json(r1)},
                   {"unitMassPass", unit_not_tiling},
                   {"obstruction", probe.obstruction.to_json()},
                   {"spectrumProbePass", probe.pass()}};
    st.write_json("addendum_report.json", report);

    Outcome out;
    out.unsure(r0.report.verdict == Verdict::inconclusive || r1.report.verdict == Verdict::inconclusive);
    for (const auto& r : probe.results) out.unsure(r.inconclusive());
    if (!level_zero && r0.report.verdict != Verdict::inconclusive) {
      out.fail(true);
      st.log() << "addendum: level-zero check failed: " << tile_json(r0).dump() << '\n';
    }
    if (!unit_not_tiling && r1.report.verdict != Verdict::inconclusive) {
      out.fail(true);
      st.log() << "addendum: unit-mass check failed: " << tile_json(r1).dump() << '\n';
    }
    for (const auto& r : probe.results)
      if (!r.pass() && !r.inconclusive()) {
        out.fail(true);
        st.log() << "addendum: spectrum probe failed: " << r.to_json().dump() << '\n';
      }
    if (!probe.obstruction.pass) {
      out.fail(true);
      st.log() << "addendum: obstruction failed: " << probe.obstruction.to_json().dump() << '\n';
    }
    return st.finish(out.code(), {{"scale", b.scale},
                                  {"levelZero", level_zero},
                                  {"level", r0.report.level},
                                  {"unitMassNotTiling", unit_not_tiling},
                                  {"spectrumProbe", probe.pass()}});
  });
}

// -------------------------------------------------------------- positivity

int cmd_positivity(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  return run_stage(cfg, opt, "positivity", log, [&](Stage& st) {
    const auto grid = make_grid(cfg);
    const double w = opt.w.value_or(cfg.positivity_w);
    const json& spec = cfg.density_spec("pair");
    const SpectralTarget psi = cfg.target(spec.at("psi").get<std::string>(), *grid);
    const SpectralTarget phi = cfg.target(spec.at("phi").get<std::string>(), *grid);
    PositivityOptions popt = cfg.positivity;
    popt.exec = cfg.solver.exec;
    const PositivePair pp = positive_pair(w, psi.profile(), phi.profile(), cfg.geometry, grid, popt);
    st.write_plot("positivity_f.dat", "x f(x)", pp.scan_f.xs, pp.scan_f.values);
    st.write_plot("positivity_g.dat", "x g(x)", pp.scan_g.xs, pp.scan_g.values);
    const bool pos_f = pp.scan_f.min_value - pp.scan_f.error_bound > 0.0;
    const bool pos_g = pp.scan_g.min_value - pp.scan_g.error_bound > 0.0;
    const bool consistent = pp.scan_f.min_value + pp.scan_f.error_bound >= pp.margin &&
                            pp.scan_g.min_value + pp.scan_g.error_bound >= pp.margin;
    json report = pp.to_json();
    report["positiveF"] = pos_f;
    report["positiveG"] = pos_g;
    report["marginConsistent"] = consistent;
    report["c"] = pp.c;
    report["d"] = pp.d;
    st.write_json("positivity.json", report);
    Outcome out;
    out.fail(!pos_f || !pos_g || !consistent);
    return st.finish(out.code(), {{"w", w},
                                  {"minF", pp.scan_f.min_value},
                                  {"minG", pp.scan_g.min_value},
                                  {"margin", pp.margin}});
  });
}

// ------------------------------------------------------------------- probe

int cmd_probe(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  return run_stage(cfg, opt, "probe", log, [&](Stage& st) {
    const Workspace ws(cfg.geometry, cfg.solver);
    const auto grid = make_grid(cfg);
    const PerturbedLattice lat = load_lattice(opt.lattice.value_or(opt.out / "lattice.csv"));
    const WindowSpectrum w = window_spectrum_from_json(
        load_json(opt.window.value_or(opt.out / "window_spectrum.json")), cfg, *grid);
    const int n_half = lat.half_width();
    const double b = cfg.geometry.b;
    const Exec exec = cfg.solver.exec;
    Outcome out;

    const auto poisson_tests = random_test_family(cfg.probes.poisson_count, cfg.probes.seed, b, n_half);
    const auto poisson = verify_window_spectrum(PerturbedLattice::integers(n_half),
                                                WindowSpectrum::poisson(cfg.geometry), poisson_tests,
                                                cfg.probes.poisson_tol, exec);
    st.write_with("probe_poisson.csv", [&](std::ostream& os) { write_probe_csv(os, poisson); });

    const auto tests = random_test_family(cfg.probes.test_count, cfg.probes.seed, b, n_half);
    const auto window = verify_window_spectrum(lat, w, tests, cfg.probes.tol, exec);
    st.write_with("probe_window.csv", [&](std::ostream& os) { write_probe_csv(os, window); });

    const DensityFunction h = cfg.density("convolutionH", grid);
    const TestFunction beta(cfg.convolution_beta(), n_half);
    const ProbeResult conv = convolution_transform_check(
        h, lat, w, beta, cfg.probes.convolution_half_range, cfg.probes.convolution_step,
        cfg.probes.tol, exec);
    st.write_with("probe_convolution.csv", [&](std::ostream& os) { write_probe_csv(os, {conv}); });

    const LemmaReport lemma = lemma_bound_suite(ws, cfg.solver);
    const OperatorLawReport law = operator_law_check(ws, cfg.solver);

    json report = {{"poissonCertificate", certificate(poisson)},
                   {"windowCertificate", certificate(window)},
                   {"convolution", conv.to_json()},
                   {"lemma", lemma.to_json()},
                   {"operatorLaw", law.to_json()},
                   {"window", w.kind()}};
    st.write_json("probe_report.json", report);

    for (const auto* set : {&poisson, &window})
      for (const auto& r : *set) {
        out.unsure(r.inconclusive());
        out.fail(!r.pass() && !r.inconclusive());
      }
    out.unsure(conv.inconclusive());
    out.fail(!conv.pass() && !conv.inconclusive());
    out.fail(!lemma.pass() || !law.pass());
    return st.finish(out.code(), {{"poissonCertificate", certificate(poisson)},
                                  {"windowCertificate", certificate(window)},
                                  {"convolution", conv.pass()},
                                  {"lemma", lemma.pass()},
                                  {"operatorLaw", law.pass()}});
  });
}

// ------------------------------------------------------------------ report

int cmd_report(const CommandOptions& opt, std::ostream& log) {
  const fs::path file = opt.manifest.value_or(opt.out / RunManifest::kFileName);
  RunManifest m = RunManifest::load(file);
  const fs::path dir = file.parent_path().empty() ? fs::path(".") : file.parent_path();
  std::ostringstream txt;
  json stages = json::object();
  txt << "spectile run report\n";
  txt << "config hash: " << m.config_hash() << "\n\n";
  bool missing = false;
  for (const auto& name : pipeline_stages()) {
    const auto it = m.stages().find(name);
    if (it == m.stages().end()) {
      txt << name << ": absent\n";
      stages[name] = {{"status", "absent"}};
      log << "warning: stage '" << name << "' is absent from the manifest\n";
      missing = true;
      continue;
    }
    const StageRecord& s = it->second;
    txt << name << ": " << s.status << '\n';
    for (const auto& [key, value] : s.summary.items()) txt << "  " << key << " = " << value.dump() << '\n';
    txt << "  files:";
    for (const auto& f : s.files) txt << ' ' << f;
    txt << '\n';
    stages[name] = {{"status", s.status}, {"summary", s.summary}, {"files", s.files}};
  }
  std::vector<std::string> plots;
  for (const auto& f : m.files())
    if (f.size() > 4 && f.compare(f.size() - 4, 4, ".dat") == 0) plots.push_back(f);
  txt << "\nplot data (two-column):";
  for (const auto& p : plots) txt << ' ' << p;
  txt << '\n';

  const json report = {{"configHash", m.config_hash()}, {"stages", stages}, {"plots", plots},
                       {"complete", !missing}};
  {
    std::ofstream os(dir / "report.txt", std::ios::binary);
    if (!os) throw ConfigError("cannot write report in '" + dir.string() + "'");
    os << txt.str();
  }
  {
    std::ofstream os(dir / "report.json", std::ios::binary);
    os << report.dump(2) << '\n';
  }
  m.record("report", StageRecord{missing ? "incomplete" : "passed", 0, 0.0,
                                 {"report.json", "report.txt"}, {{"complete", !missing}}});
  {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw ConfigError("cannot update manifest '" + file.string() + "'");
    os << m.to_json().dump(2) << '\n';
  }
  log << txt.str();
  return 0;
}

int run_pipeline(const ExperimentConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  using Cmd = int (*)(const ExperimentConfig&, const CommandOptions&, std::ostream&);
  const Cmd cmds[] = {cmd_solve, cmd_tile, cmd_addendum, cmd_positivity, cmd_probe};
  int first = 0;
  for (Cmd c : cmds) {
    int code = 0;
    try {
      code = c(cfg, opt, log);
    } catch (const Error& e) {
      code = exit_code(e.kind());
    }
    if (first == 0) first = code;
  }
  cmd_report(opt, log);
  return first;
}

}  // namespace spectile
