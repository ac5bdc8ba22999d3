#include "spectile/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spectile/errors.hpp"

namespace spectile {

// ---------------------------------------------------------------- config

void SolverConfig::validate() const {
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("solver.rho must lie in (0, 1)");
  if (max_iterations < 1) throw ConfigError("solver.maxIterations must be positive");
  if (!(residual_tol > 0.0)) throw ConfigError("solver.residualTol must be positive");
  if (decay_order < 2) throw ConfigError("solver.decayOrder must be >= 2");
  if (!(epsilon > 0.0 && epsilon < 0.25)) throw ConfigError("solver.epsilon must lie in (0, 1/4)");
  if (admissible_delta < 0.0) throw ConfigError("solver.admissibleDelta must be >= 0");
  if (max_freq < 1) throw ConfigError("solver.K must be positive");
  if (lattice_half_width < max_freq) throw ConfigError("solver.N must be >= solver.K");
  if (grid_nodes < 16 || (grid_nodes & (grid_nodes - 1)) != 0)
    throw ConfigError("solver.gridNodes must be a power of two >= 16");
  if (2 * static_cast<std::size_t>(max_freq) >= grid_nodes)
    throw ConfigError("solver.gridNodes too small for K (need 2K < M)");
  if (!(tail_tolerance > 0.0)) throw ConfigError("solver.tailTolerance must be positive");
  if (probe_samples < 1) throw ConfigError("solver.probeSamples must be positive");
  if (!(initial_scale > 0.0)) throw ConfigError("solver.initialScale must be positive");
  if (max_halvings < 0) throw ConfigError("solver.maxHalvings must be >= 0");
}

nlohmann::json SolverConfig::to_json() const {
  return {{"rho", rho},
          {"maxIterations", max_iterations},
          {"residualTol", residual_tol},
          {"decayOrder", decay_order},
          {"epsilon", epsilon},
          {"admissibleDelta", admissible_delta},
          {"N", lattice_half_width},
          {"K", max_freq},
          {"gridNodes", grid_nodes},
          {"tailTolerance", tail_tolerance},
          {"probeSamples", probe_samples},
          {"seed", seed},
          {"initialScale", initial_scale},
          {"maxHalvings", max_halvings}};
}

SolverConfig SolverConfig::from_json(const nlohmann::json& j, SolverConfig c) {
  try {
    c.rho = j.value("rho", c.rho);
    c.max_iterations = j.value("maxIterations", c.max_iterations);
    c.residual_tol = j.value("residualTol", c.residual_tol);
    c.decay_order = j.value("decayOrder", c.decay_order);
    c.epsilon = j.value("epsilon", c.epsilon);
    c.admissible_delta = j.value("admissibleDelta", c.admissible_delta);
    c.lattice_half_width = j.value("N", c.lattice_half_width);
    c.max_freq = j.value("K", c.max_freq);
    c.grid_nodes = j.value("gridNodes", c.grid_nodes);
    c.tail_tolerance = j.value("tailTolerance", c.tail_tolerance);
    c.probe_samples = j.value("probeSamples", c.probe_samples);
    c.seed = j.value("seed", c.seed);
    c.initial_scale = j.value("initialScale", c.initial_scale);
    c.max_halvings = j.value("maxHalvings", c.max_halvings);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed solver config: ") + e.what());
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------- workspace

Workspace::Workspace(const Geometry& g, const SolverConfig& cfg)
    : geometry_(g),
      grid_(std::make_shared<QuadratureGrid>(cfg.grid_nodes)),
      phi_(SmoothWindow::cutoff(g.window(), {-g.l, g.l}).with_frequency_cutoff(cfg.max_freq)),
      psi_(SmoothWindow::inverse_slope(g).with_frequency_cutoff(cfg.max_freq)) {
  g.validate();
  cfg.validate();
  std::tie(j0_, j1_) = grid_->active_range({-g.l, g.l});
  phi_samples_.resize(j1_ - j0_);
  for (std::size_t j = j0_; j < j1_; ++j) phi_samples_[j - j0_] = phi_(grid_->node(j)).real();
}

// ---------------------------------------------------------------- kernels

cplx removable_kernel(double x) {
  if (x == 0.0) return {};
  if (std::abs(x) < 1.0) {
    // sum_{p>=2} (ix)^{p-1} / p!
    cplx term(0.0, 0.5 * x);  // p = 2
    cplx sum = term;
    for (int p = 3; p < 40; ++p) {
      term *= cplx(0.0, x) / static_cast<double>(p);
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  const cplx ix(0.0, x);
  return (std::polar(1.0, x) - 1.0 - ix) / ix;
}

namespace {

struct ActiveEntries {
  std::vector<std::int64_t> index;
  std::vector<double> value;
};

ActiveEntries active_entries(const PerturbationSequence& alpha) {
  ActiveEntries a;
  const int h = alpha.active_half_width();
  for (int n = -h; n <= h; ++n)
    if (alpha[n] != 0.0) {
      a.index.push_back(n);
      a.value.push_back(alpha[n]);
    }
  return a;
}

double max_abs_node(const Workspace& ws) {
  return std::max(std::abs(ws.grid().node(ws.j0())), std::abs(ws.grid().node(ws.j1() - 1)));
}

TrigSpectrum analyse_window_samples(std::vector<cplx>& samples, const Workspace& ws,
                                    int max_freq, Exec exec) {
  const auto& phi = ws.phi_samples();
  for (std::size_t j = 0; j < samples.size(); ++j) samples[j] *= phi[j];
  std::vector<cplx> c(2 * static_cast<std::size_t>(max_freq) + 1);
  kernels::analysis(samples, ws.j0(), ws.grid().twiddles(), max_freq, c, exec);
  return TrigSpectrum(std::move(c), {-ws.geometry().l, ws.geometry().l});
}

PerturbationSequence alpha_from(const TrigSpectrum& t, const SolverConfig& cfg) {
  const int n_half = cfg.lattice_half_width;
  const int k = std::min(cfg.max_freq, n_half);
  std::vector<double> a(2 * static_cast<std::size_t>(n_half) + 1, 0.0);
  for (int n = -k; n <= k; ++n) a[n + n_half] = t[n].real();
  return PerturbationSequence(std::move(a));
}

}  // namespace

TrigSpectrum apply_R(const PerturbationSequence& alpha, const Workspace& ws,
                     const SolverConfig& cfg, RDiagnostics* diag, bool check_tail) {
  if (alpha.sup_norm() > 1.0) throw ContractViolation("apply_R needs sup|alpha| <= 1");
  const int kmax = cfg.max_freq;
  const auto act = active_entries(alpha);
  if (act.index.empty()) {
    if (diag) *diag = RDiagnostics{};
    return TrigSpectrum::zero(kmax).with_support({-ws.geometry().l, ws.geometry().l});
  }
  // Series order: terms x^{p-1}/p! relative to the leading x/2.
  const double x = kTwoPi * alpha.sup_norm() * max_abs_node(ws);
  int order = 2;
  double term = 0.5 * x;
  const double lead = term;
  while (term > 1e-17 * lead) {
    ++order;
    term *= x / order;
    if (order > 64) throw ConfigError("apply_R: perturbation too large for the power series");
  }
  std::vector<cplx> samples(ws.j1() - ws.j0());
  kernels::power_synthesis(act.index, act.value, order, ws.grid().twiddles(), ws.j0(), samples,
                           cfg.exec);
  TrigSpectrum out = analyse_window_samples(samples, ws, kmax, cfg.exec);
  const double tail = estimate_tail(out);
  if (diag) *diag = RDiagnostics{order, x, tail};
  if (check_tail && tail > cfg.tail_tolerance)
    throw ConfigError("apply_R: truncation K=" + std::to_string(kmax) +
                      " too small, estimated tail mass " + format_double(tail));
  return out.with_tail_mass(tail);
}

TrigSpectrum apply_R_termwise(const PerturbationSequence& alpha, const Workspace& ws,
                              const SolverConfig& cfg) {
  const auto act = active_entries(alpha);
  const auto& tw = ws.grid().twiddles();
  const std::int64_t count = static_cast<std::int64_t>(ws.j1() - ws.j0());
  std::vector<cplx> samples(count);
  const auto& grid = ws.grid();
  const std::size_t j0 = ws.j0();
#pragma omp parallel for schedule(static) if (cfg.exec == Exec::parallel)
  for (std::int64_t j = 0; j < count; ++j) {
    const std::int64_t node = static_cast<std::int64_t>(j0) + j;
    const double t = grid.node(node);
    CompensatedSum<cplx> acc;
    for (std::size_t i = 0; i < act.index.size(); ++i) {
      const double a = act.value[i];
      const double sgn = (act.index[i] & 1) ? -1.0 : 1.0;
      acc.add(a * removable_kernel(kTwoPi * a * t) * (sgn * tw(act.index[i] * node)));
    }
    samples[j] = acc.value();
  }
  return analyse_window_samples(samples, ws, cfg.max_freq, cfg.exec);
}

TrigSpectrum term_spectrum(double s, const Workspace& ws, int max_freq) {
  std::vector<cplx> samples(ws.j1() - ws.j0());
  for (std::size_t j = ws.j0(); j < ws.j1(); ++j)
    samples[j - ws.j0()] = removable_kernel(kTwoPi * s * ws.grid().node(j));
  return analyse_window_samples(samples, ws, max_freq, Exec::parallel);
}

TrigSpectrum difference_spectrum(double u, double v, const Workspace& ws, int max_freq) {
  if (u == v) return TrigSpectrum::zero(max_freq);
  std::vector<cplx> samples(ws.j1() - ws.j0());
  for (std::size_t j = ws.j0(); j < ws.j1(); ++j) {
    const double t = ws.grid().node(j);
    samples[j - ws.j0()] = v * removable_kernel(kTwoPi * v * t) - u * removable_kernel(kTwoPi * u * t);
  }
  return analyse_window_samples(samples, ws, max_freq, Exec::parallel);
}

namespace {
double weighted_max(const TrigSpectrum& c, int m) {
  double best = 0.0;
  for (int k = -c.max_freq(); k <= c.max_freq(); ++k)
    best = std::max(best, std::abs(c[k]) * (1.0 + std::pow(std::abs(static_cast<double>(k)), m)));
  return best;
}
}  // namespace

double term_bound_check(double s, const Workspace& ws, int m, int max_freq) {
  if (m < 1) throw ContractViolation("term_bound_check needs m >= 1");
  if (std::abs(s) > 1.0) throw ContractViolation("term_bound_check needs |s| <= 1");
  if (s == 0.0) return 0.0;
  return weighted_max(term_spectrum(s, ws, max_freq), m) / std::abs(s);
}

double difference_bound_check(double u, double v, const Workspace& ws, int m, int max_freq) {
  if (std::abs(u) > 1.0 || std::abs(v) > 1.0)
    throw ContractViolation("difference_bound_check needs u, v in [-1, 1]");
  if (u == v) return 0.0;
  const double scale = std::max(std::abs(u), std::abs(v)) * std::abs(v - u);
  return weighted_max(difference_spectrum(u, v, ws, max_freq), m) / scale;
}

// ---------------------------------------------------------------- solve

nlohmann::json SolveDiagnostics::to_json() const {
  nlohmann::json cal = nlohmann::json::array();
  for (const auto& s : calibration)
    cal.push_back({{"scale", s.scale}, {"targetNorm", s.target_norm}, {"probe", s.probe},
                   {"outcome", s.outcome}});
  return {{"iterationResiduals", iteration_residuals},
          {"finalResidual", final_residual},
          {"empiricalLipschitz", empirical_lipschitz},
          {"tailMass", tail_mass},
          {"ballRatio", ball_ratio},
          {"targetNorm", target_norm},
          {"imagResidue", imag_residue},
          {"alphaSup", alpha_sup},
          {"iterations", iterations},
          {"converged", converged},
          {"scale", scale},
          {"admissibleDelta", admissible_delta},
          {"contractionProbe", contraction_probe},
          {"windowIdentityResidual", window_identity_residual},
          {"calibration", cal}};
}

FixedPointResult fixed_point_solve(const TrigSpectrum& s1_in, const Workspace& ws,
                                   const SolverConfig& cfg) {
  if (s1_in.max_imag() > 1e-13)
    throw ContractViolation("fixed_point_solve: target must have real coefficients");
  const TrigSpectrum s1 = s1_in.truncated(cfg.max_freq).real_projection();
  FixedPointResult res;
  auto& d = res.diag;
  d.target_norm = pm_norm(s1);
  if (cfg.admissible_delta > 0.0 && d.target_norm > cfg.admissible_delta * (1.0 + 1e-12))
    throw ContractViolation("fixed_point_solve: ||S1||_Y = " + format_double(d.target_norm) +
                            " exceeds the admissible delta " + format_double(cfg.admissible_delta));
  TrigSpectrum t = s1;
  int rising = 0;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const PerturbationSequence alpha = alpha_from(t, cfg);
    if (alpha.sup_norm() > 1.0)
      throw NumericFailure("delta too large: iterate left U_1 (sup|alpha| = " +
                           format_double(alpha.sup_norm()) + ")");
    const TrigSpectrum next = s1 - apply_R(alpha, ws, cfg);
    const double r = pm_norm(next - t);
    d.iteration_residuals.push_back(r);
    d.iterations = it;
    if (r <= cfg.residual_tol) {
      d.converged = true;
      d.final_residual = r;  // equals ||T + R(F(T)) - S1||_Y for the returned T
      break;
    }
    const auto& h = d.iteration_residuals;
    if (h.size() >= 2 && r >= h[h.size() - 2] && r > 10.0 * cfg.residual_tol)
      ++rising;
    else
      rising = 0;
    if (rising >= 3) {
      const double lip = h[h.size() - 2] > 0 ? r / h[h.size() - 2] : 0.0;
      throw NumericFailure("delta too large: no contraction (measured Lipschitz estimate " +
                           format_double(lip) + ")");
    }
    t = next;
  }
  if (!d.converged) {
    d.final_residual = d.iteration_residuals.empty() ? 0.0 : d.iteration_residuals.back();
    throw NumericFailure("fixed-point iteration cap of " + std::to_string(cfg.max_iterations) +
                         " exceeded (last residual " + format_double(d.final_residual) + ")");
  }
  const auto& h = d.iteration_residuals;
  for (std::size_t j = 1; j < h.size(); ++j)
    if (h[j - 1] > 100.0 * cfg.residual_tol) d.empirical_lipschitz = std::max(d.empirical_lipschitz, h[j] / h[j - 1]);
  d.ball_ratio = d.target_norm > 0.0 ? pm_norm(t - s1) / d.target_norm : 0.0;
  d.tail_mass = estimate_tail(t);
  d.imag_residue = t.max_imag();
  d.alpha_sup = alpha_from(t, cfg).sup_norm();
  res.T = t.with_tail_mass(d.tail_mass);
  return res;
}

double contraction_probe(double r, const Workspace& ws, const SolverConfig& cfg,
                         int sample_count) {
  if (!(r >= 0.0 && r < 1.0)) throw ContractViolation("contraction_probe needs r in [0, 1)");
  if (r == 0.0) return 0.0;
  std::mt19937_64 gen(cfg.seed);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  const int k = cfg.max_freq;
  double best = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    std::vector<double> a(2 * static_cast<std::size_t>(k) + 1), b(a.size());
    for (auto& x : a) x = r * (2.0 * uniform() - 1.0);
    for (auto& x : b) x = r * (2.0 * uniform() - 1.0);
    const PerturbationSequence pa(std::move(a)), pb(std::move(b));
    const double num = pm_norm(apply_R(pb, ws, cfg) - apply_R(pa, ws, cfg));
    const double den = (pb - pa).sup_norm();
    if (den > 0.0) best = std::max(best, num / den);
  }
  return best;
}

TransformSolution solve_prescribed_transform(const SpectralTarget& s, const Workspace& ws,
                                             const SolverConfig& cfg) {
  const Geometry& g = ws.geometry();
  if (!support_inside(s.support(), g.window()))
    throw GeometryError("prescribed transform must be supported in (-b, b)");
  if (s.symmetry() != Symmetry::hermitian_even)
    throw ContractViolation("prescribed transform must be hermitian-even (real coefficients)");
  const TrigSpectrum s1 = flip(s.spectrum()).truncated(cfg.max_freq);
  auto fp = fixed_point_solve(s1, ws, cfg);
  TransformSolution out{alpha_from(fp.T, cfg), fp.T, fp.diag};
  if (out.alpha.sup_norm() > cfg.epsilon)
    throw NumericFailure("solution violates sup|alpha| <= epsilon (" +
                         format_double(out.alpha.sup_norm()) + ")");
  return out;
}

// ---------------------------------------------------------------- F

double eval_F(const PerturbationSequence& alpha, double x) {
  const double fl = std::floor(x);
  for (double nd : {fl, fl + 1.0}) {
    if (std::abs(nd) > alpha.half_width()) continue;
    const int n = static_cast<int>(nd);
    const double a = alpha[n];
    if (a > 0.0 && x >= nd && x < nd + a) return 1.0;
    if (a < 0.0 && x >= nd + a && x < nd) return -1.0;
  }
  return 0.0;
}

cplx eval_F_hat(const PerturbationSequence& alpha, double t) {
  const int h = alpha.active_half_width();
  CompensatedSum<cplx> acc;
  for (int n = -h; n <= h; ++n) {
    const double a = alpha[n];
    if (a == 0.0) continue;
    const double z = kTwoPi * a * t;
    cplx g(1.0, 0.0);
    if (z != 0.0) {
      const double sh = std::sin(0.5 * z);
      g = {std::sin(z) / z, -2.0 * sh * sh / z};
    }
    acc.add(a * g * std::polar(1.0, std::remainder(-kTwoPi * n * t, kTwoPi)));
  }
  return acc.value();
}

// ---------------------------------------------------------------- builders

WindowSpectrum WindowSpectrum::poisson(const Geometry& g) {
  return WindowSpectrum(Profile{[](double) { return cplx{}; }, {}, "zero"}, g.window(),
                        "poisson", 0.0);
}

namespace {

void require_annulus_support(const SpectralTarget& s, const Geometry& g) {
  for (const auto& iv : s.support()) {
    const bool right = iv.strictly_inside({g.a, g.b});
    const bool left = iv.strictly_inside({-g.b, -g.a});
    if (!right && !left)
      throw GeometryError("target support " + to_string(iv) +
                          " must lie strictly inside (-b,-a) or (a,b)");
  }
}

double identity_residual(const SpectralTarget& s, const Workspace& ws) {
  double worst = 0.0;
  for (const auto& iv : s.support()) {
    const auto [j0, j1] = ws.grid().active_range(iv);
    for (std::size_t j = j0; j < j1; ++j) {
      const double t = ws.grid().node(j);
      if (!iv.contains(t)) continue;
      worst = std::max(worst, std::abs(cplx(0.0, kTwoPi * t) * ws.psi()(t) + 1.0));
    }
  }
  return worst;
}

LatticeBuild finish_build(const SpectralTarget& s, TransformSolution sol, const Workspace& ws,
                          double scale) {
  LatticeBuild b;
  b.lattice = PerturbedLattice(sol.alpha);
  b.diag = std::move(sol.diag);
  b.diag.window_identity_residual = identity_residual(s, ws);
  b.expected = WindowSpectrum(s.profile(), ws.geometry().window(), "delta0+S", scale);
  b.scale = scale;
  return b;
}

}  // namespace

LatticeBuild build_lattice_with_spectrum(const SpectralTarget& s, const Workspace& ws,
                                         const SolverConfig& cfg) {
  if (s.symmetry() != Symmetry::hermitian_even)
    throw ContractViolation("build_lattice_with_spectrum needs a hermitian-even target");
  require_annulus_support(s, ws.geometry());
  const SpectralTarget p =
      s.times(ws.psi().profile("Psi"), Symmetry::hermitian_even, ws.grid(), cfg.exec);
  return finish_build(s, solve_prescribed_transform(p, ws, cfg), ws, 1.0);
}

LatticeBuild calibrated_lattice(const SpectralTarget& one_sided, const Workspace& ws,
                                const SolverConfig& cfg) {
  if (one_sided.symmetry() != Symmetry::one_sided)
    throw ContractViolation("calibrated_lattice needs a one-sided target");
  std::vector<CalibrationStep> steps;
  double r = cfg.initial_scale;
  for (int h = 0; h <= cfg.max_halvings; ++h, r *= 0.5) {
    const SpectralTarget s = build_Tr(one_sided, r);
    require_annulus_support(s, ws.geometry());
    const SpectralTarget p =
        s.times(ws.psi().profile("Psi"), Symmetry::hermitian_even, ws.grid(), cfg.exec);
    CalibrationStep step{r, pm_norm(flip(p.spectrum()).truncated(cfg.max_freq)), 0.0, ""};
    const double radius = (1.0 + cfg.epsilon) * step.target_norm;
    if (radius >= 1.0) {
      step.outcome = "radius";
      steps.push_back(step);
      continue;
    }
    step.probe = contraction_probe(radius, ws, cfg, cfg.probe_samples);
    if (step.probe >= cfg.rho) {
      step.outcome = "probe";
      steps.push_back(step);
      continue;
    }
    try {
      auto sol = solve_prescribed_transform(p, ws, cfg);
      if (sol.diag.ball_ratio > cfg.epsilon) {
        step.outcome = "ball";
        steps.push_back(step);
        continue;
      }
      step.outcome = "accepted";
      steps.push_back(step);
      LatticeBuild b = finish_build(s, std::move(sol), ws, r);
      b.diag.scale = r;
      b.diag.admissible_delta = step.target_norm;
      b.diag.contraction_probe = step.probe;
      b.diag.calibration = steps;
      return b;
    } catch (const NumericFailure& e) {
      step.outcome = std::string("diverged: ") + e.what();
      steps.push_back(step);
    }
  }
  throw NumericFailure("calibration failed: no admissible scale after " +
                       std::to_string(cfg.max_halvings) + " halvings");
}

LatticeBuild addendum_lattice(const SpectralTarget& psi, const Workspace& ws,
                              const SolverConfig& cfg) {
  const Geometry& g = ws.geometry();
  const Interval box = bounding_box(psi.support());
  if (psi.support().empty() || box.lo < -g.a || box.hi > g.a)
    throw ContractViolation("addendum profile must be supported in (-a, a)");
  double peak = 0.0;
  for (int i = 1; i < 128; ++i) {
    const double t = g.a * (2.0 * i / 128.0 - 1.0);
    const cplx v = psi(t), w = psi(-t);
    if (!(v.real() > 0.0) || v.imag() != 0.0)
      throw ContractViolation("addendum profile must be real and strictly positive on (-a, a)");
    if (std::abs(v - w) > 1e-14 * std::abs(v)) throw ContractViolation("addendum profile must be even");
    peak = std::max(peak, v.real());
  }
  std::vector<CalibrationStep> steps;
  double r = cfg.initial_scale;
  for (int h = 0; h <= cfg.max_halvings; ++h, r *= 0.5) {
    const SpectralTarget p = psi.scaled(r);
    CalibrationStep step{r, pm_norm(flip(p.spectrum()).truncated(cfg.max_freq)), 0.0, ""};
    const double radius = (1.0 + cfg.epsilon) * step.target_norm;
    if (radius >= 1.0) {
      step.outcome = "radius";
      steps.push_back(step);
      continue;
    }
    step.probe = contraction_probe(radius, ws, cfg, cfg.probe_samples);
    if (step.probe >= cfg.rho) {
      step.outcome = "probe";
      steps.push_back(step);
      continue;
    }
    try {
      auto sol = solve_prescribed_transform(p, ws, cfg);
      if (sol.diag.ball_ratio > cfg.epsilon) {
        step.outcome = "ball";
        steps.push_back(step);
        continue;
      }
      step.outcome = "accepted";
      steps.push_back(step);
      LatticeBuild b;
      b.lattice = PerturbedLattice(sol.alpha);
      b.diag = std::move(sol.diag);
      b.diag.scale = r;
      b.diag.admissible_delta = step.target_norm;
      b.diag.contraction_probe = step.probe;
      b.diag.calibration = steps;
      auto base = psi.profile();
      const double rr = r;
      b.expected = WindowSpectrum(
          Profile{[base, rr](double t) { return cplx(0.0, -kTwoPi * rr * t) * base(t); },
                  psi.support(), "-2 pi i r t psi"},
          g.window(), "delta0-2piirtpsi", r);
      b.scale = r;
      return b;
    } catch (const NumericFailure& e) {
      step.outcome = std::string("diverged: ") + e.what();
      steps.push_back(step);
    }
  }
  throw NumericFailure("addendum calibration failed: no admissible amplitude");
}

}  // namespace spectile

namespace spectile {
SolverConfig SolverConfig::from_json(const nlohmann::json& j) { return from_json(j, SolverConfig{}); }
}  // namespace spectile
