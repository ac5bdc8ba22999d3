#include "spectile/probe.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <ostream>
#include <random>

#include "spectile/errors.hpp"
#include "spectile/tiling.hpp"
#include "spectile/window.hpp"

namespace spectile {

namespace {

// FFTW planning is not thread-safe.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

std::vector<cplx> forward_dft(const std::vector<cplx>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<cplx> in = x, out(x.size());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

TestFunction::TestFunction(Profile q, int lattice_half_width, std::size_t nodes)
    : q_(std::move(q)), n_half_(lattice_half_width),
      grid_(std::make_shared<QuadratureGrid>(nodes)) {
  q_.support = merged(q_.support);
  const std::size_t m = grid_->size();
  const std::int64_t reach = 4 * static_cast<std::int64_t>(n_half_);
  if (2 * reach >= static_cast<std::int64_t>(m))
    throw ConfigError("test-function grid too coarse for 4N");
  integer_hat_.assign(2 * reach + 1, cplx{});
  if (q_.support.empty()) return;
  const Interval box = bounding_box(q_.support);
  if (!box.strictly_inside({-0.5, 0.5}))
    throw GeometryError("test function support escapes (-1/2, 1/2)");
  const auto [j0, j1] = grid_->active_range(box);
  j0_ = j0;
  std::vector<cplx> full(m);
  weights_.resize(j1 - j0);
  for (std::size_t j = j0; j < j1; ++j) {
    full[j] = q_(grid_->node(j)) * grid_->weight();
    weights_[j - j0] = full[j];
  }
  // q-hat(n) = sum_j w_j e^{-2 pi i n (-1/2 + j/M)} = (-1)^n DFT(w)[n mod M]
  const auto dft = forward_dft(full);
  for (std::int64_t n = -reach; n <= reach; ++n) {
    const std::size_t idx = static_cast<std::size_t>(n) & (m - 1);
    integer_hat_[n + reach] = ((n & 1) ? -1.0 : 1.0) * dft[idx];
    const double x = static_cast<double>(n);
    const double env = std::abs(integer_hat_[n + reach]) * (1.0 + x * x * x * x);
    decay_ = std::max(decay_, env);
    if (2 * std::abs(n) >= reach) far_decay_ = std::max(far_decay_, env);
  }
}

cplx TestFunction::transform_at_integer(std::int64_t n) const {
  const std::int64_t reach = 4 * static_cast<std::int64_t>(n_half_);
  if (n < -reach || n > reach) throw ContractViolation("integer transform beyond 4N");
  return integer_hat_[n + reach];
}

std::vector<cplx> TestFunction::transform(std::span<const double> xs, Exec exec) const {
  std::vector<cplx> out(xs.size());
  if (weights_.empty()) return out;
  kernels::exp_sum(grid_->node(j0_), grid_->spacing(), weights_, xs, -1.0, out, exec);
  return out;
}

double TestFunction::tail_bound(int n_half) const {
  const double n = static_cast<double>(n_half);
  return 2.0 * decay_ / (3.0 * n * n * n);
}

double TestFunction::far_tail_bound() const {
  const double n = 4.0 * n_half_;
  return 2.0 * far_decay_ / (3.0 * n * n * n);
}

cplx TestFunction::integrate_against(const Profile& s) const {
  if (weights_.empty() || s.support.empty()) return {};
  CompensatedSum<cplx> acc;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    if (weights_[j] == cplx{}) continue;
    acc.add(s(grid_->node(j0_ + j)) * weights_[j]);
  }
  return acc.value();
}

TestFunction TestFunction::scaled(cplx c) const {
  auto base = q_;
  return TestFunction(Profile{[base, c](double t) { return c * base(t); }, q_.support, q_.label},
                      n_half_, grid_->size());
}

TestFunction TestFunction::conj_reflected() const {
  return TestFunction(reflected(q_), n_half_, grid_->size());
}

nlohmann::json ProbeResult::to_json() const {
  return {{"id", id},
          {"pairing", {pairing.real(), pairing.imag()}},
          {"expected", {expected.real(), expected.imag()}},
          {"discrepancy", discrepancy},
          {"tail", tail},
          {"tolerance", tolerance},
          {"pass", pass()}};
}

Pairing pair_with_test(const PerturbedLattice& lat, const TestFunction& q, Exec exec) {
  const int n_half = lat.half_width();
  const auto& a = lat.alpha();
  std::vector<double> moved;
  for (int n = -a.active_half_width(); n <= a.active_half_width(); ++n)
    if (a[n] != 0.0) moved.push_back(lat.point(n));
  const auto moved_hat = q.transform(moved, exec);
  CompensatedSum<cplx> acc;
  std::size_t m = 0;
  for (int n = -n_half; n <= n_half; ++n) {
    if (a[n] != 0.0)
      acc.add(moved_hat[m++]);
    else
      acc.add(q.transform_at_integer(n));
  }
  for (std::int64_t n = n_half + 1; n <= 4 * static_cast<std::int64_t>(n_half); ++n) {
    acc.add(q.transform_at_integer(n));
    acc.add(q.transform_at_integer(-n));
  }
  return {acc.value(), q.far_tail_bound()};
}

cplx expected_pairing(const WindowSpectrum& w, const TestFunction& q) {
  return q.value_at_zero() + (w.trivial() ? cplx{} : q.integrate_against(w.s_part()));
}

std::vector<TestFunction> random_test_family(int count, std::uint64_t seed, double b,
                                             int lattice_half_width) {
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<TestFunction> tests;
  const double margin = 0.005;
  for (int i = 0; i < count; ++i) {
    const double hw = 0.02 + 0.06 * uniform();
    const double lim = b - hw - margin;
    const double c = -lim + 2.0 * lim * uniform();
    auto p = SmoothWindow::bump({c - hw, c + hw}).profile("q" + std::to_string(i));
    tests.emplace_back(std::move(p), lattice_half_width);
  }
  return tests;
}

namespace {
ProbeResult make_result(std::string id, cplx pairing, cplx expected, double tail, double tol) {
  ProbeResult r;
  r.id = std::move(id);
  r.pairing = pairing;
  r.expected = expected;
  r.discrepancy = std::abs(pairing - expected);
  r.tail = tail;
  r.tolerance = tol;
  return r;
}
}  // namespace

std::vector<ProbeResult> verify_window_spectrum(const PerturbedLattice& lat,
                                                const WindowSpectrum& expected,
                                                const std::vector<TestFunction>& tests,
                                                double tol, Exec exec) {
  std::vector<ProbeResult> out;
  for (const auto& q : tests) {
    if (!support_inside(q.profile().support, expected.window()))
      throw ContractViolation("test function '" + q.profile().label +
                              "' is not supported inside the window");
    const auto p = pair_with_test(lat, q, exec);
    out.push_back(make_result(q.profile().label, p.value, expected_pairing(expected, q), p.tail, tol));
  }
  return out;
}

bool certificate(const std::vector<ProbeResult>& results) {
  return !results.empty() &&
         std::all_of(results.begin(), results.end(), [](const ProbeResult& r) { return r.pass(); });
}

nlohmann::json ObstructionResult::to_json() const {
  return {{"bestC", {best_c.real(), best_c.imag()}},
          {"residual", residual},
          {"expectedResidual", expected_residual},
          {"threshold", threshold},
          {"pass", pass}};
}

bool AddendumProbe::pass() const { return certificate(results) && obstruction.pass; }

namespace {
// Least-squares fit of pairings P_i by c q_i(0); returns (c, residual norm).
std::pair<cplx, double> delta_fit(const std::vector<cplx>& p, const std::vector<cplx>& q0) {
  cplx num{};
  double den = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    num += std::conj(q0[i]) * p[i];
    den += std::norm(q0[i]);
  }
  const cplx c = den > 0.0 ? num / den : cplx{};
  double res = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) res += std::norm(p[i] - c * q0[i]);
  return {c, std::sqrt(res)};
}
}  // namespace

AddendumProbe addendum_spectrum_probe(const PerturbedLattice& lat, const WindowSpectrum& expected,
                                      const std::vector<TestFunction>& tests, double a,
                                      double tol, Exec exec) {
  AddendumProbe out;
  out.results = verify_window_spectrum(lat, expected, tests, tol, exec);
  // Tests concentrated near 0: an even bump and an odd (linear x bump) one.
  const double w = 2.0 * a / 3.0;
  const SmoothWindow bump = SmoothWindow::bump({-w, w});
  const TestFunction even(bump.profile("even0"), lat.half_width());
  const TestFunction odd(Profile{[bump, w](double t) { return (t / w) * bump(t); }, {{-w, w}}, "odd0"},
                         lat.half_width());
  std::vector<cplx> measured, predicted, q0;
  double tail = 0.0;
  for (const auto* q : {&even, &odd}) {
    const auto p = pair_with_test(lat, *q, exec);
    const cplx e = expected_pairing(expected, *q);
    measured.push_back(p.value);
    predicted.push_back(e);
    q0.push_back(q->value_at_zero());
    tail = std::max(tail, p.tail);
    out.results.push_back(make_result(q->profile().label, p.value, e, p.tail, tol));
  }
  auto& ob = out.obstruction;
  std::tie(ob.best_c, ob.residual) = delta_fit(measured, q0);
  ob.expected_residual = delta_fit(predicted, q0).second;
  ob.threshold = 10.0 * tol;
  ob.pass = ob.expected_residual >= ob.threshold && ob.residual >= 0.5 * ob.expected_residual &&
            tail <= tol;
  return out;
}

ProbeResult convolution_transform_check(const DensityFunction& h, const PerturbedLattice& lat,
                                        const WindowSpectrum& w, const TestFunction& beta,
                                        double half_range, double step, double tol, Exec exec) {
  if (!support_inside(h.support(), w.window()))
    throw ContractViolation("convolution check needs supp h-hat inside the window");
  const auto count = static_cast<std::size_t>(std::llround(2.0 * half_range / step)) + 1;
  const auto xs = uniform_grid(-half_range, half_range, count);
  const auto conv = translate_sum_direct(h, lat, xs, 1.0 / 16, exec);
  const auto bh = beta.transform(xs, exec);
  CompensatedSum<cplx> lhs;
  double sup_conv = 0.0, l1_beta = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    lhs.add(step * conv.values[i] * bh[i]);
    sup_conv = std::max(sup_conv, std::abs(conv.values[i]));
    l1_beta += step * std::abs(bh[i]);
  }
  // h-hat(0) beta(0) + int S h-hat beta
  const Profile hb = h.spectral_profile();
  cplx rhs = h.spectral(0.0) * beta.value_at_zero();
  if (!w.trivial()) {
    const auto sp = w.s_part();
    rhs += beta.integrate_against(
        Profile{[sp, hb](double t) { return sp(t) * hb(t); }, sp.support, "S h-hat"});
  }
  // |x| > X: |beta-hat| <= D / x^4, integrated on both sides.
  const double x3 = half_range * half_range * half_range;
  const double tail = sup_conv * 2.0 * beta.decay_constant() / (3.0 * x3) + conv.budget * l1_beta;
  return make_result("convolution:" + beta.profile().label, lhs.value(), rhs, tail, tol);
}

nlohmann::json LemmaReport::to_json() const {
  return {{"sValues", s_values},
          {"sConstants", s_constants},
          {"sStable", s_stable},
          {"differenceConstant", diff_constant},
          {"termConstantAtV", term_constant_at_v},
          {"differenceMatchesTerm", diff_matches_term},
          {"differenceHalvedConstant", diff_halved_constant},
          {"differenceHalvingStable", diff_halving_stable},
          {"differenceEqualArguments", diff_equal_constant},
          {"summationConstant", summation_constant},
          {"summationReference", summation_reference},
          {"summationTail", summation_tail},
          {"summationOk", summation_ok},
          {"pass", pass()}};
}

bool LemmaReport::pass() const {
  return s_stable && diff_matches_term && diff_halving_stable && diff_equal_constant == 0.0 &&
         summation_ok;
}

LemmaReport lemma_bound_suite(const Workspace& ws, const SolverConfig& cfg) {
  LemmaReport r;
  const int m = cfg.decay_order, k = cfg.max_freq;
  for (int j = 1; j <= 6; ++j) {
    const double s = std::ldexp(1.0, -j);
    r.s_values.push_back(s);
    r.s_constants.push_back(term_bound_check(s, ws, m, k));
  }
  const auto [mn, mx] = std::minmax_element(r.s_constants.begin(), r.s_constants.end());
  r.s_stable = *mx <= 2.0 * *mn;
  r.diff_constant = difference_bound_check(0.0, 0.1, ws, m, k);
  r.term_constant_at_v = term_bound_check(0.1, ws, m, k);
  const double ratio = r.diff_constant / r.term_constant_at_v;
  r.diff_matches_term = ratio >= 0.25 && ratio <= 4.0;
  const double full = difference_bound_check(0.05, 0.1, ws, m, k);
  r.diff_halved_constant = difference_bound_check(0.025, 0.05, ws, m, k);
  r.diff_halving_stable = r.diff_halved_constant <= 2.0 * full && full <= 2.0 * r.diff_halved_constant;
  r.diff_equal_constant = difference_bound_check(0.07, 0.07, ws, m, k);
  // Summation: T-hat(k) = sum_n gamma_n / (1 + (k - n)^2) with gamma = 1 on |n| <= N.
  const int n_half = cfg.lattice_half_width;
  double worst = 0.0;
  for (int kk = -n_half; kk <= n_half; kk += std::max(1, n_half / 64)) {
    CompensatedSum<double> acc;
    for (int n = -n_half; n <= n_half; ++n) {
      const double d = static_cast<double>(kk - n);
      acc.add(1.0 / (1.0 + d * d));
    }
    worst = std::max(worst, acc.value());
  }
  r.summation_constant = worst;
  r.summation_reference = kPi / std::tanh(kPi);
  r.summation_tail = 2.0 / n_half;
  r.summation_ok = r.summation_constant <= r.summation_reference + 1e-12 &&
                   r.summation_reference - r.summation_constant <= r.summation_tail;
  return r;
}

nlohmann::json OperatorLawReport::to_json() const {
  return {{"supNorms", sup_norms},
          {"ratios", ratios},
          {"quadratic", quadratic},
          {"radius", radius},
          {"probeAtR", probe_r},
          {"probeAtHalfR", probe_half},
          {"contractionRatio", contraction_ratio},
          {"linearContraction", linear_contraction},
          {"pass", pass()}};
}

OperatorLawReport operator_law_check(const Workspace& ws, const SolverConfig& cfg,
                                     std::vector<double> sup_norms, double radius) {
  OperatorLawReport r;
  r.sup_norms = std::move(sup_norms);
  const int n_half = cfg.lattice_half_width, k = cfg.max_freq;
  std::mt19937_64 gen(cfg.seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<double> dir(2 * static_cast<std::size_t>(n_half) + 1, 0.0);
  for (int n = -k; n <= k; ++n)
    dir[n + n_half] = 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0;
  double sup = 0.0;
  for (double v : dir) sup = std::max(sup, std::abs(v));
  for (double s : r.sup_norms) {
    std::vector<double> a(dir.size());
    for (std::size_t i = 0; i < dir.size(); ++i) a[i] = dir[i] * (s / sup);
    const PerturbationSequence alpha(std::move(a));
    const double x = alpha.sup_norm();
    r.ratios.push_back(pm_norm(apply_R(alpha, ws, cfg)) / (x * x));
  }
  const auto [mn, mx] = std::minmax_element(r.ratios.begin(), r.ratios.end());
  r.quadratic = !r.ratios.empty() && *mn > 0.0 && *mx <= 2.0 * *mn;
  r.radius = radius;
  r.probe_r = contraction_probe(radius, ws, cfg, cfg.probe_samples);
  r.probe_half = contraction_probe(0.5 * radius, ws, cfg, cfg.probe_samples);
  r.contraction_ratio = r.probe_half / r.probe_r;
  r.linear_contraction = r.contraction_ratio >= 0.35 && r.contraction_ratio <= 0.65;
  return r;
}

void write_probe_csv(std::ostream& os, const std::vector<ProbeResult>& results) {
  os << "testId,pairing_re,pairing_im,expected_re,expected_im,discrepancy,tail\n";
  for (const auto& r : results)
    os << r.id << ',' << format_double(r.pairing.real()) << ',' << format_double(r.pairing.imag())
       << ',' << format_double(r.expected.real()) << ',' << format_double(r.expected.imag()) << ','
       << format_double(r.discrepancy) << ',' << format_double(r.tail) << '\n';
}

}  // namespace spectile
