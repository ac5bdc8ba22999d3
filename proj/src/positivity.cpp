#include "spectile/positivity.hpp"

#include <algorithm>
#include <cmath>

#include "spectile/errors.hpp"

namespace spectile {

std::vector<double> envelope_bounds(const Profile& phi, const QuadratureGrid& grid, int n_env,
                                    int samples_per_unit, Exec exec) {
  if (n_env < 0 || samples_per_unit < 1) throw ContractViolation("envelope_bounds: bad sizes");
  std::vector<double> c(2 * static_cast<std::size_t>(n_env) + 1, 0.0);
  if (phi.support.empty()) return c;
  const auto [j0, j1] = grid.active_range(bounding_box(phi.support));
  std::vector<cplx> weights(j1 - j0);
  CompensatedSum<double> slope;
  for (std::size_t j = j0; j < j1; ++j) {
    const double t = grid.node(j);
    weights[j - j0] = phi(t) * grid.weight();
    slope.add(kTwoPi * std::abs(t) * std::abs(weights[j - j0]));
  }
  const int per = samples_per_unit + 1;
  std::vector<double> xs;
  xs.reserve(c.size() * per);
  for (int k = -n_env; k <= n_env; ++k)
    for (int i = 0; i < per; ++i) xs.push_back(k - 0.5 + static_cast<double>(i) / samples_per_unit);
  std::vector<cplx> v(xs.size());
  kernels::exp_sum(grid.node(j0), grid.spacing(), weights, xs, -1.0, v, exec);
  const double allowance = slope.value() * 0.5 / samples_per_unit;
  for (std::size_t k = 0; k < c.size(); ++k) {
    double m = 0.0;
    for (int i = 0; i < per; ++i) m = std::max(m, std::abs(v[k * per + i]));
    c[k] = 1.25 * (m + allowance);
  }
  return c;
}

std::vector<double> pointwise_max(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ContractViolation("pointwise_max: length mismatch");
  std::vector<double> m(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) m[i] = std::max(x[i], y[i]);
  return m;
}

std::vector<double> default_d(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size() / 2);
  std::vector<double> d(c.size());
  for (int k = -n; k <= n; ++k) d[k + n] = 2.0 * c[k + n] + std::ldexp(1.0, -std::abs(k));
  return d;
}

nlohmann::json EnvelopeCertificate::to_json() const {
  return {{"chiHatMin", chi_hat_min}, {"minGap", min_gap}, {"tauAtZero", tau_at_zero}};
}

Envelope envelope_tau(const std::vector<double>& d, double a, int samples_per_unit) {
  const double h = 0.45 * a;
  Envelope env{SmoothWindow::envelope(d, h), {}};
  const auto& tau = env.tau;
  const int n = static_cast<int>(d.size() / 2);
  const int per = samples_per_unit + 1;
  constexpr int kReach = 3;
  // chi-hat((k - m) + offset_i) for |k - m| <= kReach.
  std::vector<double> chi((2 * kReach + 1) * per);
  for (int s = -kReach; s <= kReach; ++s)
    for (int i = 0; i < per; ++i)
      chi[(s + kReach) * per + i] = tau.chi_hat(s - 0.5 + static_cast<double>(i) / samples_per_unit);
  double chi_min = INFINITY;
  for (int i = 0; i < per; ++i) chi_min = std::min(chi_min, chi[kReach * per + i]);
  env.certificate.chi_hat_min = chi_min;
  if (!(chi_min >= 1.0))
    throw NumericFailure("envelope construction: chi-hat >= 1 certificate failed (min " +
                         std::to_string(chi_min) + ")");
  double gap = INFINITY;
  for (int k = -n; k <= n; ++k)
    for (int i = 0; i < per; ++i) {
      // lower bound for tau-hat(x): keep only the nonnegative terms near k
      CompensatedSum<double> acc;
      for (int m = std::max(-n, k - kReach); m <= std::min(n, k + kReach); ++m)
        acc.add(d[m + n] * chi[(k - m + kReach) * per + i]);
      gap = std::min(gap, acc.value() - d[k + n]);
    }
  env.certificate.min_gap = gap;
  if (!(gap >= 0.0)) throw NumericFailure("envelope construction: tau-hat >= d certificate failed");
  CompensatedSum<double> sd;
  for (double x : d) sd.add(x);
  env.certificate.tau_at_zero = tau.chi_at_zero() * sd.value();
  return env;
}

ScanResult min_value_scan(const DensityFunction& f, double lo, double hi, double step, Exec exec) {
  if (!(step > 0.0) || hi < lo) throw ContractViolation("min_value_scan: bad range");
  const auto count = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
  ScanResult r;
  r.xs.resize(count);
  for (std::size_t i = 0; i < count; ++i) r.xs[i] = lo + step * static_cast<double>(i);
  r.values = f.evaluate(r.xs, exec);
  const auto it = std::min_element(r.values.begin(), r.values.end());
  r.min_value = *it;
  r.argmin = r.xs[it - r.values.begin()];
  r.error_bound = step * step / 8.0 * kTwoPi * kTwoPi * f.hat_second_moment();
  return r;
}

nlohmann::json PositivePair::to_json() const {
  return {{"w", w},
          {"margin", margin},
          {"retries", retries},
          {"envelope", envelope.certificate.to_json()},
          {"f", {{"min", scan_f.min_value}, {"argmin", scan_f.argmin}, {"errorBound", scan_f.error_bound}}},
          {"g", {{"min", scan_g.min_value}, {"argmin", scan_g.argmin}, {"errorBound", scan_g.error_bound}}}};
}

PositivePair positive_pair(double w, const Profile& psi, const Profile& phi, const Geometry& g,
                           std::shared_ptr<const QuadratureGrid> grid,
                           const PositivityOptions& opt) {
  if (!(w > 0.0)) throw ContractViolation("positive_pair needs a positive level w");
  const Interval ab{g.a, g.b};
  if (!support_inside(psi.support, ab) || !support_inside(phi.support, ab))
    throw ContractViolation("positive_pair profiles must be supported in (a, b)");
  const auto c = pointwise_max(envelope_bounds(psi, *grid, opt.n_env, 32, opt.exec),
                               envelope_bounds(phi, *grid, opt.n_env, 32, opt.exec));
  auto d = default_d(c);
  const int kmax = static_cast<int>(std::ceil(std::max(std::abs(opt.scan_lo), std::abs(opt.scan_hi)))) + 1;
  if (kmax > opt.n_env) throw ConfigError("envelope half-width too small for the scan range");
  for (int attempt = 0; attempt < 2; ++attempt) {
    Envelope env = envelope_tau(d, g.a);
    const double scale = w / env.certificate.tau_at_zero;
    const Profile tp = env.tau.profile("tau");
    auto make = [&](const Profile& s, const std::string& label) {
      return DensityFunction(combine({{scale, tp}, {0.5 * scale, s}, {0.5 * scale, reflected(s)}},
                                     label),
                             grid);
    };
    DensityFunction f = make(psi, "f+"), gg = make(phi, "g+");
    ScanResult sf = min_value_scan(f, opt.scan_lo, opt.scan_hi, opt.scan_step, opt.exec);
    ScanResult sg = min_value_scan(gg, opt.scan_lo, opt.scan_hi, opt.scan_step, opt.exec);
    if (sf.min_value > 0.0 && sg.min_value > 0.0) {
      double gap = INFINITY;
      const int n = opt.n_env;
      for (int k = -kmax; k <= kmax; ++k) gap = std::min(gap, d[k + n] - c[k + n]);
      return PositivePair{std::move(f), std::move(gg), c, d, std::move(env), std::move(sf),
                          std::move(sg), w, scale * gap, attempt};
    }
    for (auto& x : d) x *= 2.0;
  }
  throw NumericFailure("positivity certificate failed after doubling the envelope");
}

}  // namespace spectile
