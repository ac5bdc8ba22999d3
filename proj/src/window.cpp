#include "spectile/window.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "spectile/errors.hpp"

namespace spectile {
namespace {

using Gauss = boost::math::quadrature::gauss<double, 30>;

// Composite 30-point Gauss-Legendre over `panels` equal panels.
template <class F>
double composite(F f, double lo, double hi, int panels = 4) {
  if (hi <= lo) return 0.0;
  const double w = (hi - lo) / panels;
  CompensatedSum<double> acc;
  for (int p = 0; p < panels; ++p) acc.add(Gauss::integrate(f, lo + p * w, lo + (p + 1) * w));
  return acc.value();
}

double rho_integral_from_minus_one(double u) {
  return composite(mollifier_kernel, -1.0, u);
}

double rho_total() {
  static const double total = 2.0 * rho_integral_from_minus_one(0.0);
  return total;
}

bool symmetric(const Interval& iv) { return iv.lo == -iv.hi; }

}  // namespace

double mollifier_kernel(double u) {
  const double q = 1.0 - u * u;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

double smoothstep(double u) {
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  if (u <= 0.0) return rho_integral_from_minus_one(u) / rho_total();
  return 1.0 - rho_integral_from_minus_one(-u) / rho_total();
}

double mollifier_kernel_hat(double xi) {
  auto f = [xi](double u) { return mollifier_kernel(u) * std::cos(kTwoPi * u * xi); };
  // rho is even: 2 int_0^1; more panels for oscillatory arguments.
  const int panels = 4 + static_cast<int>(std::abs(xi));
  return 2.0 * composite(f, 0.0, 1.0, panels);
}

std::string to_string(WindowMode m) {
  switch (m) {
    case WindowMode::cutoff: return "cutoff";
    case WindowMode::inverse_slope: return "inverse_slope";
    case WindowMode::bump: return "bump";
    case WindowMode::envelope: return "envelope";
    case WindowMode::mollifier: return "mollifier";
  }
  return "cutoff";
}

WindowMode window_mode_from_string(const std::string& s) {
  if (s == "cutoff") return WindowMode::cutoff;
  if (s == "inverse_slope") return WindowMode::inverse_slope;
  if (s == "bump") return WindowMode::bump;
  if (s == "envelope") return WindowMode::envelope;
  if (s == "mollifier") return WindowMode::mollifier;
  throw ConfigError("unknown window mode '" + s + "'");
}

SmoothWindow SmoothWindow::cutoff(Interval plateau, Interval support, double amplitude) {
  if (!(support.lo < plateau.lo && plateau.lo <= plateau.hi && plateau.hi < support.hi))
    throw ConfigError("cutoff window needs support.lo < plateau.lo <= plateau.hi < support.hi");
  SmoothWindow w;
  w.mode_ = WindowMode::cutoff;
  w.plateau_ = plateau;
  w.support_ = support;
  w.amplitude_ = amplitude;
  return w;
}

SmoothWindow SmoothWindow::inverse_slope(const Geometry& g) {
  g.validate();
  SmoothWindow w;
  w.mode_ = WindowMode::inverse_slope;
  w.plateau_ = {g.a, g.b};
  w.support_ = {-g.l, g.l};
  w.a_ = g.a;
  return w;
}

SmoothWindow SmoothWindow::bump(Interval support, double amplitude) {
  if (!(support.lo < support.hi)) throw ConfigError("bump support must be nonempty");
  SmoothWindow w;
  w.mode_ = WindowMode::bump;
  w.plateau_ = {support.center(), support.center()};
  w.support_ = support;
  w.amplitude_ = amplitude;
  return w;
}

SmoothWindow SmoothWindow::mollifier(double h) {
  if (!(h > 0.0 && h < 0.25)) throw ConfigError("mollifier scale h must lie in (0, 1/4)");
  SmoothWindow w;
  w.mode_ = WindowMode::mollifier;
  w.h_ = h;
  const double r = h * mollifier_kernel_hat(0.5 * h);
  // rho-hat decreases on [0, h/2], so chi-hat is smallest at +-1/2 on the unit
  // interval; the 1e-9 inflation keeps the bound chi-hat >= 1 robust to rounding.
  w.lambda_ = (1.0 + 1e-9) / (r * r);
  w.support_ = {-2.0 * h, 2.0 * h};
  w.plateau_ = {0.0, 0.0};
  return w;
}

SmoothWindow SmoothWindow::envelope(std::vector<double> d, double h) {
  if (d.size() % 2 == 0) throw ContractViolation("envelope sequence must have odd length");
  for (double x : d)
    if (!(x > 0.0) || !std::isfinite(x))
      throw ContractViolation("envelope sequence d must be strictly positive and finite");
  SmoothWindow w = mollifier(h);
  w.mode_ = WindowMode::envelope;
  w.d_ = std::move(d);
  return w;
}

SmoothWindow SmoothWindow::with_frequency_cutoff(int k) const {
  if (k < 1) throw ConfigError("frequencyCutoff must be positive");
  SmoothWindow w = *this;
  w.frequency_cutoff_ = k;
  return w;
}

namespace {
Interval interval_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("window JSON lacks '") + key + "'");
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 2) throw ConfigError(std::string("'") + key + "' must be [lo, hi]");
  return {a[0].get<double>(), a[1].get<double>()};
}
}  // namespace

SmoothWindow SmoothWindow::from_json(const nlohmann::json& j, const Geometry& g) {
  try {
    const WindowMode mode = window_mode_from_string(j.at("mode").get<std::string>());
    const double amp = j.value("amplitude", 1.0);
    SmoothWindow w;
    switch (mode) {
      case WindowMode::cutoff:
        w = cutoff(interval_from_json(j, "plateau"), interval_from_json(j, "support"), amp);
        break;
      case WindowMode::inverse_slope: w = inverse_slope(g); break;
      case WindowMode::bump: w = bump(interval_from_json(j, "support"), amp); break;
      case WindowMode::mollifier: w = mollifier(j.at("h").get<double>()); break;
      case WindowMode::envelope:
        w = envelope(j.at("d").get<std::vector<double>>(), j.at("h").get<double>());
        break;
    }
    if (j.contains("frequencyCutoff")) w = w.with_frequency_cutoff(j.at("frequencyCutoff").get<int>());
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed window JSON: ") + e.what());
  }
}

nlohmann::json SmoothWindow::to_json() const {
  nlohmann::json j;
  j["mode"] = to_string(mode_);
  j["plateau"] = {plateau_.lo, plateau_.hi};
  j["support"] = {support_.lo, support_.hi};
  j["amplitude"] = amplitude_;
  j["frequencyCutoff"] = frequency_cutoff_;
  if (mode_ == WindowMode::mollifier || mode_ == WindowMode::envelope) {
    j["h"] = h_;
    j["lambda"] = lambda_;
  }
  if (mode_ == WindowMode::envelope) j["d"] = d_;
  return j;
}

Support SmoothWindow::support_set() const {
  if (mode_ == WindowMode::inverse_slope)
    return {{support_.lo, -0.5 * a_}, {0.5 * a_, support_.hi}};
  return {support_};
}

double SmoothWindow::cutoff_value(double t, const Interval& p, const Interval& s) const {
  if (symmetric(p) && symmetric(s)) t = std::abs(t);
  if (t <= s.lo || t >= s.hi) return 0.0;
  if (t >= p.lo && t <= p.hi) return 1.0;
  if (t < p.lo) return smoothstep(2.0 * (t - s.lo) / (p.lo - s.lo) - 1.0);
  return smoothstep(1.0 - 2.0 * (t - p.hi) / (s.hi - p.hi));
}

double SmoothWindow::chi(double t) const {
  const double s = std::abs(t) / h_;
  if (s >= 2.0) return 0.0;
  auto f = [s](double u) { return mollifier_kernel(u) * mollifier_kernel(s - u); };
  return lambda_ * h_ * composite(f, s - 1.0, 1.0);
}

double SmoothWindow::chi_hat(double x) const {
  const double r = h_ * mollifier_kernel_hat(h_ * x);
  return lambda_ * r * r;
}

double SmoothWindow::chi_at_zero() const {
  auto f = [](double u) { const double r = mollifier_kernel(u); return r * r; };
  return lambda_ * h_ * composite(f, -1.0, 1.0, 8);
}

double SmoothWindow::tau_hat(double x) const {
  if (mode_ != WindowMode::envelope) throw ContractViolation("tau_hat needs envelope mode");
  const int n_env = static_cast<int>(d_.size() / 2);
  CompensatedSum<double> acc;
  for (int n = -n_env; n <= n_env; ++n) acc.add(d_[n + n_env] * chi_hat(x - n));
  return acc.value();
}

cplx SmoothWindow::operator()(double t) const {
  switch (mode_) {
    case WindowMode::cutoff:
      return amplitude_ * cutoff_value(t, plateau_, support_);
    case WindowMode::inverse_slope: {
      const double w = cutoff_value(t, {-plateau_.hi, plateau_.hi}, support_) -
                       cutoff_value(t, {-0.5 * a_, 0.5 * a_}, {-a_, a_});
      if (w == 0.0) return {};
      // -w / (2 pi i t) = i w / (2 pi t)
      return {0.0, w / (kTwoPi * t)};
    }
    case WindowMode::bump: {
      const double hw = 0.5 * support_.length();
      double u = (t - support_.center()) / hw;
      if (symmetric(support_)) u = std::abs(t) / hw;
      const double q = 1.0 - u * u;
      return q > 0.0 ? amplitude_ * std::exp(1.0 - 1.0 / q) : 0.0;
    }
    case WindowMode::mollifier:
      return chi(t);
    case WindowMode::envelope: {
      const double c = chi(t);
      if (c == 0.0) return {};
      const int n_env = static_cast<int>(d_.size() / 2);
      // d real: sum d(n) e^{2 pi i n t} = d(0) + sum_{n>0} (d(n) e^{..} + d(-n) e^{-..})
      double re = d_[n_env], im = 0.0;
      for (int n = 1; n <= n_env; ++n) {
        const double ph = kTwoPi * n * t;
        re += (d_[n_env + n] + d_[n_env - n]) * std::cos(ph);
        im += (d_[n_env + n] - d_[n_env - n]) * std::sin(ph);
      }
      return {c * re, c * im};
    }
  }
  return {};
}

Profile SmoothWindow::profile(const std::string& label) const {
  SmoothWindow copy = *this;
  return Profile{[copy](double t) { return copy(t); }, support_set(),
                 label.empty() ? to_string(mode_) : label};
}

}  // namespace spectile
