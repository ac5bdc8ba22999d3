#include "spectile/trig_spectrum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "spectile/errors.hpp"

namespace spectile {

TrigSpectrum::TrigSpectrum(std::vector<cplx> coeffs, Interval support_hint,
                           double tail_mass)
    : coeffs_(std::move(coeffs)), support_(support_hint), tail_mass_(tail_mass) {
  if (coeffs_.size() % 2 == 0)
    throw ContractViolation("coefficient vector must have odd length 2K+1");
}

TrigSpectrum TrigSpectrum::zero(int max_freq) {
  TrigSpectrum s(std::vector<cplx>(2 * static_cast<std::size_t>(max_freq) + 1));
  s.real_ = true;
  return s;
}

TrigSpectrum TrigSpectrum::monomial(int k, cplx value, int max_freq) {
  if (std::abs(k) > max_freq) throw ContractViolation("monomial frequency beyond cutoff");
  std::vector<cplx> c(2 * static_cast<std::size_t>(max_freq) + 1);
  c[k + max_freq] = value;
  return TrigSpectrum(std::move(c));
}

double TrigSpectrum::max_imag() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c.imag()));
  return m;
}

TrigSpectrum TrigSpectrum::real_projection() const {
  TrigSpectrum out = *this;
  for (auto& c : out.coeffs_) c = {c.real(), 0.0};
  out.real_ = true;
  return out;
}

TrigSpectrum TrigSpectrum::with_support(Interval hint) const {
  TrigSpectrum out = *this;
  out.support_ = hint;
  return out;
}

TrigSpectrum TrigSpectrum::with_tail_mass(double tail) const {
  TrigSpectrum out = *this;
  out.tail_mass_ = tail;
  return out;
}

TrigSpectrum TrigSpectrum::truncated(int max_freq) const {
  const int k_in = this->max_freq();
  std::vector<cplx> c(2 * static_cast<std::size_t>(max_freq) + 1);
  double dropped = 0.0;
  for (int k = -k_in; k <= k_in; ++k) {
    if (std::abs(k) <= max_freq)
      c[k + max_freq] = coeffs_[k + k_in];
    else
      dropped += std::abs(coeffs_[k + k_in]);
  }
  TrigSpectrum out(std::move(c), support_, tail_mass_ + dropped);
  out.real_ = real_;
  return out;
}

TrigSpectrum TrigSpectrum::operator+(const TrigSpectrum& o) const {
  const int k = std::max(max_freq(), o.max_freq());
  std::vector<cplx> c(2 * static_cast<std::size_t>(k) + 1);
  for (int i = -k; i <= k; ++i) c[i + k] = (*this)[i] + o[i];
  Interval hint{std::min(support_.lo, o.support_.lo),
                std::max(support_.hi, o.support_.hi)};
  TrigSpectrum out(std::move(c), hint, tail_mass_ + o.tail_mass_);
  out.real_ = real_ && o.real_;
  return out;
}

TrigSpectrum TrigSpectrum::operator-(const TrigSpectrum& o) const {
  return *this + o * cplx(-1.0, 0.0);
}

TrigSpectrum TrigSpectrum::operator*(cplx s) const {
  TrigSpectrum out = *this;
  for (auto& c : out.coeffs_) c *= s;
  out.tail_mass_ *= std::abs(s);
  out.real_ = real_ && s.imag() == 0.0;
  return out;
}

double pm_norm(const TrigSpectrum& s) {
  double m = 0.0;
  for (const auto& c : s.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

double a_norm(const TrigSpectrum& s) {
  CompensatedSum<double> acc;
  for (const auto& c : s.coeffs()) acc.add(std::abs(c));
  return acc.value();
}

TrigSpectrum reflect(const TrigSpectrum& s) {
  std::vector<cplx> c(s.coeffs().begin(), s.coeffs().end());
  for (auto& x : c) x = std::conj(x);
  const Interval h = s.support_hint();
  TrigSpectrum out(std::move(c), h.mirrored(), s.tail_mass());
  return s.real_coefficients() ? out.real_projection() : out;
}

TrigSpectrum flip(const TrigSpectrum& s) {
  std::vector<cplx> c(s.coeffs().rbegin(), s.coeffs().rend());
  TrigSpectrum out(std::move(c), s.support_hint().mirrored(), s.tail_mass());
  return s.real_coefficients() ? out.real_projection() : out;
}

TrigSpectrum multiply(const TrigSpectrum& s, const TrigSpectrum& phi,
                      int out_max_freq, Exec exec) {
  const int ks = s.max_freq(), kp = phi.max_freq();
  const int kfull = ks + kp;
  if (out_max_freq < 0) out_max_freq = std::max(ks, kp);
  std::vector<cplx> full(2 * static_cast<std::size_t>(kfull) + 1);
  const auto cs = s.coeffs();
  const auto cp = phi.coeffs();
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int k = -kfull; k <= kfull; ++k) {
    CompensatedSum<cplx> acc;
    const int jlo = std::max(-ks, k - kp), jhi = std::min(ks, k + kp);
    for (int j = jlo; j <= jhi; ++j) acc.add(cs[j + ks] * cp[k - j + kp]);
    full[k + kfull] = acc.value();
  }
  // The product is supported in the intersection of the supports.
  const Interval hs = s.support_hint(), hp = phi.support_hint();
  Interval hint{std::max(hs.lo, hp.lo), std::min(hs.hi, hp.hi)};
  if (hint.hi < hint.lo) hint = {0.0, 0.0};
  const double carried = s.tail_mass() * a_norm(phi) + a_norm(s) * phi.tail_mass() +
                         s.tail_mass() * phi.tail_mass();
  TrigSpectrum out = TrigSpectrum(std::move(full), hint, carried).truncated(out_max_freq);
  return (s.real_coefficients() && phi.real_coefficients()) ? out.real_projection() : out;
}

cplx eval_trig_poly(const TrigSpectrum& s, double t) {
  const int k = s.max_freq();
  CompensatedSum<cplx> acc;
  for (int i = -k; i <= k; ++i) {
    const cplx c = s[i];
    if (c == cplx{}) continue;
    acc.add(c * std::polar(1.0, std::remainder(kTwoPi * i * t, kTwoPi)));
  }
  return acc.value();
}

TrigSpectrum windowed_coefficients(const Profile& profile,
                                   const QuadratureGrid& grid, int max_freq,
                                   Exec exec) {
  grid.require_resolves(max_freq);
  const Interval box = bounding_box(profile.support);
  if (!profile.support.empty() && !box.strictly_inside({-0.5, 0.5}))
    throw GeometryError("profile '" + profile.label + "' support " + to_string(box) +
                        " not strictly inside (-1/2, 1/2)");
  std::vector<cplx> c(2 * static_cast<std::size_t>(max_freq) + 1);
  if (!profile.support.empty()) {
    const auto [j0, j1] = grid.active_range(box);
    const auto samples = sample(profile, grid, j0, j1);
    kernels::analysis(samples, j0, grid.twiddles(), max_freq, c, exec);
  }
  return TrigSpectrum(std::move(c), profile.support.empty() ? Interval{} : box);
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const TrigSpectrum& s) {
  os << "k,re,im\n";
  const int k = s.max_freq();
  for (int i = -k; i <= k; ++i)
    os << i << ',' << format_double(s[i].real()) << ',' << format_double(s[i].imag())
       << '\n';
}

TrigSpectrum read_spectrum_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("k,re,im", 0) != 0)
    throw ConfigError("spectrum CSV must start with header k,re,im");
  std::vector<std::pair<int, cplx>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
      throw ConfigError("malformed spectrum CSV row: " + line);
    rows.emplace_back(std::stoi(a), cplx(std::stod(b), std::stod(c)));
  }
  int kmax = 0;
  for (const auto& r : rows) kmax = std::max(kmax, std::abs(r.first));
  std::vector<cplx> coeffs(2 * static_cast<std::size_t>(kmax) + 1);
  for (const auto& r : rows) coeffs[r.first + kmax] = r.second;
  return TrigSpectrum(std::move(coeffs));
}

}  // namespace spectile

namespace spectile {

double estimate_tail(const TrigSpectrum& s, int fit_width) {
  const int k = s.max_freq();
  if (k < 1) return s.tail_mass();
  double amp = 0.0;
  for (int i = std::max(1, k - fit_width + 1); i <= k; ++i) {
    const double w = 1.0 + static_cast<double>(i) * i;
    amp = std::max({amp, std::abs(s[i]) * w, std::abs(s[-i]) * w});
  }
  // sum_{k>K} 1/(1+k^2) <= 1/K, two sides.
  return s.tail_mass() + 2.0 * amp / static_cast<double>(k);
}

}  // namespace spectile
