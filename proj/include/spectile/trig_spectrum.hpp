#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spectile/geometry.hpp"
#include "spectile/kernels.hpp"
#include "spectile/quadrature.hpp"

namespace spectile {

/// Truncated Fourier coefficient sequence c_k, |k| <= K, of a distribution
/// on the circle supported in `support_hint`. Immutable.
class TrigSpectrum {
 public:
  TrigSpectrum() : coeffs_(1) {}
  explicit TrigSpectrum(std::vector<cplx> coeffs, Interval support_hint = {-0.5, 0.5},
                        double tail_mass = 0.0);

  static TrigSpectrum zero(int max_freq);
  /// Single coefficient `value` at frequency k (max_freq >= |k|).
  static TrigSpectrum monomial(int k, cplx value, int max_freq);

  int max_freq() const { return static_cast<int>(coeffs_.size() / 2); }
  /// c_k, or 0 when |k| > K.
  cplx operator[](int k) const {
    const int kk = max_freq();
    return (k < -kk || k > kk) ? cplx{} : coeffs_[k + kk];
  }
  std::span<const cplx> coeffs() const { return coeffs_; }
  const Interval& support_hint() const { return support_; }
  /// Mass dropped by truncation (sum of dropped |c_k|, or an estimate of it).
  double tail_mass() const { return tail_mass_; }

  /// True once the real-coefficient flag has been asserted.
  bool real_coefficients() const { return real_; }
  double max_imag() const;
  /// Drops imaginary parts and asserts the real-coefficient flag.
  TrigSpectrum real_projection() const;

  TrigSpectrum with_support(Interval hint) const;
  TrigSpectrum with_tail_mass(double tail) const;
  /// Re-truncate (or zero-pad) to max_freq; dropped A-mass goes to the tail.
  TrigSpectrum truncated(int max_freq) const;

  TrigSpectrum operator+(const TrigSpectrum& o) const;
  TrigSpectrum operator-(const TrigSpectrum& o) const;
  TrigSpectrum operator*(cplx s) const;

 private:
  std::vector<cplx> coeffs_;
  Interval support_{-0.5, 0.5};
  double tail_mass_ = 0.0;
  bool real_ = false;
};

/// max_k |c_k|
double pm_norm(const TrigSpectrum& s);
/// sum_k |c_k|
double a_norm(const TrigSpectrum& s);

/// Spectrum of t -> conj(S(-t)): c'_k = conj(c_k).
TrigSpectrum reflect(const TrigSpectrum& s);

/// Spectrum of t -> S(-t): c'_k = c_{-k}.
TrigSpectrum flip(const TrigSpectrum& s);

/// Coefficient convolution (product of the represented objects). The full
/// product has max_freq K_s + K_phi; it is re-truncated to `out_max_freq`
/// (default max(K_s, K_phi)) and the dropped A-mass is recorded as tail.
TrigSpectrum multiply(const TrigSpectrum& s, const TrigSpectrum& phi,
                      int out_max_freq = -1, Exec exec = Exec::parallel);

/// sum_{|k|<=K} c_k e^{2 pi i k t}, compensated, fixed order.
cplx eval_trig_poly(const TrigSpectrum& s, double t);

/// Trapezoid Fourier coefficients c_k = sum_j w profile(t_j) e^{-2 pi i k t_j}.
/// The profile must be supported strictly inside (-1/2, 1/2).
TrigSpectrum windowed_coefficients(const Profile& profile,
                                   const QuadratureGrid& grid, int max_freq,
                                   Exec exec = Exec::parallel);

/// CSV with header "k,re,im".
void write_csv(std::ostream& os, const TrigSpectrum& s);
TrigSpectrum read_spectrum_csv(std::istream& is);

/// Shortest round-trip decimal form used in every emitted file.
std::string format_double(double x);

}  // namespace spectile

namespace spectile {

/// Tail mass sum_{|k|>K} |c_k| extrapolated from a c/(1+k^2) envelope fitted
/// to the outermost `fit_width` coefficients on each side.
double estimate_tail(const TrigSpectrum& s, int fit_width = 16);

}  // namespace spectile
