#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "spectile/geometry.hpp"
#include "spectile/kernels.hpp"
#include "spectile/quadrature.hpp"

namespace spectile {

/// rho(u) = exp(-1 / (1 - u^2)) on (-1, 1), zero outside.
double mollifier_kernel(double u);

/// Normalized smoothstep on [-1, 1]: int_{-1}^u rho / int_{-1}^1 rho.
/// Exactly 0 at u <= -1, 1 at u >= 1, and smoothstep(-u) = 1 - smoothstep(u).
double smoothstep(double u);

/// rho-hat(xi) = int rho(u) e^{-2 pi i u xi} du (real and even).
double mollifier_kernel_hat(double xi);

enum class WindowMode { cutoff, inverse_slope, bump, envelope, mollifier };

std::string to_string(WindowMode m);
WindowMode window_mode_from_string(const std::string& s);

/// Closed-form C-infinity profile built from the mollifier kernel.
///
///  - cutoff:        1 on the plateau, 0 outside the support, smoothstep ramps.
///  - inverse_slope: -W(t) / (2 pi i t) with W = cutoff([-b,b], (-l,l)) -
///                   cutoff([-a/2,a/2], (-a,a)); equals -1/(2 pi i t) on a<=|t|<=b.
///  - bump:          amplitude * exp(1 - 1/(1-u^2)), u the affine image of the support.
///  - mollifier:     chi = lambda (rho_h * rho_h), rho_h(t) = rho(t/h), with lambda
///                   chosen so that chi-hat >= 1 on [-1/2, 1/2].
///  - envelope:      tau(t) = chi(t) sum_{|n|<=N} d(n) e^{2 pi i n t}.
class SmoothWindow {
 public:
  static SmoothWindow cutoff(Interval plateau, Interval support, double amplitude = 1.0);
  static SmoothWindow inverse_slope(const Geometry& g);
  static SmoothWindow bump(Interval support, double amplitude = 1.0);
  static SmoothWindow mollifier(double h);
  /// d holds d(-N..N).
  static SmoothWindow envelope(std::vector<double> d, double h);

  /// JSON {mode, plateau, support, amplitude, frequencyCutoff}; inverse_slope
  /// reads a, b, l from `g` (plateau/support are derived); mollifier and
  /// envelope read "h" and (envelope) "d".
  static SmoothWindow from_json(const nlohmann::json& j, const Geometry& g);
  nlohmann::json to_json() const;

  cplx operator()(double t) const;
  Profile profile(const std::string& label = "") const;

  WindowMode mode() const { return mode_; }
  const Interval& plateau() const { return plateau_; }
  const Interval& support() const { return support_; }
  double amplitude() const { return amplitude_; }
  int frequency_cutoff() const { return frequency_cutoff_; }
  SmoothWindow with_frequency_cutoff(int k) const;
  /// Support as a union of open intervals (tight for inverse_slope).
  Support support_set() const;

  // Mollifier / envelope data.
  double h() const { return h_; }
  double lambda() const { return lambda_; }
  const std::vector<double>& d() const { return d_; }
  /// chi-hat(x) = lambda (h rho-hat(h x))^2.
  double chi_hat(double x) const;
  /// chi(0) = lambda h int rho^2 (= int chi-hat).
  double chi_at_zero() const;
  /// tau-hat(x) = sum_n d(n) chi-hat(x - n) (envelope mode).
  double tau_hat(double x) const;

 private:
  double chi(double t) const;
  double cutoff_value(double t, const Interval& plateau, const Interval& support) const;

  WindowMode mode_ = WindowMode::cutoff;
  Interval plateau_{};
  Interval support_{};
  double amplitude_ = 1.0;
  int frequency_cutoff_ = 512;
  double a_ = 0.0;  // inverse_slope inner parameter
  double h_ = 0.0;
  double lambda_ = 0.0;
  std::vector<double> d_;
};

}  // namespace spectile
