#pragma once

#include <memory>
#include <vector>

#include <json.hpp>

#include "spectile/density.hpp"
#include "spectile/spectral_target.hpp"
#include "spectile/window.hpp"

namespace spectile {

/// c(k), k = -N..N: 1.25 x (sampled max of |phi-hat| over |x - k| <= 1/2 plus
/// a slope allowance between samples).
std::vector<double> envelope_bounds(const Profile& phi, const QuadratureGrid& grid, int n_env,
                                    int samples_per_unit = 32, Exec exec = Exec::parallel);

/// Pointwise maximum of two sequences of equal length.
std::vector<double> pointwise_max(const std::vector<double>& x, const std::vector<double>& y);

/// Default d(k) = 2 c(k) + 2^{-|k|}.
std::vector<double> default_d(const std::vector<double>& c);

struct EnvelopeCertificate {
  double chi_hat_min = 0.0;  // min of chi-hat on [-1/2, 1/2] (must be >= 1)
  double min_gap = 0.0;      // min over probed x of tau-hat(x) - d(k), |x - k| <= 1/2
  double tau_at_zero = 0.0;  // tau(0) = chi(0) sum d
  nlohmann::json to_json() const;
};

struct Envelope {
  SmoothWindow tau;
  EnvelopeCertificate certificate;
};

/// tau(t) = chi(t) sum d(n) e^{2 pi i n t} with chi-hat >= 1 on [-1/2, 1/2] and
/// supp chi in (-a, a). Throws NumericFailure if either certificate fails.
Envelope envelope_tau(const std::vector<double>& d, double a, int samples_per_unit = 16);

struct ScanResult {
  double min_value = 0.0;
  double argmin = 0.0;
  double error_bound = 0.0;  // h^2/8 sup|f''| between samples
  std::vector<double> xs;
  std::vector<double> values;
};

/// Dense scan of f over [lo, hi] with spacing step.
ScanResult min_value_scan(const DensityFunction& f, double lo, double hi, double step,
                          Exec exec = Exec::parallel);

struct PositivePair {
  DensityFunction f;
  DensityFunction g;
  std::vector<double> c;
  std::vector<double> d;
  Envelope envelope;
  ScanResult scan_f;
  ScanResult scan_g;
  double w = 0.0;
  /// w / tau(0) * min_{|k| <= kmax} (d(k) - c(k)), kmax covering the scan range.
  double margin = 0.0;
  int retries = 0;
  nlohmann::json to_json() const;
};

struct PositivityOptions {
  int n_env = 128;
  double scan_lo = -100.0;
  double scan_hi = 100.0;
  double scan_step = 1e-2;
  Exec exec = Exec::parallel;
};

/// f-hat = w/tau(0) [tau + (psi + psi~)/2] and likewise g with phi. Both
/// scanned for positivity; on failure d is doubled once and the
/// construction retried, then NumericFailure.
PositivePair positive_pair(double w, const Profile& psi, const Profile& phi, const Geometry& g,
                           std::shared_ptr<const QuadratureGrid> grid,
                           const PositivityOptions& opt = {});

}  // namespace spectile
