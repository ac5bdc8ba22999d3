#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "spectile/geometry.hpp"
#include "spectile/quadrature.hpp"
#include "spectile/trig_spectrum.hpp"
#include "spectile/window.hpp"

namespace spectile {

enum class Symmetry {
  hermitian_even,  // S(-t) = conj S(t); coefficients real
  one_sided,       // supported in (a, b)
};

std::string to_string(Symmetry s);

/// Smooth target profile S with a cached spectrum on a fixed grid.
class SpectralTarget {
 public:
  /// Samples `profile` on `grid` and caches coefficients for |k| <= max_freq.
  /// Hermitian-even targets must produce imaginary parts <= 1e-13 and are
  /// then stored with exactly real coefficients.
  SpectralTarget(Profile profile, Symmetry symmetry, const QuadratureGrid& grid,
                 int max_freq, Exec exec = Exec::parallel);

  /// Identically zero hermitian-even target.
  static SpectralTarget zero(int max_freq);

  /// Sum of windows (JSON {"symmetry": ..., "terms": [window, ...]}).
  static SpectralTarget from_json(const nlohmann::json& j, const Geometry& g,
                                  const QuadratureGrid& grid, int max_freq);

  cplx operator()(double t) const { return profile_(t); }
  const Profile& profile() const { return profile_; }
  const Support& support() const { return profile_.support; }
  Symmetry symmetry() const { return symmetry_; }
  const TrigSpectrum& spectrum() const { return spectrum_; }
  bool is_zero() const { return zero_; }

  /// r * S (spectrum scaled exactly).
  SpectralTarget scaled(double r) const;
  /// Pointwise product with a window profile (spectrum recomputed on `grid`).
  SpectralTarget times(const Profile& w, Symmetry symmetry, const QuadratureGrid& grid,
                       Exec exec = Exec::parallel) const;

 private:
  SpectralTarget() = default;

  Profile profile_;
  Symmetry symmetry_ = Symmetry::hermitian_even;
  TrigSpectrum spectrum_;
  bool zero_ = false;

  friend SpectralTarget build_Tr(const SpectralTarget& s, double r);
};

/// Sum of window profiles as one profile.
Profile sum_profile(const std::vector<SmoothWindow>& terms, const std::string& label);

/// The S-part r (S + S~) of T_r = delta_0 + r (S + S~), S~(t) = conj S(-t).
/// Coefficients are r (c_k + conj c_k) = 2 r Re c_k.
SpectralTarget build_Tr(const SpectralTarget& s, double r);

}  // namespace spectile
