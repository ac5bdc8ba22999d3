#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectile/geometry.hpp"
#include "spectile/kernels.hpp"
#include "spectile/quadrature.hpp"

namespace spectile {

/// Closure of the zero set of a sampled transform: interval runs of exact
/// zeros plus isolated sign-change zeros (real transforms only).
struct ZeroSetDescriptor {
  std::vector<Interval> intervals;
  std::vector<double> points;

  /// Removes everything inside the union `exempt` (intervals are clipped).
  ZeroSetDescriptor outside(const Support& exempt) const;
  bool operator==(const ZeroSetDescriptor&) const = default;
  nlohmann::json to_json() const;
};

/// f in L^1(R) given by a compactly supported transform f-hat.
class DensityFunction {
 public:
  /// Throws GeometryError unless supp f-hat lies strictly inside (-1/2, 1/2).
  DensityFunction(Profile spectral, std::shared_ptr<const QuadratureGrid> grid);

  cplx spectral(double t) const { return spec_(t); }
  const Profile& spectral_profile() const { return spec_; }
  const Support& support() const { return spec_.support; }
  /// f-hat(0) = integral of f.
  double mass() const { return mass_; }
  /// max over supp f-hat of |t|.
  double bandlimit() const { return band_; }
  /// (1/M) sum |f-hat(t_j)|, the trapezoid value of ||f-hat||_1.
  double hat_l1() const { return hat_l1_; }
  /// (1/M) sum |f-hat(t_j)| t_j^2 (second-moment bound for |f''| / (2 pi)^2).
  double hat_second_moment() const { return hat_m2_; }
  /// True if f-hat(-t) = conj f-hat(t) at every grid node.
  bool hermitian() const { return hermitian_; }
  const QuadratureGrid& grid() const { return *grid_; }

  /// f(x) = int f-hat(t) e^{2 pi i x t} dt by the trapezoid rule.
  std::vector<cplx> evaluate_complex(std::span<const double> xs, Exec exec = Exec::parallel) const;
  /// Real part of evaluate_complex (f real for hermitian f-hat).
  std::vector<double> evaluate(std::span<const double> xs, Exec exec = Exec::parallel) const;

  /// Uniform table of f on [-half_range, half_range] with step h.
  std::shared_ptr<const kernels::UniformTable> table(double half_range, double step = 1.0 / 16,
                                                     Exec exec = Exec::parallel) const;
  /// Bound on one table lookup at |y| <= reach: stencil factor h^12 (2 pi B)^12
  /// ||f-hat||_1 plus the floating-point rounding bound of the table.
  double interpolation_bound(double step = 1.0 / 16, double reach = 0.0) const;

  ZeroSetDescriptor zero_set(std::size_t samples = 65536) const;

 private:
  Profile spec_;
  std::shared_ptr<const QuadratureGrid> grid_;
  std::size_t j0_ = 0;
  std::vector<cplx> weights_;  // f-hat(t_j) / M on [j0, j0 + size)
  double mass_ = 0, band_ = 0, hat_l1_ = 0, hat_m2_ = 0;
  bool hermitian_ = true;
};

/// Density from a spectral profile (support must lie in (-1/2, 1/2)).
DensityFunction make_density(Profile spectral, std::shared_ptr<const QuadratureGrid> grid);

/// Sum of scaled profiles; supports are merged.
Profile combine(const std::vector<std::pair<cplx, Profile>>& terms, const std::string& label);

/// t -> conj p(-t)
Profile reflected(const Profile& p);

}  // namespace spectile
