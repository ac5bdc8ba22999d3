#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectile/density.hpp"
#include "spectile/lattice.hpp"
#include "spectile/solver.hpp"
#include "spectile/spectral_target.hpp"
#include "spectile/window.hpp"

namespace spectile {

/// Translate-sum samples with a per-point truncation/interpolation budget.
struct TranslateSamples {
  std::vector<double> values;
  double budget = 0.0;
};

/// sum_{lambda} f(x - lambda) = f-hat(0) + sum_n [f(x - lambda_n) - f(x - n)] over
/// the finitely many n with lambda_n != n (Poisson for Z; supp f-hat in (-1, 1)).
/// f is tabulated with spacing `step` and 12-point Lagrange interpolation.
TranslateSamples translate_sum_direct(const DensityFunction& f, const PerturbedLattice& lat,
                                      std::span<const double> xs, double step = 1.0 / 16,
                                      Exec exec = Exec::parallel);

/// Brute-force sum over an explicit finite point list, with a decay-based
/// budget for the points beyond the list.
TranslateSamples translate_sum_points(const DensityFunction& f, std::span<const double> points,
                                      std::span<const double> xs, double step = 1.0 / 16,
                                      Exec exec = Exec::parallel);

/// f-hat(0) + int f-hat(t) S(t) e^{2 pi i x t} dt: the inverse transform of
/// f-hat (delta_0 + S) on the window. Throws ContractViolation if supp f-hat
/// leaves the window.
std::vector<double> translate_sum_spectral(const DensityFunction& f, const WindowSpectrum& w,
                                           std::span<const double> xs,
                                           Exec exec = Exec::parallel);

enum class Verdict { tiling, not_tiling, inconclusive };
std::string to_string(Verdict v);

struct TilingReport {
  double level = 0.0;
  double sup_deviation = 0.0;
  double oracle_agreement = 0.0;
  double truncation_budget = 0.0;
  double tol = 0.0;
  Verdict verdict = Verdict::inconclusive;

  nlohmann::json to_json() const;
};

/// level = mean(direct); tiling iff sup-deviation <= tol and the two paths
/// agree to tol; not-tiling iff sup-deviation >= 10 tol + budget (paths
/// agreeing to tol + budget); inconclusive otherwise.
TilingReport assess_tiling(std::span<const double> direct, std::span<const double> spectral,
                           double budget, double tol);

/// count equispaced points on [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, std::size_t count);

/// CSV "x,direct,spectral,deviation" (deviation = direct - level).
void write_samples_csv(std::ostream& os, std::span<const double> xs,
                       std::span<const double> direct, std::span<const double> spectral,
                       double level);

struct TilingPair {
  DensityFunction f;
  DensityFunction g;
  ZeroSetDescriptor zero_f;
  ZeroSetDescriptor zero_g;
  Support exemption;  // symmetric; descriptors are compared outside it
};

/// f-hat = w tau + psi + psi~, g-hat = w tau + phi + phi~.
/// psi, phi one-sided in (a, b); tau supported in (-a, a) with tau(0) = 1.
/// The zero sets of psi and phi (and hence of f-hat and g-hat) must agree
/// outside the exemption set `exempt` (mirrored automatically).
TilingPair construct_pair(double w, const SpectralTarget& psi, const SpectralTarget& phi,
                          const SmoothWindow& tau, const Support& exempt, const Geometry& g,
                          std::shared_ptr<const QuadratureGrid> grid);

/// Shared by construct_pair and the positivity lift.
Support symmetric_exemption(const Support& one_side);

}  // namespace spectile
