#pragma once

// Data-parallel kernels. Every kernel takes an Exec policy; the parallel
// variant splits the outer index across OpenMP threads while the inner
// reduction runs in a fixed order, so serial and parallel results are
// bit-identical.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace spectile {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

enum class Exec { serial, parallel };

/// Neumaier-compensated accumulator for double or complex<double>.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    if constexpr (std::is_same_v<T, double>) {
      add_real(sum_, comp_, x);
    } else {
      double sr = sum_.real(), cr = comp_.real();
      double si = sum_.imag(), ci = comp_.imag();
      add_real(sr, cr, x.real());
      add_real(si, ci, x.imag());
      sum_ = T(sr, si);
      comp_ = T(cr, ci);
    }
  }
  T value() const { return sum_ + comp_; }

 private:
  static void add_real(double& s, double& c, double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  T sum_{};
  T comp_{};
};

/// Table of e^{2 pi i m / M} for a power-of-two M.
class TwiddleTable {
 public:
  explicit TwiddleTable(std::size_t m);

  std::size_t size() const { return table_.size(); }
  cplx operator()(std::int64_t m) const {
    return table_[static_cast<std::size_t>(m) & mask_];
  }

 private:
  std::vector<cplx> table_;
  std::size_t mask_;
};

namespace kernels {

// All grid kernels use the periodic trapezoid nodes t_j = -1/2 + j/M on
// [-1/2, 1/2), restricted to an active node range [j0, j1).

/// c_k = (1/M) sum_j f_j e^{-2 pi i k t_j}, k = -K..K; out has 2K+1 entries.
void analysis(std::span<const cplx> samples, std::size_t j0,
              const TwiddleTable& tw, int max_freq, std::span<cplx> out,
              Exec exec);

/// v_j = sum_k c_k e^{2 pi i k t_j} for j in [j0, j0 + out.size()).
void synthesis(std::span<const cplx> coeffs, const TwiddleTable& tw,
               std::size_t j0, std::span<cplx> out, Exec exec);

/// Nonlinear part of the lattice operator on the grid:
///   v_j = sum_{p=2}^{order} (2 pi i t_j)^{p-1} / p! * sum_i a_i^p e^{2 pi i n_i t_j}
/// for the sparse sequence (n_i, a_i).
void power_synthesis(std::span<const std::int64_t> index,
                     std::span<const double> values, int order,
                     const TwiddleTable& tw, std::size_t j0,
                     std::span<cplx> out, Exec exec);

/// out_i = sum_j w_j exp(sign * 2 pi i x_i (t0 + j dt)), compensated.
void exp_sum(double t0, double dt, std::span<const cplx> weights,
             std::span<const double> xs, double sign, std::span<cplx> out,
             Exec exec);

/// Translate sum over a finite perturbation of an integer lattice, with
/// f given by a uniform table and local Lagrange interpolation:
///   out_i = sum_k [ f(x_i - moved_k) - f(x_i - home_k) ].
class UniformTable;
void perturbation_sum(const UniformTable& f, std::span<const double> moved,
                      std::span<const double> home, std::span<const double> xs,
                      std::span<double> out, Exec exec);

/// Brute-force sum_k f(x_i - p_k) over an explicit point list.
void point_sum(const UniformTable& f, std::span<const double> points,
               std::span<const double> xs, std::span<double> out, Exec exec);

/// Samples of a band-limited real function on y0 + m h with 12-point
/// centered Lagrange interpolation. Values outside the table are an error.
class UniformTable {
 public:
  static constexpr int kStencil = 12;

  UniformTable(double y0, double h, std::vector<double> values);

  double operator()(double y) const;
  double y0() const { return y0_; }
  double step() const { return h_; }
  double y_max() const { return y0_ + h_ * static_cast<double>(values_.size() - 1); }
  /// max over a cell of prod_i |s - i| / n! for the stencil; interpolation
  /// error is at most this times h^n max|f^(n)|.
  static double stencil_factor();
  /// Lebesgue constant of the stencil on its central cell, max sum |l_i(s)|.
  static double lebesgue_constant();
  /// Floating-point error of one lookup at |y| <= reach: rounding of the
  /// stencil sum (Lebesgue constant x f_max) plus the argument rounding
  /// (|y| eps) x max |f'|.
  static double rounding_bound(double reach, double f_max, double fprime_max);

 private:
  double y0_;
  double h_;
  std::vector<double> values_;
  std::vector<double> bary_;
};

}  // namespace kernels
}  // namespace spectile
