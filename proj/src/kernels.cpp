#include "spectile/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "spectile/errors.hpp"

namespace spectile {

TwiddleTable::TwiddleTable(std::size_t m) : table_(m), mask_(m - 1) {
  if (m == 0 || (m & (m - 1)) != 0)
    throw ConfigError("twiddle table size must be a power of two");
  // Fill one octant accurately and use symmetries for the rest, so that
  // exact values (+-1, +-i) come out exact.
  const double step = kTwoPi / static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t q = (4 * k) / m;       // quadrant
    std::size_t r = k - q * (m / 4);   // offset inside quadrant
    double c, s;
    if (m >= 4) {
      if (2 * r <= m / 4) {
        c = std::cos(step * static_cast<double>(r));
        s = std::sin(step * static_cast<double>(r));
      } else {
        std::size_t rr = m / 4 - r;
        c = std::sin(step * static_cast<double>(rr));
        s = std::cos(step * static_cast<double>(rr));
      }
      switch (q) {
        case 0: table_[k] = {c, s}; break;
        case 1: table_[k] = {-s, c}; break;
        case 2: table_[k] = {-c, -s}; break;
        default: table_[k] = {s, -c}; break;
      }
    } else {
      table_[k] = std::polar(1.0, step * static_cast<double>(k));
    }
  }
}

namespace kernels {
double UniformTable::lebesgue_constant() {
  double best = 0.0;
  const int lo = kStencil / 2 - 1;
  for (int q = 0; q <= 1000; ++q) {
    const double s = lo + q / 1000.0;
    double sum = 0.0;
    for (int i = 0; i < kStencil; ++i) {
      double l = 1.0;
      for (int m = 0; m < kStencil; ++m)
        if (m != i) l *= (s - m) / static_cast<double>(i - m);
      sum += std::abs(l);
    }
    best = std::max(best, sum);
  }
  return best;
}

double UniformTable::rounding_bound(double reach, double f_max, double fprime_max) {
  constexpr double eps = 0x1.0p-52;
  return eps * (8.0 * lebesgue_constant() * f_max + 4.0 * reach * fprime_max);
}

namespace {

inline double alternating(std::int64_t k) { return (k & 1) ? -1.0 : 1.0; }

}  // namespace

void analysis(std::span<const cplx> samples, std::size_t j0,
              const TwiddleTable& tw, int max_freq, std::span<cplx> out,
              Exec exec) {
  assert(out.size() == static_cast<std::size_t>(2 * max_freq + 1));
  const double inv_m = 1.0 / static_cast<double>(tw.size());
  const std::int64_t count = static_cast<std::int64_t>(samples.size());
  const std::int64_t nfreq = 2 * static_cast<std::int64_t>(max_freq) + 1;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::int64_t idx = 0; idx < nfreq; ++idx) {
    const std::int64_t k = idx - max_freq;
    CompensatedSum<cplx> acc;
    for (std::int64_t j = 0; j < count; ++j) {
      const std::int64_t node = static_cast<std::int64_t>(j0) + j;
      acc.add(samples[j] * tw(-k * node));
    }
    out[idx] = acc.value() * (alternating(k) * inv_m);
  }
}

void synthesis(std::span<const cplx> coeffs, const TwiddleTable& tw,
               std::size_t j0, std::span<cplx> out, Exec exec) {
  const std::int64_t max_freq = (static_cast<std::int64_t>(coeffs.size()) - 1) / 2;
  const std::int64_t count = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::int64_t j = 0; j < count; ++j) {
    const std::int64_t node = static_cast<std::int64_t>(j0) + j;
    CompensatedSum<cplx> acc;
    for (std::int64_t k = -max_freq; k <= max_freq; ++k)
      acc.add(coeffs[k + max_freq] * (alternating(k) * tw(k * node)));
    out[j] = acc.value();
  }
}

void power_synthesis(std::span<const std::int64_t> index,
                     std::span<const double> values, int order,
                     const TwiddleTable& tw, std::size_t j0,
                     std::span<cplx> out, Exec exec) {
  assert(index.size() == values.size());
  if (order > 64)
    throw ConfigError("power synthesis order above 64");
  if (order < 2) {
    std::fill(out.begin(), out.end(), cplx{});
    return;
  }
  const std::size_t terms = static_cast<std::size_t>(order - 1);  // p = 2..order
  const std::size_t count_n = index.size();
  // powers[i * terms + (p - 2)] = (+-1)^{n_i} a_i^p
  std::vector<double> powers(count_n * terms);
  for (std::size_t i = 0; i < count_n; ++i) {
    double a = values[i];
    double ap = a * a * alternating(index[i]);
    for (std::size_t p = 0; p < terms; ++p) {
      powers[i * terms + p] = ap;
      ap *= a;
    }
  }
  std::vector<double> inv_fact(terms);
  {
    double f = 2.0;
    for (std::size_t p = 0; p < terms; ++p) {
      inv_fact[p] = 1.0 / f;
      f *= static_cast<double>(p + 3);
    }
  }
  const double m = static_cast<double>(tw.size());
  const std::int64_t count = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::int64_t j = 0; j < count; ++j) {
    const std::int64_t node = static_cast<std::int64_t>(j0) + j;
    std::array<cplx, 64> acc{};
    for (std::size_t i = 0; i < count_n; ++i) {
      const cplx w = tw(index[i] * node);
      const double* pw = &powers[i * terms];
      for (std::size_t p = 0; p < terms; ++p) acc[p] += pw[p] * w;
    }
    const double t = -0.5 + static_cast<double>(node) / m;
    const cplx z(0.0, kTwoPi * t);
    cplx zp = z;  // z^{p-1}, starting at p = 2
    cplx total{};
    for (std::size_t p = 0; p < terms; ++p) {
      total += zp * inv_fact[p] * acc[p];
      zp *= z;
    }
    out[j] = total;
  }
}

void exp_sum(double t0, double dt, std::span<const cplx> weights,
             std::span<const double> xs, double sign, std::span<cplx> out,
             Exec exec) {
  constexpr std::size_t kBlock = 32;
  const std::int64_t nx = static_cast<std::int64_t>(xs.size());
  const std::size_t nw = weights.size();
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::int64_t i = 0; i < nx; ++i) {
    const double x = xs[i];
    const cplx step = std::polar(1.0, sign * kTwoPi * x * dt);
    CompensatedSum<cplx> acc;
    for (std::size_t jb = 0; jb < nw; jb += kBlock) {
      const double phase = sign * kTwoPi * x * (t0 + dt * static_cast<double>(jb));
      cplx e = std::polar(1.0, std::remainder(phase, kTwoPi));
      const std::size_t je = std::min(nw, jb + kBlock);
      for (std::size_t j = jb; j < je; ++j) {
        acc.add(weights[j] * e);
        e *= step;
      }
    }
    out[i] = acc.value();
  }
}

UniformTable::UniformTable(double y0, double h, std::vector<double> values)
    : y0_(y0), h_(h), values_(std::move(values)), bary_(kStencil) {
  if (values_.size() < static_cast<std::size_t>(kStencil))
    throw ConfigError("interpolation table too short");
  // Barycentric weights for equispaced nodes: (-1)^i binom(n-1, i).
  double c = 1.0;
  for (int i = 0; i < kStencil; ++i) {
    bary_[i] = (i % 2 ? -c : c);
    c = c * static_cast<double>(kStencil - 1 - i) / static_cast<double>(i + 1);
  }
}

double UniformTable::operator()(double y) const {
  const double u = (y - y0_) / h_;
  const double cell = std::floor(u);
  std::int64_t start = static_cast<std::int64_t>(cell) - (kStencil / 2 - 1);
  const std::int64_t last = static_cast<std::int64_t>(values_.size()) - kStencil;
  if (start < 0 || start > last)
    throw ContractViolation("interpolation point " + std::to_string(y) +
                            " outside table");
  const double s = u - static_cast<double>(start);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < kStencil; ++i) {
    const double d = s - static_cast<double>(i);
    if (d == 0.0) return values_[start + i];
    const double w = bary_[i] / d;
    num += w * values_[start + i];
    den += w;
  }
  return num / den;
}

double UniformTable::stencil_factor() {
  double best = 0.0;
  const int lo = kStencil / 2 - 1;
  for (int q = 0; q <= 1000; ++q) {
    const double s = lo + q / 1000.0;
    double prod = 1.0;
    for (int i = 0; i < kStencil; ++i) prod *= std::abs(s - i);
    best = std::max(best, prod);
  }
  double fact = 1.0;
  for (int i = 2; i <= kStencil; ++i) fact *= i;
  return best / fact;
}

namespace {

// Exceptions must not escape an OpenMP region, so coverage is checked first.
void require_coverage(const UniformTable& f, std::span<const double> points,
                      std::span<const double> xs) {
  if (points.empty() || xs.empty()) return;
  const auto [pmin, pmax] = std::minmax_element(points.begin(), points.end());
  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  const double margin = f.step() * UniformTable::kStencil;
  if (*xmin - *pmax < f.y0() + margin || *xmax - *pmin > f.y_max() - margin)
    throw ContractViolation("translate sum arguments exceed the density table");
}

}  // namespace

void perturbation_sum(const UniformTable& f, std::span<const double> moved,
                      std::span<const double> home, std::span<const double> xs,
                      std::span<double> out, Exec exec) {
  assert(moved.size() == home.size());
  require_coverage(f, moved, xs);
  require_coverage(f, home, xs);
  const std::int64_t nx = static_cast<std::int64_t>(xs.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::int64_t i = 0; i < nx; ++i) {
    CompensatedSum<double> acc;
    for (std::size_t k = 0; k < moved.size(); ++k) {
      acc.add(f(xs[i] - moved[k]));
      acc.add(-f(xs[i] - home[k]));
    }
    out[i] = acc.value();
  }
}

void point_sum(const UniformTable& f, std::span<const double> points,
               std::span<const double> xs, std::span<double> out, Exec exec) {
  require_coverage(f, points, xs);
  const std::int64_t nx = static_cast<std::int64_t>(xs.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::int64_t i = 0; i < nx; ++i) {
    CompensatedSum<double> acc;
    for (double p : points) acc.add(f(xs[i] - p));
    out[i] = acc.value();
  }
}

}  // namespace kernels
}  // namespace spectile
