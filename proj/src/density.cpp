#include "spectile/density.hpp"

#include <algorithm>
#include <cmath>

#include "spectile/errors.hpp"

namespace spectile {

ZeroSetDescriptor ZeroSetDescriptor::outside(const Support& exempt) const {
  ZeroSetDescriptor out;
  for (const auto& iv : intervals) {
    std::vector<Interval> pieces{iv};
    for (const auto& e : exempt) {
      std::vector<Interval> next;
      for (const auto& p : pieces) {
        if (p.hi < e.lo || p.lo > e.hi) {
          next.push_back(p);
          continue;
        }
        if (p.lo < e.lo) next.push_back({p.lo, e.lo});
        if (p.hi > e.hi) next.push_back({e.hi, p.hi});
      }
      pieces = std::move(next);
    }
    out.intervals.insert(out.intervals.end(), pieces.begin(), pieces.end());
  }
  for (double p : points)
    if (std::none_of(exempt.begin(), exempt.end(), [p](const Interval& e) { return e.contains(p); }))
      out.points.push_back(p);
  return out;
}

nlohmann::json ZeroSetDescriptor::to_json() const {
  nlohmann::json iv = nlohmann::json::array();
  for (const auto& i : intervals) iv.push_back({i.lo, i.hi});
  return {{"intervals", iv}, {"points", points}};
}

Profile combine(const std::vector<std::pair<cplx, Profile>>& terms, const std::string& label) {
  Support sup;
  for (const auto& [w, p] : terms)
    if (w != cplx{}) sup.insert(sup.end(), p.support.begin(), p.support.end());
  auto copy = terms;
  return Profile{[copy](double t) {
                   cplx v{};
                   for (const auto& [w, p] : copy)
                     if (w != cplx{}) v += w * p(t);
                   return v;
                 },
                 merged(sup), label};
}

Profile reflected(const Profile& p) {
  auto base = p;
  return Profile{[base](double t) { return std::conj(base(-t)); }, mirrored(p.support),
                 p.label + "~"};
}

DensityFunction::DensityFunction(Profile spectral, std::shared_ptr<const QuadratureGrid> grid)
    : spec_(std::move(spectral)), grid_(std::move(grid)) {
  spec_.support = merged(spec_.support);
  if (spec_.support.empty()) return;
  const Interval box = bounding_box(spec_.support);
  if (!box.strictly_inside({-0.5, 0.5}))
    throw GeometryError("density transform support " + to_string(box) +
                        " escapes (-1/2, 1/2)");
  band_ = std::max(std::abs(box.lo), std::abs(box.hi));
  const auto [j0, j1] = grid_->active_range(box);
  j0_ = j0;
  weights_.resize(j1 - j0);
  const double w = grid_->weight();
  CompensatedSum<double> l1, m2;
  double peak = 0.0;
  for (std::size_t j = j0; j < j1; ++j) {
    const double t = grid_->node(j);
    const cplx v = spec_(t);
    weights_[j - j0] = v * w;
    l1.add(std::abs(v) * w);
    m2.add(std::abs(v) * w * t * t);
    peak = std::max(peak, std::abs(v));
  }
  hat_l1_ = l1.value();
  hat_m2_ = m2.value();
  mass_ = spec_(0.0).real();
  for (std::size_t j = j0; j < j1; ++j) {
    const double t = grid_->node(j);
    if (std::abs(spec_(-t) - std::conj(weights_[j - j0] / w)) > 1e-14 * peak) {
      hermitian_ = false;
      break;
    }
  }
}

DensityFunction make_density(Profile spectral, std::shared_ptr<const QuadratureGrid> grid) {
  return DensityFunction(std::move(spectral), std::move(grid));
}

std::vector<cplx> DensityFunction::evaluate_complex(std::span<const double> xs, Exec exec) const {
  std::vector<cplx> out(xs.size());
  if (weights_.empty()) return out;
  kernels::exp_sum(grid_->node(j0_), grid_->spacing(), weights_, xs, +1.0, out, exec);
  return out;
}

std::vector<double> DensityFunction::evaluate(std::span<const double> xs, Exec exec) const {
  const auto c = evaluate_complex(xs, exec);
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
  return out;
}

std::shared_ptr<const kernels::UniformTable> DensityFunction::table(double half_range,
                                                                    double step,
                                                                    Exec exec) const {
  const auto n = static_cast<std::int64_t>(std::ceil(half_range / step));
  std::vector<double> ys(2 * n + 1);
  for (std::int64_t i = -n; i <= n; ++i) ys[i + n] = static_cast<double>(i) * step;
  return std::make_shared<kernels::UniformTable>(-static_cast<double>(n) * step, step,
                                                 evaluate(ys, exec));
}

double DensityFunction::interpolation_bound(double step, double reach) const {
  return kernels::UniformTable::stencil_factor() *
             std::pow(step * kTwoPi * band_, kernels::UniformTable::kStencil) * hat_l1_ +
         kernels::UniformTable::rounding_bound(reach, hat_l1_, kTwoPi * band_ * hat_l1_);
}

ZeroSetDescriptor DensityFunction::zero_set(std::size_t samples) const {
  ZeroSetDescriptor z;
  std::vector<cplx> v(samples + 1);
  bool real = true;
  for (std::size_t i = 0; i <= samples; ++i) {
    v[i] = spec_(-0.5 + static_cast<double>(i) / static_cast<double>(samples));
    if (v[i].imag() != 0.0) real = false;
  }
  auto at = [samples](std::size_t i) { return -0.5 + static_cast<double>(i) / static_cast<double>(samples); };
  std::size_t i = 0;
  while (i <= samples) {
    if (v[i] != cplx{}) {
      ++i;
      continue;
    }
    std::size_t e = i;
    while (e + 1 <= samples && v[e + 1] == cplx{}) ++e;
    if (e == i && i > 0 && i < samples)
      z.points.push_back(at(i));
    else
      z.intervals.push_back({at(i), at(e)});
    i = e + 1;
  }
  if (real) {
    for (std::size_t k = 0; k < samples; ++k) {
      const double a = v[k].real(), b = v[k + 1].real();
      if (a == 0.0 || b == 0.0 || (a > 0.0) == (b > 0.0)) continue;
      double lo = at(k), hi = at(k + 1), flo = a;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = spec_(mid).real();
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((fm > 0.0) == (flo > 0.0)) { lo = mid; flo = fm; } else hi = mid;
      }
      z.points.push_back(0.5 * (lo + hi));
    }
    std::sort(z.points.begin(), z.points.end());
  }
  return z;
}

}  // namespace spectile
