#include "spectile/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "spectile/errors.hpp"

namespace spectile {

namespace {

double table_half_range(std::span<const double> xs, std::span<const double> pts, double step) {
  double far = 0.0;
  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  const auto [pmin, pmax] = std::minmax_element(pts.begin(), pts.end());
  far = std::max(std::abs(*xmax - *pmin), std::abs(*xmin - *pmax));
  return far + step * (kernels::UniformTable::kStencil + 2);
}

void require_real(const DensityFunction& f) {
  if (!f.hermitian())
    throw ContractViolation("translate sums need a real density (hermitian transform)");
}

}  // namespace

TranslateSamples translate_sum_direct(const DensityFunction& f, const PerturbedLattice& lat,
                                      std::span<const double> xs, double step, Exec exec) {
  require_real(f);
  if (bounding_box(f.support()).length() > 0 && !(f.bandlimit() < 1.0))
    throw ContractViolation("direct translate sum needs supp f-hat inside (-1, 1)");
  TranslateSamples out;
  out.values.assign(xs.size(), f.mass());
  if (xs.empty() || f.support().empty()) return out;
  std::vector<double> moved, home;
  const auto& a = lat.alpha();
  for (int n = -a.active_half_width(); n <= a.active_half_width(); ++n)
    if (a[n] != 0.0) {
      moved.push_back(lat.point(n));
      home.push_back(static_cast<double>(n));
    }
  if (moved.empty()) return out;
  std::vector<double> all = moved;
  all.insert(all.end(), home.begin(), home.end());
  const double reach = table_half_range(xs, all, step);
  const auto table = f.table(reach, step, exec);
  std::vector<double> delta(xs.size());
  kernels::perturbation_sum(*table, moved, home, xs, delta, exec);
  for (std::size_t i = 0; i < xs.size(); ++i) out.values[i] += delta[i];
  out.budget = 2.0 * static_cast<double>(moved.size()) * f.interpolation_bound(step, reach);
  return out;
}

TranslateSamples translate_sum_points(const DensityFunction& f, std::span<const double> points,
                                      std::span<const double> xs, double step, Exec exec) {
  require_real(f);
  TranslateSamples out;
  out.values.assign(xs.size(), 0.0);
  if (xs.empty() || points.empty() || f.support().empty()) return out;
  const double reach = table_half_range(xs, points, step);
  const auto table = f.table(reach, step, exec);
  kernels::point_sum(*table, points, xs, out.values, exec);
  // Points beyond the list lie at distance >= gap from every x; bound their
  // contribution by sampled |f| over the next 4096 unit steps on both sides.
  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  const auto [pmin, pmax] = std::minmax_element(points.begin(), points.end());
  const double gap = std::min(*xmin - *pmin, *pmax - *xmax);
  std::vector<double> ys;
  for (int j = 0; j < 4096; ++j) {
    ys.push_back(gap + j);
    ys.push_back(-gap - j);
  }
  const auto fv = f.evaluate(ys, exec);
  CompensatedSum<double> tail;
  for (double v : fv) tail.add(std::abs(v));
  out.budget = tail.value() + static_cast<double>(points.size()) * f.interpolation_bound(step, reach);
  return out;
}

std::vector<double> translate_sum_spectral(const DensityFunction& f, const WindowSpectrum& w,
                                           std::span<const double> xs, Exec exec) {
  if (!support_inside(f.support(), w.window()))
    throw ContractViolation("spectral translate sum needs supp f-hat inside the window " +
                            to_string(w.window()));
  std::vector<double> out(xs.size(), f.mass());
  if (w.trivial() || f.support().empty()) return out;
  const Interval fb = bounding_box(f.support()), sb = bounding_box(w.s_part().support);
  const Interval box{std::max(fb.lo, sb.lo), std::min(fb.hi, sb.hi)};
  if (box.hi <= box.lo) return out;
  const auto& grid = f.grid();
  const auto [j0, j1] = grid.active_range(box);
  std::vector<cplx> weights(j1 - j0);
  for (std::size_t j = j0; j < j1; ++j) {
    const double t = grid.node(j);
    const cplx s = w(t);
    weights[j - j0] = s == cplx{} ? cplx{} : f.spectral(t) * s * grid.weight();
  }
  std::vector<cplx> v(xs.size());
  kernels::exp_sum(grid.node(j0), grid.spacing(), weights, xs, +1.0, v, exec);
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] += v[i].real();
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::tiling: return "tiling";
    case Verdict::not_tiling: return "not-tiling";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

nlohmann::json TilingReport::to_json() const {
  return {{"level", level},
          {"supDeviation", sup_deviation},
          {"oracleAgreement", oracle_agreement},
          {"truncationBudget", truncation_budget},
          {"tol", tol},
          {"verdict", to_string(verdict)}};
}

TilingReport assess_tiling(std::span<const double> direct, std::span<const double> spectral,
                           double budget, double tol) {
  if (direct.size() != spectral.size() || direct.empty())
    throw ContractViolation("assess_tiling needs matched, nonempty sample grids");
  TilingReport r;
  r.tol = tol;
  r.truncation_budget = budget;
  CompensatedSum<double> acc;
  for (double v : direct) acc.add(v);
  r.level = acc.value() / static_cast<double>(direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) {
    r.sup_deviation = std::max(r.sup_deviation, std::abs(direct[i] - r.level));
    r.oracle_agreement = std::max(r.oracle_agreement, std::abs(direct[i] - spectral[i]));
  }
  if (r.oracle_agreement > tol + budget)
    r.verdict = Verdict::inconclusive;
  else if (r.sup_deviation <= tol && r.oracle_agreement <= tol)
    r.verdict = Verdict::tiling;
  else if (r.sup_deviation >= 10.0 * tol + budget)
    r.verdict = Verdict::not_tiling;
  else
    r.verdict = Verdict::inconclusive;
  return r;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
  std::vector<double> xs(count);
  if (count == 1) {
    xs[0] = lo;
    return xs;
  }
  for (std::size_t i = 0; i < count; ++i)
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return xs;
}

void write_samples_csv(std::ostream& os, std::span<const double> xs,
                       std::span<const double> direct, std::span<const double> spectral,
                       double level) {
  os << "x,direct,spectral,deviation\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    os << format_double(xs[i]) << ',' << format_double(direct[i]) << ','
       << format_double(spectral[i]) << ',' << format_double(direct[i] - level) << '\n';
}

Support symmetric_exemption(const Support& one_side) {
  Support e = one_side;
  for (const auto& iv : one_side) e.push_back(iv.mirrored());
  return merged(e);
}

TilingPair construct_pair(double w, const SpectralTarget& psi, const SpectralTarget& phi,
                          const SmoothWindow& tau, const Support& exempt, const Geometry& g,
                          std::shared_ptr<const QuadratureGrid> grid) {
  const Interval ab{g.a, g.b};
  for (const auto* s : {&psi, &phi})
    if (!s->support().empty() && !support_inside(s->support(), ab))
      throw ContractViolation("pair profiles must be supported in (a, b)");
  if (!support_inside(tau.support_set(), {-g.a, g.a}))
    throw ContractViolation("tau must be supported in (-a, a)");
  if (std::abs(tau(0.0) - 1.0) > 1e-14) throw ContractViolation("tau(0) must equal 1");
  const Support e = symmetric_exemption(exempt);

  const auto zpsi = DensityFunction(psi.profile(), grid).zero_set().outside(e);
  const auto zphi = DensityFunction(phi.profile(), grid).zero_set().outside(e);
  if (!(zpsi == zphi))
    throw ContractViolation("psi and phi zero sets differ outside the exemption set");

  const Profile tp = tau.profile("tau");
  auto make = [&](const SpectralTarget& s, const std::string& label) {
    return DensityFunction(combine({{cplx(w, 0.0), tp}, {1.0, s.profile()},
                                    {1.0, reflected(s.profile())}},
                                   label),
                           grid);
  };
  TilingPair p{make(psi, "f"), make(phi, "g"), {}, {}, e};
  p.zero_f = p.f.zero_set();
  p.zero_g = p.g.zero_set();
  if (!(p.zero_f.outside(e) == p.zero_g.outside(e)))
    throw ContractViolation("f-hat and g-hat zero sets differ outside the exemption set");
  return p;
}

}  // namespace spectile
