#include "spectile/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "spectile/errors.hpp"

namespace spectile {

QuadratureGrid::QuadratureGrid(std::size_t nodes)
    : nodes_(nodes), twiddles_(std::make_shared<TwiddleTable>(nodes)) {
  if (nodes < 16) throw ConfigError("quadrature grid needs at least 16 nodes");
}

std::pair<std::size_t, std::size_t> QuadratureGrid::active_range(
    const Interval& iv) const {
  const double m = static_cast<double>(nodes_);
  const double lo = std::max(iv.lo, -0.5);
  const double hi = std::min(iv.hi, 0.5);
  if (hi < lo) return {0, 0};
  auto j0 = static_cast<std::int64_t>(std::floor((lo + 0.5) * m));
  auto j1 = static_cast<std::int64_t>(std::ceil((hi + 0.5) * m)) + 1;
  j0 = std::clamp<std::int64_t>(j0, 0, static_cast<std::int64_t>(nodes_));
  j1 = std::clamp<std::int64_t>(j1, j0, static_cast<std::int64_t>(nodes_));
  return {static_cast<std::size_t>(j0), static_cast<std::size_t>(j1)};
}

void QuadratureGrid::require_resolves(int max_freq) const {
  if (max_freq < 0 || 2 * static_cast<std::size_t>(max_freq) >= nodes_)
    throw ConfigError("grid of " + std::to_string(nodes_) +
                      " nodes cannot resolve frequency cutoff " +
                      std::to_string(max_freq) + " (need 2K < M)");
}

std::vector<cplx> sample(const Profile& p, const QuadratureGrid& grid,
                         std::size_t j0, std::size_t j1) {
  std::vector<cplx> out(j1 - j0);
  for (std::size_t j = j0; j < j1; ++j) out[j - j0] = p(grid.node(j));
  return out;
}

}  // namespace spectile
