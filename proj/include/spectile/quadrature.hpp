#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "spectile/geometry.hpp"
#include "spectile/kernels.hpp"

namespace spectile {

/// Uniform periodic trapezoid rule on [-1/2, 1/2): nodes t_j = -1/2 + j/M,
/// weights 1/M. Exact for e^{2 pi i k t} with |k| < M.
class QuadratureGrid {
 public:
  static constexpr std::size_t kDefaultNodes = 16384;

  explicit QuadratureGrid(std::size_t nodes = kDefaultNodes);

  std::size_t size() const { return nodes_; }
  double node(std::size_t j) const {
    return -0.5 + static_cast<double>(j) / static_cast<double>(nodes_);
  }
  double weight() const { return 1.0 / static_cast<double>(nodes_); }
  double spacing() const { return weight(); }
  const TwiddleTable& twiddles() const { return *twiddles_; }

  /// Smallest node range [j0, j1) containing every node of the closed
  /// interval `iv` (clipped to the period).
  std::pair<std::size_t, std::size_t> active_range(const Interval& iv) const;

  /// Throws ConfigError unless 2 * max_freq < M (products of two
  /// coefficient ranges stay alias-free).
  void require_resolves(int max_freq) const;

 private:
  std::size_t nodes_;
  std::shared_ptr<const TwiddleTable> twiddles_;
};

/// A complex profile on the line together with the open support it
/// vanishes outside of.
struct Profile {
  std::function<cplx(double)> eval;
  Support support;
  std::string label;

  cplx operator()(double t) const { return eval(t); }
};

/// Samples of `p` on the grid nodes in [j0, j1).
std::vector<cplx> sample(const Profile& p, const QuadratureGrid& grid,
                         std::size_t j0, std::size_t j1);

}  // namespace spectile
