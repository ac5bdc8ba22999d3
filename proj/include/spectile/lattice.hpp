#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace spectile {

/// Real offsets alpha_n, |n| <= N. Immutable; sup norm cached.
class PerturbationSequence {
 public:
  PerturbationSequence() : alpha_(1, 0.0) {}
  /// alpha holds alpha_{-N..N}.
  explicit PerturbationSequence(std::vector<double> alpha);
  static PerturbationSequence zero(int half_width);

  int half_width() const { return static_cast<int>(alpha_.size() / 2); }
  double operator[](int n) const {
    const int h = half_width();
    return (n < -h || n > h) ? 0.0 : alpha_[n + h];
  }
  const std::vector<double>& values() const { return alpha_; }
  double sup_norm() const { return sup_; }
  /// Largest |n| with alpha_n != 0 (-1 when identically zero).
  int active_half_width() const { return active_; }

  PerturbationSequence scaled(double s) const;
  PerturbationSequence operator-(const PerturbationSequence& o) const;

 private:
  std::vector<double> alpha_;
  double sup_ = 0.0;
  int active_ = -1;
};

/// Lambda = {n + alpha_n : |n| <= N} union {n : |n| > N}.
class PerturbedLattice {
 public:
  PerturbedLattice() = default;
  /// Throws ContractViolation unless sup |alpha| < 1/2 (strict monotonicity).
  explicit PerturbedLattice(PerturbationSequence alpha);
  static PerturbedLattice integers(int half_width);

  int half_width() const { return alpha_.half_width(); }
  const PerturbationSequence& alpha() const { return alpha_; }
  double point(std::int64_t n) const { return static_cast<double>(n) + alpha_[static_cast<int>(n)]; }
  /// lambda_{-N..N}
  std::vector<double> points() const;
  double min_gap() const { return min_gap_; }
  double max_gap() const { return max_gap_; }
  /// ceil(1 / (1 - 2 sup|alpha|)) + 1.
  int density_bound() const;
  /// Max number of points of the truncated set in any [x, x+1).
  int max_points_per_unit() const;

 private:
  PerturbationSequence alpha_;
  double min_gap_ = 1.0;
  double max_gap_ = 1.0;
};

/// CSV with header "n,alpha_n,lambda_n".
void write_lattice_csv(std::ostream& os, const PerturbedLattice& lat);
PerturbedLattice read_lattice_csv(std::istream& is);

}  // namespace spectile
