#include "spectile/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "spectile/errors.hpp"
#include "spectile/trig_spectrum.hpp"

namespace spectile {

PerturbationSequence::PerturbationSequence(std::vector<double> alpha)
    : alpha_(std::move(alpha)) {
  if (alpha_.size() % 2 == 0)
    throw ContractViolation("perturbation sequence must have odd length 2N+1");
  const int h = half_width();
  for (int n = -h; n <= h; ++n) {
    const double a = alpha_[n + h];
    if (!std::isfinite(a)) throw NumericFailure("non-finite perturbation entry");
    sup_ = std::max(sup_, std::abs(a));
    if (a != 0.0) active_ = std::max(active_, std::abs(n));
  }
}

PerturbationSequence PerturbationSequence::zero(int half_width) {
  return PerturbationSequence(std::vector<double>(2 * static_cast<std::size_t>(half_width) + 1));
}

PerturbationSequence PerturbationSequence::scaled(double s) const {
  auto v = alpha_;
  for (auto& x : v) x *= s;
  return PerturbationSequence(std::move(v));
}

PerturbationSequence PerturbationSequence::operator-(const PerturbationSequence& o) const {
  const int h = std::max(half_width(), o.half_width());
  std::vector<double> v(2 * static_cast<std::size_t>(h) + 1);
  for (int n = -h; n <= h; ++n) v[n + h] = (*this)[n] - o[n];
  return PerturbationSequence(std::move(v));
}

PerturbedLattice::PerturbedLattice(PerturbationSequence alpha) : alpha_(std::move(alpha)) {
  if (!(alpha_.sup_norm() < 0.5))
    throw ContractViolation("lattice perturbation must satisfy sup|alpha| < 1/2");
  const int h = half_width();
  min_gap_ = 1.0;
  max_gap_ = 1.0;
  for (int n = -h - 1; n <= h; ++n) {
    const double gap = point(n + 1) - point(n);
    min_gap_ = std::min(min_gap_, gap);
    max_gap_ = std::max(max_gap_, gap);
  }
}

PerturbedLattice PerturbedLattice::integers(int half_width) {
  return PerturbedLattice(PerturbationSequence::zero(half_width));
}

std::vector<double> PerturbedLattice::points() const {
  const int h = half_width();
  std::vector<double> p(2 * static_cast<std::size_t>(h) + 1);
  for (int n = -h; n <= h; ++n) p[n + h] = point(n);
  return p;
}

int PerturbedLattice::density_bound() const {
  return static_cast<int>(std::ceil(1.0 / (1.0 - 2.0 * alpha_.sup_norm()))) + 1;
}

int PerturbedLattice::max_points_per_unit() const {
  const auto p = points();
  int best = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (j < p.size() && p[j] < p[i] + 1.0) ++j;
    best = std::max(best, static_cast<int>(j - i));
  }
  return best;
}

void write_lattice_csv(std::ostream& os, const PerturbedLattice& lat) {
  os << "n,alpha_n,lambda_n\n";
  const int h = lat.half_width();
  for (int n = -h; n <= h; ++n)
    os << n << ',' << format_double(lat.alpha()[n]) << ',' << format_double(lat.point(n))
       << '\n';
}

PerturbedLattice read_lattice_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("n,alpha_n,lambda_n", 0) != 0)
    throw ConfigError("lattice CSV must start with header n,alpha_n,lambda_n");
  std::map<int, double> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
      throw ConfigError("malformed lattice CSV row: " + line);
    try {
      const int n = std::stoi(a);
      const double alpha = std::stod(b), lambda = std::stod(c);
      // An edited lambda_n column wins over a stale alpha_n column.
      rows[n] = std::abs(lambda - (n + alpha)) > 1e-9 ? lambda - static_cast<double>(n) : alpha;
    } catch (const std::exception&) {
      throw ConfigError("malformed lattice CSV row: " + line);
    }
  }
  int h = 0;
  for (const auto& [n, a] : rows) h = std::max(h, std::abs(n));
  std::vector<double> alpha(2 * static_cast<std::size_t>(h) + 1);
  for (const auto& [n, a] : rows) alpha[n + h] = a;
  try {
    return PerturbedLattice(PerturbationSequence(std::move(alpha)));
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid lattice file: ") + e.what());
  }
}

}  // namespace spectile
