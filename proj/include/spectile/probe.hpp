#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectile/density.hpp"
#include "spectile/lattice.hpp"
#include "spectile/solver.hpp"

namespace spectile {

/// Smooth test function q supported in the window, with q-hat on a 2^15-node
/// trapezoid grid. q-hat at integers |n| <= 4N comes from one FFT; other
/// points from direct exponential sums. The decay envelope
/// |q-hat(x)| <= D / (1 + x^4) is fitted on the integers |n| <= 4N.
class TestFunction {
 public:
  static constexpr std::size_t kNodes = 32768;

  TestFunction(Profile q, int lattice_half_width, std::size_t nodes = kNodes);

  const Profile& profile() const { return q_; }
  cplx value_at_zero() const { return q_(0.0); }
  /// q-hat(x) = int q(t) e^{-2 pi i x t} dt.
  std::vector<cplx> transform(std::span<const double> xs, Exec exec = Exec::parallel) const;
  cplx transform_at_integer(std::int64_t n) const;
  double decay_constant() const { return decay_; }
  /// 2 D sum_{n > N} 1/(1 + n^4) <= 2 D / (3 N^3).
  double tail_bound(int n_half) const;
  /// Envelope bound on sum_{|n| > 4N} |q-hat(n)|, with D fitted on 2N <= |n| <= 4N.
  double far_tail_bound() const;
  /// int s(t) q(t) dt by the trapezoid rule on the test grid.
  cplx integrate_against(const Profile& s) const;
  /// c q
  TestFunction scaled(cplx c) const;
  /// t -> conj q(-t)
  TestFunction conj_reflected() const;

 private:
  Profile q_;
  int n_half_ = 0;
  std::shared_ptr<const QuadratureGrid> grid_;
  std::size_t j0_ = 0;
  std::vector<cplx> weights_;       // q(t_j) / M on the active range
  std::vector<cplx> integer_hat_;   // q-hat(n), |n| <= 4N
  double decay_ = 0.0;
  double far_decay_ = 0.0;
};

struct ProbeResult {
  std::string id;
  cplx pairing{};
  cplx expected{};
  double discrepancy = 0.0;
  double tail = 0.0;
  double tolerance = 0.0;
  /// discrepancy <= tol and tail <= tol
  bool pass() const { return discrepancy <= tolerance && tail <= tolerance; }
  bool inconclusive() const { return tail > tolerance; }
  nlohmann::json to_json() const;
};

struct Pairing {
  cplx value{};
  double tail = 0.0;
};

/// <delta-hat_Lambda, q> = sum_{|n| <= N} q-hat(lambda_n) + sum_{N < |n| <= 4N} q-hat(n)
/// (the lattice is unperturbed beyond N), plus the envelope tail beyond 4N.
Pairing pair_with_test(const PerturbedLattice& lat, const TestFunction& q,
                       Exec exec = Exec::parallel);

/// q(0) + int S q.
cplx expected_pairing(const WindowSpectrum& w, const TestFunction& q);

/// Bumps with random centres and half-widths in [0.02, 0.08] inside (-b, b).
std::vector<TestFunction> random_test_family(int count, std::uint64_t seed, double b,
                                             int lattice_half_width);

/// One result per test; all pass => window-spectrum certificate.
std::vector<ProbeResult> verify_window_spectrum(const PerturbedLattice& lat,
                                                const WindowSpectrum& expected,
                                                const std::vector<TestFunction>& tests,
                                                double tol, Exec exec = Exec::parallel);

bool certificate(const std::vector<ProbeResult>& results);

struct ObstructionResult {
  cplx best_c{};                 // least-squares delta_0 multiple
  double residual = 0.0;         // measured residual of the best c
  double expected_residual = 0.0;
  double threshold = 0.0;        // 10 tol
  bool pass = false;             // residual >= expected/2 and expected >= threshold
  nlohmann::json to_json() const;
};

struct AddendumProbe {
  std::vector<ProbeResult> results;
  ObstructionResult obstruction;
  bool pass() const;
};

/// Window probes against delta_0 - 2 pi i r t psi(t), plus the obstruction:
/// no c makes delta-hat_Lambda = c delta_0 near 0 (even and odd tests
/// supported in (-a/2 - margin, ...) around 0).
AddendumProbe addendum_spectrum_probe(const PerturbedLattice& lat, const WindowSpectrum& expected,
                                      const std::vector<TestFunction>& tests, double a,
                                      double tol, Exec exec = Exec::parallel);

/// sum_m Delta (h * delta_Lambda)(x_m) beta-hat(x_m) over |x_m| <= X versus
/// h-hat(0) beta(0) + int S h-hat beta.
ProbeResult convolution_transform_check(const DensityFunction& h, const PerturbedLattice& lat,
                                        const WindowSpectrum& w, const TestFunction& beta,
                                        double half_range, double step, double tol,
                                        Exec exec = Exec::parallel);

struct LemmaReport {
  std::vector<double> s_values, s_constants;
  bool s_stable = false;                // max/min <= 2
  double diff_constant = 0, term_constant_at_v = 0;
  bool diff_matches_term = false;       // within factor 4
  double diff_halved_constant = 0;
  bool diff_halving_stable = false;     // within factor 2
  double diff_equal_constant = 0;       // u = v, exactly 0
  double summation_constant = 0;        // measured K
  double summation_reference = 0;       // pi coth pi
  double summation_tail = 0;
  bool summation_ok = false;
  nlohmann::json to_json() const;
  bool pass() const;
};

/// Sweeps of the coefficient, difference and summation bounds.
LemmaReport lemma_bound_suite(const Workspace& ws, const SolverConfig& cfg);

struct OperatorLawReport {
  std::vector<double> sup_norms;     // ||alpha||_inf
  std::vector<double> ratios;        // pm_norm(R(alpha)) / ||alpha||_inf^2
  bool quadratic = false;            // max/min <= 2
  double radius = 0.0;               // r of the contraction comparison
  double probe_r = 0.0, probe_half = 0.0;
  double contraction_ratio = 0.0;    // probe(r/2) / probe(r)
  bool linear_contraction = false;   // in [0.35, 0.65]
  nlohmann::json to_json() const;
  bool pass() const { return quadratic && linear_contraction; }
};

/// R on a fixed random direction scaled to each sup norm, and the contraction
/// probe at r and r/2.
OperatorLawReport operator_law_check(const Workspace& ws, const SolverConfig& cfg,
                                     std::vector<double> sup_norms = {1e-2, 5e-3, 2.5e-3},
                                     double radius = 0.02);

/// CSV "testId,pairing_re,pairing_im,expected_re,expected_im,discrepancy,tail".
void write_probe_csv(std::ostream& os, const std::vector<ProbeResult>& results);

}  // namespace spectile
