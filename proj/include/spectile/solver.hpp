#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectile/geometry.hpp"
#include "spectile/lattice.hpp"
#include "spectile/quadrature.hpp"
#include "spectile/spectral_target.hpp"
#include "spectile/trig_spectrum.hpp"
#include "spectile/window.hpp"

namespace spectile {

struct SolverConfig {
  double rho = 0.5;              // contraction target for calibration
  int max_iterations = 200;
  double residual_tol = 1e-12;   // successive-difference stop, Y-norm
  int decay_order = 2;           // m
  double epsilon = 0.1;          // ball ratio and sup|alpha| bound
  double admissible_delta = 0.0; // calibrated bound on ||S1||_Y (0 = not yet calibrated)
  int lattice_half_width = 2048; // N
  int max_freq = 512;            // K
  std::size_t grid_nodes = QuadratureGrid::kDefaultNodes;
  double tail_tolerance = 1e-3;  // fitted output tail mass accepted by apply_R
  int probe_samples = 4;
  std::uint64_t seed = 0x5EED;
  double initial_scale = 1.0;    // first amplitude tried by calibration
  int max_halvings = 24;
  Exec exec = Exec::parallel;

  void validate() const;
  nlohmann::json to_json() const;
  static SolverConfig from_json(const nlohmann::json& j, SolverConfig base);
  static SolverConfig from_json(const nlohmann::json& j);
};

/// Grid, cutoff Phi and inverse-slope Psi shared by every solver operation.
class Workspace {
 public:
  Workspace(const Geometry& g, const SolverConfig& cfg);

  const Geometry& geometry() const { return geometry_; }
  const QuadratureGrid& grid() const { return *grid_; }
  const SmoothWindow& phi() const { return phi_; }
  const SmoothWindow& psi() const { return psi_; }
  /// Phi on the nodes [j0, j1) covering (-l, l).
  std::size_t j0() const { return j0_; }
  std::size_t j1() const { return j1_; }
  const std::vector<double>& phi_samples() const { return phi_samples_; }

 private:
  Geometry geometry_;
  std::shared_ptr<QuadratureGrid> grid_;
  SmoothWindow phi_;
  SmoothWindow psi_;
  std::size_t j0_ = 0, j1_ = 0;
  std::vector<double> phi_samples_;
};

/// h(x) = (e^{ix} - 1 - ix) / (ix), h(0) = 0; Taylor series for |x| < 1.
cplx removable_kernel(double x);

struct RDiagnostics {
  int order = 0;           // power-series order used
  double argument_max = 0; // 2 pi ||alpha|| max|t|
  double tail_mass = 0;    // fitted output tail
};

/// R(alpha)(t) = sum_n e^{2 pi i n t} alpha_n h(2 pi alpha_n t) Phi(t), as
/// coefficients |k| <= K. Evaluated by the exact power series in alpha.
/// Throws ConfigError if the fitted tail exceeds cfg.tail_tolerance and
/// `check_tail` is set.
TrigSpectrum apply_R(const PerturbationSequence& alpha, const Workspace& ws,
                     const SolverConfig& cfg, RDiagnostics* diag = nullptr,
                     bool check_tail = false);

/// Reference evaluation of R term by term (one kernel sample per n and node).
TrigSpectrum apply_R_termwise(const PerturbationSequence& alpha, const Workspace& ws,
                              const SolverConfig& cfg);

/// Coefficients of psi_s(t) = h(2 pi s t) Phi(t), |k| <= max_freq.
TrigSpectrum term_spectrum(double s, const Workspace& ws, int max_freq);
/// Coefficients of (v h(2 pi v t) - u h(2 pi u t)) Phi(t); exactly 0 for u = v.
TrigSpectrum difference_spectrum(double u, double v, const Workspace& ws, int max_freq);

/// Smallest C with |psi_s-hat(k)| <= C |s| / (1 + |k|^m) over |k| <= max_freq.
double term_bound_check(double s, const Workspace& ws, int m, int max_freq);
/// Smallest C with |psi_{u,v}-hat(k)| <= max(|u|,|v|) C |v-u| / (1 + |k|^m).
double difference_bound_check(double u, double v, const Workspace& ws, int m, int max_freq);

struct CalibrationStep {
  double scale = 0;
  double target_norm = 0;   // ||S1||_Y
  double probe = 0;         // contraction probe at (1 + eps) ||S1||_Y
  std::string outcome;      // accepted / probe / diverged / ball / sup
};

struct SolveDiagnostics {
  std::vector<double> iteration_residuals;
  double final_residual = 0;
  double empirical_lipschitz = 0;
  double tail_mass = 0;
  double ball_ratio = 0;
  double target_norm = 0;
  double imag_residue = 0;
  double alpha_sup = 0;
  int iterations = 0;
  bool converged = false;
  // Filled by calibrated builders.
  double scale = 0;
  double admissible_delta = 0;
  double contraction_probe = 0;
  std::vector<CalibrationStep> calibration;
  double window_identity_residual = 0;  // max |2 pi i t Psi(t) + 1| on supp S

  nlohmann::json to_json() const;
};

struct FixedPointResult {
  TrigSpectrum T;
  SolveDiagnostics diag;
};

/// Picard iteration T_{j+1} = S1 - R(F(T_j)) from T_0 = S1, F(T) = (Re T-hat(n)).
/// Throws NumericFailure on non-contraction ("delta too large") or when the
/// iteration cap is exceeded.
FixedPointResult fixed_point_solve(const TrigSpectrum& s1, const Workspace& ws,
                                   const SolverConfig& cfg);

/// Deterministic estimate of the Lipschitz constant of R on U_r.
double contraction_probe(double r, const Workspace& ws, const SolverConfig& cfg,
                         int sample_count);

struct TransformSolution {
  PerturbationSequence alpha;
  TrigSpectrum T;
  SolveDiagnostics diag;
};

/// Finds alpha with F-hat = S on (-b, b): solves T + R(F(T)) = S1, S1(t) = S(-t).
TransformSolution solve_prescribed_transform(const SpectralTarget& s, const Workspace& ws,
                                             const SolverConfig& cfg);

/// F(x) = sum_n (signed indicator of [n, n + alpha_n]).
double eval_F(const PerturbationSequence& alpha, double x);
/// F-hat(t) = sum_n e^{-2 pi i n t} alpha_n g(2 pi alpha_n t), g(z) = (1 - e^{-iz})/(iz).
cplx eval_F_hat(const PerturbationSequence& alpha, double t);

/// Known part of the lattice transform on the window: delta_0 + S_part.
class WindowSpectrum {
 public:
  WindowSpectrum() = default;
  WindowSpectrum(Profile s_part, Interval window, std::string kind, double scale)
      : s_part_(std::move(s_part)), window_(window), kind_(std::move(kind)), scale_(scale) {}
  static WindowSpectrum poisson(const Geometry& g);

  /// S-part value at t (the delta_0 mass is implicit).
  cplx operator()(double t) const { return s_part_.eval ? s_part_(t) : cplx{}; }
  const Profile& s_part() const { return s_part_; }
  const Interval& window() const { return window_; }
  const std::string& kind() const { return kind_; }
  double scale() const { return scale_; }
  bool trivial() const { return s_part_.support.empty(); }

 private:
  Profile s_part_;
  Interval window_{};
  std::string kind_ = "poisson";
  double scale_ = 0.0;
};

struct LatticeBuild {
  PerturbedLattice lattice;
  WindowSpectrum expected;
  SolveDiagnostics diag;
  double scale = 0.0;
};

/// Lattice with delta-hat = delta_0 + S on (-b, b) for a hermitian-even S
/// supported in (-b,-a) u (a,b); solves F-hat = S Psi.
LatticeBuild build_lattice_with_spectrum(const SpectralTarget& s, const Workspace& ws,
                                         const SolverConfig& cfg);

/// Auto-calibrated T_r lattice: tries r = initial_scale, /2, /4, ... until the
/// contraction probe is below rho and the solve meets the ball and sup bounds.
LatticeBuild calibrated_lattice(const SpectralTarget& one_sided, const Workspace& ws,
                                const SolverConfig& cfg);

/// Lattice with delta-hat = delta_0 - 2 pi i r t psi(t) on (-b, b); psi even,
/// strictly positive on (-a, a) and zero outside. r is calibrated.
LatticeBuild addendum_lattice(const SpectralTarget& psi, const Workspace& ws,
                              const SolverConfig& cfg);

}  // namespace spectile
