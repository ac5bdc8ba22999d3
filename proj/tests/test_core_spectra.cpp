#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "spectile/errors.hpp"
#include "spectile/spectral_target.hpp"
#include "spectile/trig_spectrum.hpp"
#include "spectile/window.hpp"

using namespace spectile;

namespace {

const QuadratureGrid& grid() {
  static const QuadratureGrid g(16384);
  return g;
}

TrigSpectrum random_spectrum(std::mt19937_64& gen, int k) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> c(2 * k + 1);
  for (auto& z : c) z = {u(gen), u(gen)};
  return TrigSpectrum(std::move(c));
}

}  // namespace

TEST_CASE("geometry: interval and support predicates") {
  const Interval iv{0.2, 0.26};
  CHECK(iv.strictly_inside({0.15, 0.30}));
  CHECK_FALSE(iv.strictly_inside({0.2, 0.30}));
  CHECK(support_inside({{0.2, 0.26}, {-0.26, -0.2}}, {-0.3, 0.3}));
  CHECK_FALSE(support_inside({{0.2, 0.31}}, {-0.3, 0.3}));
  const Support m = merged({{0.1, 0.2}, {0.15, 0.3}, {-0.4, -0.35}});
  REQUIRE(m.size() == 2);
  CHECK(m[0] == Interval{-0.4, -0.35});
  CHECK(m[1] == Interval{0.1, 0.3});
  CHECK(mirrored({{0.1, 0.2}})[0] == Interval{-0.2, -0.1});
  Geometry bad{0.2, 0.1, 0.4};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_NOTHROW(Geometry{}.validate());
}

TEST_CASE("quadrature grid: weights sum to one and e^{2 pi i k t} is integrated exactly") {
  const auto& g = grid();
  CompensatedSum<double> w;
  for (std::size_t j = 0; j < g.size(); ++j) w.add(g.weight());
  CHECK(w.value() == doctest::Approx(1.0).epsilon(1e-15));

  // Delta-in-k pattern for e^{2 pi i k0 t} over the whole period, |k| <= K.
  const int kmax = 512;
  for (int k0 : {0, 3, -17, 511}) {
    std::vector<cplx> samples(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) samples[j] = std::polar(1.0, kTwoPi * k0 * g.node(j));
    std::vector<cplx> c(2 * kmax + 1);
    kernels::analysis(samples, 0, g.twiddles(), kmax, c, Exec::serial);
    double worst = 0.0;
    for (int k = -kmax; k <= kmax; ++k)
      worst = std::max(worst, std::abs(c[k + kmax] - (k == k0 ? 1.0 : 0.0)));
    CHECK(worst <= 1e-13);
  }
  CHECK_THROWS_AS(QuadratureGrid(64).require_resolves(40), ConfigError);
}

TEST_CASE("kernels: serial and parallel variants are bit-identical") {
  const auto& g = grid();
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> samples(3000);
  for (auto& z : samples) z = {u(gen), u(gen)};
  std::vector<cplx> a(129), b(129);
  kernels::analysis(samples, 5000, g.twiddles(), 64, a, Exec::serial);
  kernels::analysis(samples, 5000, g.twiddles(), 64, b, Exec::parallel);
  CHECK(a == b);

  std::vector<cplx> sa(700), sb(700);
  kernels::synthesis(a, g.twiddles(), 4000, sa, Exec::serial);
  kernels::synthesis(a, g.twiddles(), 4000, sb, Exec::parallel);
  CHECK(sa == sb);

  std::vector<double> xs(300);
  for (auto& x : xs) x = 100.0 * u(gen);
  std::vector<cplx> ea(xs.size()), eb(xs.size());
  kernels::exp_sum(-0.2, 1e-4, samples, xs, 1.0, ea, Exec::serial);
  kernels::exp_sum(-0.2, 1e-4, samples, xs, 1.0, eb, Exec::parallel);
  CHECK(ea == eb);

  // exp_sum against a naive evaluation.
  for (int i : {0, 17, 299}) {
    cplx ref{};
    for (std::size_t j = 0; j < samples.size(); ++j)
      ref += samples[j] * std::polar(1.0, kTwoPi * xs[i] * (-0.2 + 1e-4 * j));
    CHECK(std::abs(ref - ea[i]) <= 1e-10);
  }
}

TEST_CASE("kernels: uniform-table interpolation of a band-limited function") {
  const double h = 1.0 / 16, nu = 0.3;
  std::vector<double> v;
  for (int m = 0; m <= 1600; ++m) v.push_back(std::cos(kTwoPi * nu * (-50.0 + m * h)));
  const kernels::UniformTable table(-50.0, h, v);
  // Error bound: stencil factor * h^12 * (2 pi nu)^12.
  const double bound = kernels::UniformTable::stencil_factor() * std::pow(h * kTwoPi * nu, 12) +
                       kernels::UniformTable::rounding_bound(50.0, 1.0, kTwoPi * nu);
  double worst = 0.0;
  for (double y = -40.0; y <= 40.0; y += 0.0123)
    worst = std::max(worst, std::abs(table(y) - std::cos(kTwoPi * nu * y)));
  CHECK(worst <= bound);
  CHECK_THROWS(table(60.0));
}

TEST_CASE("compensated sum recovers cancelled mass") {
  CompensatedSum<double> s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1.0);
}

TEST_CASE("windowed_coefficients: zero profile gives a zero spectrum") {
  const Profile zero{[](double) { return cplx{}; }, {{-0.2, 0.2}}, "zero"};
  const auto s = windowed_coefficients(zero, grid(), 64);
  CHECK(pm_norm(s) == 0.0);
}

TEST_CASE("windowed_coefficients: modulated bump matches the adaptive-quadrature oracle") {
  const auto phi = SmoothWindow::bump({-0.3, 0.3});
  const Profile p{[phi](double t) { return std::polar(1.0, kTwoPi * 3 * t) * phi(t); },
                  {{-0.3, 0.3}}, "e3 Phi"};
  const auto s = windowed_coefficients(p, grid(), 64);
  for (int k : {-5, 0, 2, 3, 4, 10, 40}) {
    const cplx ref = oracle::fourier([](double t) { return oracle::bump(t, -0.3, 0.3); }, -0.3, 0.3, k - 3);
    CHECK(std::abs(s[k] - ref) <= 1e-12);
  }
  // c_3 = int Phi.
  const double mass = oracle::integrate([](double t) { return oracle::bump(t, -0.3, 0.3); }, -0.3, 0.3);
  CHECK(std::abs(s[3] - mass) <= 1e-12);
}

TEST_CASE("windowed_coefficients: even bump has real symmetric coefficients") {
  const auto s = windowed_coefficients(SmoothWindow::bump({-0.2, 0.2}).profile(), grid(), 256);
  for (int k = 0; k <= 256; ++k) {
    CHECK(std::abs(s[k].imag()) <= 1e-14);
    CHECK(std::abs(s[k] - s[-k]) <= 1e-14);
  }
}

TEST_CASE("windowed_coefficients: rejects supports reaching the period boundary and coarse grids") {
  CHECK_THROWS_AS(windowed_coefficients(SmoothWindow::bump({-0.5, 0.2}).profile(), grid(), 8),
                  GeometryError);
  CHECK_THROWS_AS(
      windowed_coefficients(SmoothWindow::bump({-0.2, 0.2}).profile(), QuadratureGrid(64), 40),
      ConfigError);
}

TEST_CASE("eval_trig_poly: zero, constant and bump reconstruction") {
  CHECK(eval_trig_poly(TrigSpectrum::zero(16), 0.1) == cplx{});
  CHECK(std::abs(eval_trig_poly(TrigSpectrum::monomial(0, 1.0, 16), 0.37) - 1.0) <= 1e-15);
  const auto s = windowed_coefficients(SmoothWindow::bump({-0.2, 0.2}).profile(), grid(), 512);
  const double tail = estimate_tail(s);
  for (double t : {0.0, 0.05, -0.11, 0.19}) {
    const double exact = oracle::bump(t, -0.2, 0.2);
    CHECK(std::abs(eval_trig_poly(s, t) - exact) <= tail + 1e-13);
  }
}

TEST_CASE("reflect: conjugation, fixed points, involution and isometry") {
  const auto r = reflect(TrigSpectrum::monomial(1, cplx(0, 1), 4));
  CHECK(r[1] == cplx(0, -1));
  const TrigSpectrum real_s(std::vector<cplx>{1.0, -2.0, 0.5});
  const auto rr = reflect(real_s);
  for (int k = -1; k <= 1; ++k) CHECK(rr[k] == real_s[k]);
  std::mt19937_64 gen(11);
  const auto s = random_spectrum(gen, 20);
  const auto back = reflect(reflect(s));
  for (int k = -20; k <= 20; ++k) CHECK(back[k] == s[k]);
  CHECK(pm_norm(reflect(s)) == pm_norm(s));
  CHECK(a_norm(reflect(s)) == a_norm(s));
}

TEST_CASE("pm_norm and a_norm examples") {
  CHECK(pm_norm(TrigSpectrum::zero(5)) == 0.0);
  CHECK(a_norm(TrigSpectrum::zero(5)) == 0.0);
  const auto one = TrigSpectrum::monomial(2, 1.0, 5);
  CHECK(pm_norm(one) == 1.0);
  CHECK(a_norm(one) == 1.0);
  const auto two = one + TrigSpectrum::monomial(-3, cplx(0, 1), 5);
  CHECK(pm_norm(two) == 1.0);
  CHECK(a_norm(two) == 2.0);
}

TEST_CASE("multiply: identity, monomials, norm inequality and disjoint supports") {
  std::mt19937_64 gen(5);
  const auto s = random_spectrum(gen, 12);
  const auto id = multiply(s, TrigSpectrum::monomial(0, 1.0, 0));
  for (int k = -12; k <= 12; ++k) CHECK(id[k] == s[k]);

  const auto mn = multiply(TrigSpectrum::monomial(3, 1.0, 8), TrigSpectrum::monomial(4, 1.0, 8));
  CHECK(mn[7] == cplx(1.0));
  CHECK(a_norm(mn) == 1.0);

  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_spectrum(gen, 10), b = random_spectrum(gen, 6);
    const auto p = multiply(a, b);
    CHECK(pm_norm(p) <= pm_norm(a) * a_norm(b) + p.tail_mass() + 1e-12);
  }

  // S supported in (0.2, 0.26); phi vanishes on (-0.1, 0.1) + ... : the product
  // evaluates to ~0 on a dense grid.
  const auto sb = windowed_coefficients(SmoothWindow::bump({0.2, 0.26}).profile(), grid(), 512);
  const auto pb = windowed_coefficients(SmoothWindow::bump({-0.1, 0.1}).profile(), grid(), 512);
  const auto prod = multiply(sb, pb, 512);
  const double bound = estimate_tail(sb) * a_norm(pb) + estimate_tail(pb) * a_norm(sb) + prod.tail_mass();
  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i) worst = std::max(worst, std::abs(eval_trig_poly(prod, -0.5 + i / 2000.0)));
  CHECK(worst <= bound + 1e-12);
}

TEST_CASE("spectrum CSV round trip and shortest formatting") {
  std::mt19937_64 gen(3);
  const auto s = random_spectrum(gen, 7);
  std::stringstream ss;
  write_csv(ss, s);
  const auto back = read_spectrum_csv(ss);
  for (int k = -7; k <= 7; ++k) CHECK(back[k] == s[k]);
  CHECK(format_double(0.1) == "0.1");
  std::stringstream bad("x,y\n");
  CHECK_THROWS_AS(read_spectrum_csv(bad), ConfigError);
}

TEST_CASE("smoothstep: endpoints, symmetry and agreement with direct integration") {
  CHECK(smoothstep(-1.0) == 0.0);
  CHECK(smoothstep(1.0) == 1.0);
  const auto rho = [](double u) { return std::abs(u) < 1 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; };
  const double total = oracle::integrate(rho, -1.0, 1.0);
  for (double u : {-0.7, -0.2, 0.0, 0.35, 0.9}) {
    CHECK(std::abs(smoothstep(u) + smoothstep(-u) - 1.0) <= 1e-15);
    CHECK(std::abs(smoothstep(u) - oracle::integrate(rho, -1.0, u) / total) <= 1e-13);
  }
}

TEST_CASE("windows: cutoff plateau, bump values and the inverse-slope identity") {
  const Geometry g;
  const auto phi = SmoothWindow::cutoff(g.window(), {-g.l, g.l});
  for (double t : {-0.3, 0.0, 0.29}) CHECK(phi(t) == cplx(1.0));
  for (double t : {-0.4, 0.41}) CHECK(phi(t) == cplx(0.0));
  const auto b = SmoothWindow::bump({0.2, 0.26}, 2.0);
  for (double t : {0.21, 0.23, 0.25}) CHECK(std::abs(b(t) - oracle::bump(t, 0.2, 0.26, 2.0)) <= 1e-15);

  const auto psi = SmoothWindow::inverse_slope(g);
  for (double t = g.a; t <= g.b; t += 0.001) {
    CHECK(std::abs(cplx(0, kTwoPi * t) * psi(t) + 1.0) <= 1e-15);
    CHECK(std::abs(cplx(0, -kTwoPi * t) * psi(-t) + 1.0) <= 1e-15);
  }
  CHECK(psi(0.0) == cplx(0.0));
}

TEST_CASE("mollifier: chi-hat >= 1 on [-1/2, 1/2], chi(0) and chi(t) from direct convolution") {
  const double h = 0.45 * 0.15;
  const auto chi = SmoothWindow::mollifier(h);
  for (double x = -0.5; x <= 0.5; x += 0.01) CHECK(chi.chi_hat(x) >= 1.0);
  const auto rho_h = [h](double s) {
    const double u = s / h;
    return std::abs(u) < 1 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
  };
  for (double t : {0.0, 0.03, -0.1}) {
    const double conv = oracle::integrate([&](double s) { return rho_h(s) * rho_h(t - s); }, -h, h);
    CHECK(std::abs(chi(t).real() - chi.lambda() * conv) <= 1e-12 * chi.lambda());
  }
  CHECK(std::abs(chi.chi_at_zero() - chi(0.0).real()) <= 1e-12 * chi.chi_at_zero());
  // rho-hat against the oracle Fourier integral.
  for (double xi : {0.0, 0.7, 3.0}) {
    const cplx ref = oracle::fourier([](double u) { return std::abs(u) < 1 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; },
                                     -1.0, 1.0, xi);
    CHECK(std::abs(mollifier_kernel_hat(xi) - ref.real()) <= 1e-13);
  }
}

TEST_CASE("window JSON round trip and mode names") {
  const Geometry g;
  const auto w = SmoothWindow::cutoff({-0.1, 0.1}, {-0.2, 0.2}, 0.5);
  const auto back = SmoothWindow::from_json(w.to_json(), g);
  for (double t : {-0.15, 0.0, 0.12}) CHECK(back(t) == w(t));
  CHECK(window_mode_from_string("inverse_slope") == WindowMode::inverse_slope);
  CHECK_THROWS_AS(SmoothWindow::from_json(nlohmann::json{{"mode", "nope"}}, g), ConfigError);
}

TEST_CASE("spectral targets: cached coefficients agree with direct quadrature") {
  const Geometry g;
  const SpectralTarget one(SmoothWindow::bump({0.2, 0.26}).profile("sigma"), Symmetry::one_sided,
                           grid(), 512);
  for (int k : {0, 1, -7, 60, 300}) {
    const cplx ref = oracle::fourier([](double t) { return oracle::bump(t, 0.2, 0.26); }, 0.2, 0.26, k);
    CHECK(std::abs(one.spectrum()[k] - ref) <= 1e-12);
  }
  const auto sym = build_Tr(one, 0.5);
  CHECK(sym.symmetry() == Symmetry::hermitian_even);
  CHECK(sym.spectrum().max_imag() <= 1e-13);
  for (int k : {0, 5, -33, 200}) CHECK(sym.spectrum()[k].real() == doctest::Approx(2 * 0.5 * one.spectrum()[k].real()).epsilon(1e-14));
  const auto rs = reflect(sym.spectrum());
  for (int k = -20; k <= 20; ++k) CHECK(rs[k] == sym.spectrum()[k]);
  CHECK(build_Tr(one, 0.0).is_zero());

  const SpectralTarget even(SmoothWindow::bump({-0.1, 0.1}).profile(), Symmetry::hermitian_even, grid(), 128);
  CHECK(even.spectrum().real_coefficients());
  CHECK(even.spectrum().max_imag() == 0.0);

  const nlohmann::json bad = {{"symmetry", "one_sided"}, {"terms", {{{"mode", "bump"}, {"support", {0.1, 0.2}}}}}};
  CHECK_THROWS_AS(SpectralTarget::from_json(bad, g, grid(), 64), GeometryError);
}
