#include "spectile/spectral_target.hpp"

#include <cmath>

#include "spectile/errors.hpp"

namespace spectile {

std::string to_string(Symmetry s) {
  return s == Symmetry::hermitian_even ? "hermitian_even" : "one_sided";
}

SpectralTarget::SpectralTarget(Profile profile, Symmetry symmetry,
                               const QuadratureGrid& grid, int max_freq, Exec exec)
    : profile_(std::move(profile)), symmetry_(symmetry) {
  profile_.support = merged(profile_.support);
  spectrum_ = windowed_coefficients(profile_, grid, max_freq, exec);
  if (symmetry_ == Symmetry::hermitian_even) {
    const double im = spectrum_.max_imag();
    if (im > 1e-13)
      throw ContractViolation("target '" + profile_.label +
                              "' declared hermitian-even but has imaginary coefficients up to " +
                              format_double(im));
    spectrum_ = spectrum_.real_projection();
  }
}

SpectralTarget SpectralTarget::zero(int max_freq) {
  SpectralTarget s;
  s.profile_ = Profile{[](double) { return cplx{}; }, {}, "zero"};
  s.symmetry_ = Symmetry::hermitian_even;
  s.spectrum_ = TrigSpectrum::zero(max_freq).with_support({0.0, 0.0});
  s.zero_ = true;
  return s;
}

Profile sum_profile(const std::vector<SmoothWindow>& terms, const std::string& label) {
  Support sup;
  for (const auto& w : terms)
    for (const auto& iv : w.support_set()) sup.push_back(iv);
  auto copy = terms;
  return Profile{[copy](double t) {
                   cplx v{};
                   for (const auto& w : copy) v += w(t);
                   return v;
                 },
                 merged(sup), label};
}

SpectralTarget SpectralTarget::from_json(const nlohmann::json& j, const Geometry& g,
                                         const QuadratureGrid& grid, int max_freq) {
  try {
    const std::string sym = j.value("symmetry", "one_sided");
    Symmetry symmetry;
    if (sym == "one_sided") symmetry = Symmetry::one_sided;
    else if (sym == "hermitian_even") symmetry = Symmetry::hermitian_even;
    else throw ConfigError("unknown target symmetry '" + sym + "'");
    std::vector<SmoothWindow> terms;
    for (const auto& t : j.at("terms")) terms.push_back(SmoothWindow::from_json(t, g));
    if (terms.empty()) return zero(max_freq);
    Profile p = sum_profile(terms, j.value("label", std::string("target")));
    if (symmetry == Symmetry::one_sided && !support_inside(p.support, {g.a, g.b}))
      throw GeometryError("one-sided target support must lie inside (a, b)");
    return SpectralTarget(std::move(p), symmetry, grid, max_freq);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed target JSON: ") + e.what());
  }
}

SpectralTarget SpectralTarget::scaled(double r) const {
  SpectralTarget s = *this;
  auto base = profile_;
  s.profile_ = Profile{[base, r](double t) { return r * base(t); }, profile_.support,
                       profile_.label};
  s.spectrum_ = spectrum_ * cplx(r, 0.0);
  if (symmetry_ == Symmetry::hermitian_even) s.spectrum_ = s.spectrum_.real_projection();
  s.zero_ = zero_ || r == 0.0;
  return s;
}

SpectralTarget SpectralTarget::times(const Profile& w, Symmetry symmetry,
                                     const QuadratureGrid& grid, Exec exec) const {
  if (zero_) return zero(spectrum_.max_freq());
  auto base = profile_;
  Profile p{[base, w](double t) {
              const cplx v = base(t);
              return v == cplx{} ? cplx{} : v * w(t);
            },
            profile_.support, profile_.label + "*" + w.label};
  return SpectralTarget(std::move(p), symmetry, grid, spectrum_.max_freq(), exec);
}

SpectralTarget build_Tr(const SpectralTarget& s, double r) {
  if (s.zero_ || r == 0.0) return SpectralTarget::zero(s.spectrum_.max_freq());
  SpectralTarget out;
  auto base = s.profile_;
  Support sup = s.profile_.support;
  for (const auto& iv : mirrored(s.profile_.support)) sup.push_back(iv);
  out.profile_ = Profile{[base, r](double t) {
                           return r * (base(t) + std::conj(base(-t)));
                         },
                         merged(sup), "Tr(" + s.profile_.label + ")"};
  out.symmetry_ = Symmetry::hermitian_even;
  const int k = s.spectrum_.max_freq();
  std::vector<cplx> c(2 * static_cast<std::size_t>(k) + 1);
  for (int i = -k; i <= k; ++i) {
    const cplx ck = s.spectrum_[i];
    c[i + k] = r * (ck + std::conj(ck));
  }
  const Interval box = bounding_box(out.profile_.support);
  out.spectrum_ = TrigSpectrum(std::move(c), box, 2.0 * r * s.spectrum_.tail_mass())
                      .real_projection();
  return out;
}

}  // namespace spectile
