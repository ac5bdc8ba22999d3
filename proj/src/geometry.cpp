#include "spectile/geometry.hpp"

#include <algorithm>
#include <cstdio>

#include "spectile/errors.hpp"

namespace spectile {

Interval bounding_box(const Support& s) {
  if (s.empty()) return {0.0, 0.0};
  Interval box = s.front();
  for (const auto& iv : s) {
    box.lo = std::min(box.lo, iv.lo);
    box.hi = std::max(box.hi, iv.hi);
  }
  return box;
}

bool support_inside(const Support& s, const Interval& outer) {
  return std::all_of(s.begin(), s.end(),
                     [&](const Interval& iv) { return iv.strictly_inside(outer); });
}

Support mirrored(const Support& s) {
  Support out;
  out.reserve(s.size());
  for (const auto& iv : s) out.push_back(iv.mirrored());
  return merged(std::move(out));
}

Support merged(Support s) {
  std::sort(s.begin(), s.end(),
            [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  Support out;
  for (const auto& iv : s) {
    if (iv.hi <= iv.lo) continue;
    if (!out.empty() && iv.lo <= out.back().hi)
      out.back().hi = std::max(out.back().hi, iv.hi);
    else
      out.push_back(iv);
  }
  return out;
}

void Geometry::validate() const {
  if (!(0.0 < a && a < b && b < l && l < 0.5))
    throw ConfigError("geometry must satisfy 0 < a < b < l < 1/2 (got a=" +
                      std::to_string(a) + ", b=" + std::to_string(b) +
                      ", l=" + std::to_string(l) + ")");
}

std::string to_string(const Interval& iv) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.6g, %.6g)", iv.lo, iv.hi);
  return buf;
}

}  // namespace spectile
