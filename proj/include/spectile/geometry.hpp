#pragma once

#include <string>
#include <vector>

namespace spectile {

/// Closed or open real interval [lo, hi]; openness is decided by the caller.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  bool contains(double t) const { return lo <= t && t <= hi; }
  bool contains_open(double t) const { return lo < t && t < hi; }
  /// True if this interval lies strictly inside the open interval `outer`.
  bool strictly_inside(const Interval& outer) const {
    return outer.lo < lo && hi < outer.hi;
  }
  Interval mirrored() const { return {-hi, -lo}; }
  bool operator==(const Interval&) const = default;
};

/// Union of open intervals; used for supports of profiles.
using Support = std::vector<Interval>;

Interval bounding_box(const Support& s);
bool support_inside(const Support& s, const Interval& outer);
Support mirrored(const Support& s);
Support merged(Support s);

/// The three window parameters 0 < a < b < l < 1/2.
struct Geometry {
  double a = 0.15;
  double b = 0.30;
  double l = 0.40;

  void validate() const;
  Interval window() const { return {-b, b}; }
};

std::string to_string(const Interval& iv);

}  // namespace spectile
