#pragma once

#include <algorithm>

namespace qtrace {

/// Linear RGB triple.
struct Rgb {
  double r = 0, g = 0, b = 0;

  constexpr Rgb() = default;
  constexpr Rgb(double r_, double g_, double b_) : r(r_), g(g_), b(b_) {}
  static constexpr Rgb gray(double v) { return {v, v, v}; }

  constexpr double operator[](int i) const { return i == 0 ? r : i == 1 ? g : b; }

  constexpr Rgb& operator+=(const Rgb& o) { r += o.r; g += o.g; b += o.b; return *this; }
  constexpr Rgb& operator*=(double s) { r *= s; g *= s; b *= s; return *this; }

  friend constexpr Rgb operator+(Rgb a, const Rgb& o) { return a += o; }
  friend constexpr Rgb operator*(Rgb a, double s) { return a *= s; }
  friend constexpr Rgb operator*(double s, Rgb a) { return a *= s; }
  friend constexpr Rgb operator*(const Rgb& a, const Rgb& o) { return {a.r * o.r, a.g * o.g, a.b * o.b}; }
  friend constexpr bool operator==(const Rgb&, const Rgb&) = default;

  constexpr bool is_black() const { return r == 0 && g == 0 && b == 0; }
  constexpr double max_component() const { return std::max({r, g, b}); }
  /// Rec. 709 luminance.
  constexpr double luminance() const { return 0.2126 * r + 0.7152 * g + 0.0722 * b; }
};

}  // namespace qtrace
