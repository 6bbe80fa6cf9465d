// Shape-preserving (Fritsch-Carlson / pchip) interpolation in 1-D and its tensor extension
// to nodal fields.
#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "delaysir/grid.hpp"

namespace delaysir {

/// pchip derivative choice at every knot. Zero at local extrema and flat spots, weighted
/// harmonic mean of adjacent secants elsewhere, three-point one-sided rule at the ends.
/// Throws std::invalid_argument for fewer than two knots or non-increasing xs.
std::vector<double> fritsch_carlson_slopes(std::span<const double> xs, std::span<const double> ys);

/// Same slopes for knots spaced uniformly by h, written into ds (size ys.size()).
void fritsch_carlson_slopes_uniform(std::span<const double> ys, double h, std::span<double> ds);

/// Cubic Hermite value on [x0, x0+h] at local coordinate t in [0,1], clamped to the data
/// range of the interval (the exact interpolant never leaves it; the clamp only absorbs rounding).
inline double hermite_segment(double y0, double y1, double d0, double d1, double h, double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  double v = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
  const double lo = y0 < y1 ? y0 : y1;
  const double hi = y0 < y1 ? y1 : y0;
  if (v < lo) v = lo;
  if (v > hi) v = hi;
  return v;
}

class MonotoneCubic1D {
 public:
  MonotoneCubic1D(std::vector<double> xs, std::vector<double> ys);

  /// Throws std::out_of_range when x is outside [xs.front(), xs.back()].
  double operator()(double x) const;

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  const std::vector<double>& ds() const { return ds_; }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> ds_;
};

inline double eval_1d(const MonotoneCubic1D& interp, double x) { return interp(x); }

/// Evaluates a nodal field anywhere in the plane: pchip along x on every grid row, then pchip
/// along y through the resulting column. Exterior points of [0,A]x[0,B] evaluate to 0.
/// Immutable after construction; concurrent evaluation is safe.
class FieldInterpolant {
 public:
  FieldInterpolant(const GridSpec& grid, Field field);

  double operator()(double x, double y) const;

  /// The x-pass: the L row values at abscissa x (x must be inside [0,A]).
  void column_at(double x, std::span<double> out) const;

  const GridSpec& grid() const { return grid_; }
  const Field& field() const { return field_; }

 private:
  GridSpec grid_;
  Field field_;
  Field row_slopes_;  // d/dx at each node, per row
};

inline double eval_field(const FieldInterpolant& fi, double x, double y) { return fi(x, y); }

/// Locates the uniform-knot interval holding x in [0, (n-1)h]; returns (index, local t).
inline std::pair<std::size_t, double> locate_uniform(double x, double h, std::size_t n) {
  double s = x / h;
  // Snap onto a knot so node queries reproduce stored values exactly.
  const double r = std::round(s);
  if (std::abs(s - r) < 1e-9) s = r;
  std::size_t i = s <= 0.0 ? 0 : static_cast<std::size_t>(s);
  if (i > n - 2) i = n - 2;
  double t = s - static_cast<double>(i);
  if (t < 0.0) t = 0.0;
  if (t > 1.0) t = 1.0;
  return {i, t};
}

}  // namespace delaysir
