#include "delaysir/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace delaysir {

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

double end_slope(double h0, double h1, double del0, double del1) {
  double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
  if (sign(d) != sign(del0)) {
    d = 0.0;
  } else if (sign(del0) != sign(del1) && std::abs(d) > std::abs(3.0 * del0)) {
    d = 3.0 * del0;
  }
  return d;
}

double interior_slope(double h0, double h1, double del0, double del1) {
  if (sign(del0) * sign(del1) <= 0) return 0.0;
  const double w1 = 2.0 * h1 + h0;
  const double w2 = h1 + 2.0 * h0;
  return (w1 + w2) / (w1 / del0 + w2 / del1);
}

}  // namespace

std::vector<double> fritsch_carlson_slopes(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("fritsch_carlson_slopes: need at least 2 knots");
  if (ys.size() != n) throw std::invalid_argument("fritsch_carlson_slopes: xs/ys size mismatch");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(xs[i + 1] > xs[i])) {
      throw std::invalid_argument("fritsch_carlson_slopes: xs must be strictly increasing");
    }
  }
  std::vector<double> ds(n, 0.0);
  std::vector<double> h(n - 1), del(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = xs[i + 1] - xs[i];
    del[i] = (ys[i + 1] - ys[i]) / h[i];
  }
  if (n == 2) {
    ds[0] = ds[1] = del[0];
    return ds;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) ds[i] = interior_slope(h[i - 1], h[i], del[i - 1], del[i]);
  ds[0] = end_slope(h[0], h[1], del[0], del[1]);
  ds[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
  return ds;
}

void fritsch_carlson_slopes_uniform(std::span<const double> ys, double h, std::span<double> ds) {
  const std::size_t n = ys.size();
  if (n == 2) {
    ds[0] = ds[1] = (ys[1] - ys[0]) / h;
    return;
  }
  double del_prev = (ys[1] - ys[0]) / h;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double del = (ys[i + 1] - ys[i]) / h;
    ds[i] = interior_slope(h, h, del_prev, del);
    del_prev = del;
  }
  ds[0] = end_slope(h, h, (ys[1] - ys[0]) / h, (ys[2] - ys[1]) / h);
  ds[n - 1] = end_slope(h, h, (ys[n - 1] - ys[n - 2]) / h, (ys[n - 2] - ys[n - 3]) / h);
}

MonotoneCubic1D::MonotoneCubic1D(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  ds_ = fritsch_carlson_slopes(xs_, ys_);
}

double MonotoneCubic1D::operator()(double x) const {
  if (!(x >= xs_.front() && x <= xs_.back())) {
    throw std::out_of_range("MonotoneCubic1D: x outside knot range");
  }
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
  if (i >= xs_.size() - 1) i = xs_.size() - 2;
  const double h = xs_[i + 1] - xs_[i];
  const double t = (x - xs_[i]) / h;
  return hermite_segment(ys_[i], ys_[i + 1], ds_[i], ds_[i + 1], h, t);
}

FieldInterpolant::FieldInterpolant(const GridSpec& grid, Field field)
    : grid_(grid), field_(std::move(field)), row_slopes_(grid) {
  if (!field_.matches(grid_)) throw std::invalid_argument("FieldInterpolant: field/grid mismatch");
  std::vector<double> ds(grid_.K);
  for (std::size_t l = 0; l < grid_.L; ++l) {
    fritsch_carlson_slopes_uniform(field_.row(l), grid_.hx, ds);
    for (std::size_t k = 0; k < grid_.K; ++k) row_slopes_(k, l) = ds[k];
  }
}

void FieldInterpolant::column_at(double x, std::span<double> out) const {
  const auto [k, t] = locate_uniform(x, grid_.hx, grid_.K);
  for (std::size_t l = 0; l < grid_.L; ++l) {
    out[l] = hermite_segment(field_(k, l), field_(k + 1, l), row_slopes_(k, l),
                             row_slopes_(k + 1, l), grid_.hx, t);
  }
}

double FieldInterpolant::operator()(double x, double y) const {
  if (!(x >= 0.0 && x <= grid_.A && y >= 0.0 && y <= grid_.B)) return 0.0;
  std::vector<double> col(grid_.L), ds(grid_.L);
  column_at(x, col);
  fritsch_carlson_slopes_uniform(col, grid_.hy, ds);
  const auto [l, t] = locate_uniform(y, grid_.hy, grid_.L);
  return hermite_segment(col[l], col[l + 1], ds[l], ds[l + 1], grid_.hy, t);
}

}  // namespace delaysir
