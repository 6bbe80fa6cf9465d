#include "delaysir/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "delaysir/errors.hpp"

namespace delaysir {

GridSpec make_grid(double A, double B, std::size_t K, std::size_t L) {
  if (!(A > 0.0) || !(B > 0.0) || !std::isfinite(A) || !std::isfinite(B)) {
    throw std::invalid_argument("make_grid: domain extents A and B must be positive");
  }
  if (K < 2 || L < 2) {
    throw std::invalid_argument("make_grid: K and L must be at least 2");
  }
  GridSpec g;
  g.A = A;
  g.B = B;
  g.K = K;
  g.L = L;
  g.hx = A / static_cast<double>(K - 1);
  g.hy = B / static_cast<double>(L - 1);
  return g;
}

double Field::min() const {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double Field::max() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double Field::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator*=(double a) {
  for (auto& v : values_) v *= a;
  return *this;
}

Field& Field::operator+=(const Field& other) {
  if (!same_shape(other)) throw std::invalid_argument("Field::operator+=: shape mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field operator*(double a, Field f) {
  f *= a;
  return f;
}

Field operator+(Field a, const Field& b) {
  a += b;
  return a;
}

Field SIRState::total() const {
  Field z = S;
  z += I;
  z += R;
  return z;
}

SIRState scaled(const SIRState& state, double a) {
  return SIRState{a * state.S, a * state.I, a * state.R, state.t};
}

Field field_from_fn(const GridSpec& grid, const std::function<double(double, double)>& f) {
  Field out(grid);
  for (std::size_t l = 0; l < grid.L; ++l) {
    for (std::size_t k = 0; k < grid.K; ++k) {
      const double x = grid.x(k);
      const double y = grid.y(l);
      const double v = f(x, y);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "field_from_fn: non-finite value at node (" << k << ", " << l << ") = (" << x
            << ", " << y << ")";
        throw EvaluationError(msg.str());
      }
      out(k, l) = v;
    }
  }
  return out;
}

double field_mass(const Field& field, const GridSpec& grid) {
  return field.sum() * grid.cell_area();
}

double total_mass(const SIRState& state, const GridSpec& grid) {
  return (state.S.sum() + state.I.sum() + state.R.sum()) * grid.cell_area();
}

}  // namespace delaysir
