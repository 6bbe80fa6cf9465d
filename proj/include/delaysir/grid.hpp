// Uniform rectangular grid, nodal fields and the SIR state triple.
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace delaysir {

/// Nodal grid on [0,A]x[0,B] including both boundaries: (K-1)*hx = A, (L-1)*hy = B.
struct GridSpec {
  double A{1.0};
  double B{1.0};
  std::size_t K{2};
  std::size_t L{2};
  double hx{1.0};
  double hy{1.0};

  double x(std::size_t k) const { return static_cast<double>(k) * hx; }
  double y(std::size_t l) const { return static_cast<double>(l) * hy; }
  std::size_t size() const { return K * L; }
  double cell_area() const { return hx * hy; }

  bool operator==(const GridSpec&) const = default;
};

GridSpec make_grid(double A, double B, std::size_t K, std::size_t L);

/// K x L matrix of densities. Row-major with row l holding the fixed-y line y_l;
/// indices are zero-based, node (k,l) sits at (k*hx, l*hy).
class Field {
 public:
  Field() = default;
  Field(std::size_t K, std::size_t L, double value = 0.0)
      : K_(K), L_(L), values_(K * L, value) {}
  explicit Field(const GridSpec& grid, double value = 0.0)
      : Field(grid.K, grid.L, value) {}

  std::size_t K() const { return K_; }
  std::size_t L() const { return L_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t k, std::size_t l) { return values_[l * K_ + k]; }
  double operator()(std::size_t k, std::size_t l) const { return values_[l * K_ + k]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  /// Contiguous fixed-y row l (K entries).
  std::span<const double> row(std::size_t l) const {
    return std::span<const double>(values_).subspan(l * K_, K_);
  }

  double min() const;
  double max() const;
  double sum() const;
  bool all_finite() const;
  bool same_shape(const Field& other) const { return K_ == other.K_ && L_ == other.L_; }
  bool matches(const GridSpec& grid) const { return K_ == grid.K && L_ == grid.L; }

  Field& operator*=(double a);
  Field& operator+=(const Field& other);

  bool operator==(const Field&) const = default;

 private:
  std::size_t K_{0};
  std::size_t L_{0};
  std::vector<double> values_;
};

Field operator*(double a, Field f);
Field operator+(Field a, const Field& b);

struct SIRState {
  Field S;
  Field I;
  Field R;
  double t{0.0};

  bool consistent() const { return S.same_shape(I) && S.same_shape(R); }
  /// Pointwise S+I+R.
  Field total() const;
};

SIRState scaled(const SIRState& state, double a);

/// Samples f at every node. Throws EvaluationError naming the node if f is non-finite there.
Field field_from_fn(const GridSpec& grid, const std::function<double(double, double)>& f);

/// Nodal sum of S+I+R times the cell area hx*hy.
double total_mass(const SIRState& state, const GridSpec& grid);

/// Nodal sum of a single field times the cell area.
double field_mass(const Field& field, const GridSpec& grid);

}  // namespace delaysir
