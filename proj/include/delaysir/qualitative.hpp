// Discrete qualitative properties of a single time step:
//   D1 non-negativity, D2 pointwise conservation of S+I+R, D3 S non-increasing, D4 R non-decreasing.
#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "delaysir/grid.hpp"

namespace delaysir {

struct Violation {
  long step{0};
  std::size_t k{0};
  std::size_t l{0};
  int property{0};     // 1..4
  double magnitude{0.0};
};

struct PropertyVerdict {
  bool d1{true};
  bool d2{true};
  bool d3{true};
  bool d4{true};
  std::optional<Violation> first_violation;
  double max_drift{0.0};  // max_{k,l} |Z_next - Z_prev|

  bool all_pass() const { return d1 && d2 && d3 && d4; }
  /// Folds a later verdict in; the earlier first_violation wins.
  void merge(const PropertyVerdict& later);
};

/// Relative tolerance: an entry is a violation only beyond 1e-12 * M.
inline constexpr double kPropertyTolerance = 1e-12;

/// Checks D1-D4 for prev -> next with tolerance kPropertyTolerance * M. Non-finite entries fail D1.
/// `step` labels a reported violation.
PropertyVerdict check_step(const SIRState& prev, const SIRState& next, double M, long step = 0);

std::string property_name(int property);

}  // namespace delaysir
