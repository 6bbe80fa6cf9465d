#include "delaysir/qualitative.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace delaysir {

void PropertyVerdict::merge(const PropertyVerdict& later) {
  d1 = d1 && later.d1;
  d2 = d2 && later.d2;
  d3 = d3 && later.d3;
  d4 = d4 && later.d4;
  if (!first_violation && later.first_violation) first_violation = later.first_violation;
  if (later.max_drift > max_drift) max_drift = later.max_drift;
}

std::string property_name(int property) {
  switch (property) {
    case 1: return "D1";
    case 2: return "D2";
    case 3: return "D3";
    case 4: return "D4";
    default: return "D?";
  }
}

PropertyVerdict check_step(const SIRState& prev, const SIRState& next, double M, long step) {
  if (!prev.consistent() || !next.consistent() || !prev.S.same_shape(next.S)) {
    throw std::invalid_argument("check_step: shape mismatch");
  }
  const double tol = kPropertyTolerance * M;
  const std::size_t K = next.S.K();

  // Worst excess per property, and where it happened.
  std::array<double, 4> worst{0.0, 0.0, 0.0, 0.0};
  std::array<std::size_t, 4> where{0, 0, 0, 0};
  auto note = [&](int p, double excess, std::size_t i) {
    if (std::isnan(excess)) excess = INFINITY;
    if (excess > tol && excess > worst[p]) {
      worst[p] = excess;
      where[p] = i;
    }
  };

  PropertyVerdict v;
  for (std::size_t i = 0; i < next.S.size(); ++i) {
    const double s = next.S[i];
    const double in = next.I[i];
    const double r = next.R[i];
    const double lowest = std::min({s, in, r});
    note(0, std::isfinite(s) && std::isfinite(in) && std::isfinite(r) ? -lowest : INFINITY, i);
    const double drift = std::abs((s + in + r) - (prev.S[i] + prev.I[i] + prev.R[i]));
    if (drift > v.max_drift || std::isnan(drift)) v.max_drift = std::isnan(drift) ? INFINITY : drift;
    note(1, drift, i);
    note(2, s - prev.S[i], i);
    note(3, prev.R[i] - r, i);
  }
  v.d1 = worst[0] == 0.0;
  v.d2 = worst[1] == 0.0;
  v.d3 = worst[2] == 0.0;
  v.d4 = worst[3] == 0.0;
  for (int p = 0; p < 4; ++p) {
    if (worst[p] > 0.0) {
      v.first_violation = Violation{step, where[p] % K, where[p] / K, p + 1, worst[p]};
      break;
    }
  }
  return v;
}

}  // namespace delaysir
