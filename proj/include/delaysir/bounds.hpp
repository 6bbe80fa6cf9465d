// Sufficient step-size bounds for positivity/monotonicity and the certified mesh divisor.
#pragma once

#include <cstddef>

#include "delaysir/cubature.hpp"
#include "delaysir/grid.hpp"
#include "delaysir/model.hpp"

namespace delaysir {

struct BoundReport {
  double delta{0.0};
  double sigma{0.0};
  double b{0.0};
  double c{0.0};
  double M{0.0};           // max of S+I+R at t = 0
  double T_bar{0.0};       // uniform bound on the discrete force
  double C{1.0};           // SSP coefficient
  double tau_theory{0.0};  // C * min(1/(T_bar + c), 1/b)
  std::size_t m_tilde{0};  // smallest m with sigma/m < tau_theory
  double tau_actual{0.0};  // sigma / m_tilde
};

/// max over nodes of S+I+R.
double initial_max_density(const SIRState& state_at_zero);

/// max over nodes of M * sum_i w_i W(x_k + eta_i, y_l + xi_i).
double t_bar(const GridSpec& grid, const DiscCubature& cub, const KernelParams& kernel, double M);

/// C * min(1/(T_bar + c), 1/b).
double step_bound(double T_bar, double b, double c, double C);

/// Smallest positive integer m with sigma/m < tau_theory (strict).
std::size_t m_tilde(double sigma, double tau_theory);

BoundReport compute_bounds(const ModelParams& params, const GridSpec& grid, const DiscCubature& cub,
                           const HistorySpec& history, double C);

}  // namespace delaysir
