#include "delaysir/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace delaysir {

double initial_max_density(const SIRState& state_at_zero) { return state_at_zero.total().max(); }

double t_bar(const GridSpec& grid, const DiscCubature& cub, const KernelParams& kernel, double M) {
  if (!(M >= 0.0)) throw std::invalid_argument("t_bar: M must be >= 0");
  double best = 0.0;
  for (std::size_t l = 0; l < grid.L; ++l) {
    for (std::size_t k = 0; k < grid.K; ++k) {
      const Point2 center{grid.x(k), grid.y(l)};
      double acc = 0.0;
      for (std::size_t i = 0; i < cub.size(); ++i) {
        const Point2 p{center.x + cub.offsets[i].x, center.y + cub.offsets[i].y};
        acc += cub.weights[i] * kernel_W(kernel, center, p);
      }
      best = std::max(best, M * acc);
    }
  }
  return best;
}

double step_bound(double T_bar, double b, double c, double C) {
  if (!(b > 0.0)) throw std::invalid_argument("step_bound: b must be > 0");
  if (!(C > 0.0)) throw std::invalid_argument("step_bound: C must be > 0");
  return C * std::min(1.0 / (T_bar + c), 1.0 / b);
}

std::size_t m_tilde(double sigma, double tau_theory) {
  if (!(tau_theory > 0.0)) throw std::invalid_argument("m_tilde: bound must be > 0");
  auto m = static_cast<std::size_t>(std::floor(sigma / tau_theory)) + 1;
  while (m > 1 && sigma / static_cast<double>(m - 1) < tau_theory) --m;
  while (!(sigma / static_cast<double>(m) < tau_theory)) ++m;
  return m;
}

BoundReport compute_bounds(const ModelParams& params, const GridSpec& grid, const DiscCubature& cub,
                           const HistorySpec& history, double C) {
  BoundReport r;
  r.delta = params.kernel.delta;
  r.sigma = params.sigma;
  r.b = params.b;
  r.c = params.c;
  r.C = C;
  r.M = initial_max_density(history_state(history, params.sigma, grid, 0.0));
  r.T_bar = t_bar(grid, cub, params.kernel, r.M);
  r.tau_theory = step_bound(r.T_bar, params.b, params.c, C);
  r.m_tilde = m_tilde(params.sigma, r.tau_theory);
  r.tau_actual = params.sigma / static_cast<double>(r.m_tilde);
  return r;
}

}  // namespace delaysir
