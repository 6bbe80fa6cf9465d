// Semi-discrete delayed SIR system: history functions, delayed force matrix, right-hand side.
#pragma once

#include <cstddef>
#include <deque>
#include <memory>
#include <optional>

#include "delaysir/cubature.hpp"
#include "delaysir/grid.hpp"
#include "delaysir/interpolation.hpp"

namespace delaysir {

struct ModelParams {
  double b{0.05};      // recovery rate
  double c{0.01};      // vaccination rate
  double sigma{1.0};   // latency delay
  KernelParams kernel;

  void validate() const;
};

/// Gaussian outbreak history on [-sigma, 0]:
///   I = scale * exp(-|p - center|^2 / (2 s^2)) / (2 pi s^2) * (1 + t/sigma),
///   S = capacity - I,  R = 0.
/// scale = 0 gives an infection-free history.
struct HistorySpec {
  double s{0.1};
  double capacity{20.0};
  Point2 center{0.5, 0.5};
  double scale{1.0};

  void validate() const;
};

struct PointSIR {
  double S{0.0};
  double I{0.0};
  double R{0.0};
};

/// Throws std::invalid_argument when t is outside [-sigma, 0].
PointSIR history_eval(const HistorySpec& spec, double sigma, double t, double x, double y);

SIRState history_state(const HistorySpec& spec, double sigma, const GridSpec& grid, double t);

/// Assembles discrete force matrices for one (grid, cubature, kernel) triple. The products
/// w_i W(offset_i) are precomputed once; assembly walks the cubature offsets so each pchip
/// column along y is built once per (grid column, offset) pair.
class ForceAssembler {
 public:
  ForceAssembler(const GridSpec& grid, DiscCubature cub, const KernelParams& kernel);

  /// T[k,l] = sum_i w_i W(offset_i) I_hat(x_k + eta_i, y_l + xi_i).
  Field operator()(const FieldInterpolant& delayed) const;

  /// sum_i w_i W(offset_i); the force exerted by a unit density filling the whole ball.
  double unit_force() const { return unit_force_; }

  const GridSpec& grid() const { return grid_; }
  const DiscCubature& cubature() const { return cub_; }
  const KernelParams& kernel() const { return kernel_; }

 private:
  GridSpec grid_;
  DiscCubature cub_;
  KernelParams kernel_;
  std::vector<double> kw_;
  double unit_force_{0.0};
};

Field force_matrix(const FieldInterpolant& delayed, const GridSpec& grid, const DiscCubature& cub,
                   const KernelParams& kernel);

struct Derivative {
  Field dS;
  Field dI;
  Field dR;
};

/// dS = -S.T - cS,  dI = S.T - bI,  dR = bI + cS  (entrywise).
Derivative rhs(const SIRState& state, const Field& T, const ModelParams& params);

/// One stored time level of I: the interpolant and, once requested, its force matrix.
struct HistoryLevel {
  long step{0};  // mesh index n, t = n * tau
  double t{0.0};
  FieldInterpolant infected;
  mutable std::optional<Field> force;

  const Field& force_matrix(const ForceAssembler& assembler) const;
};

/// Ring of the last m+1 levels n-m, ..., n. Pushing evicts the oldest once full.
class HistoryBuffer {
 public:
  HistoryBuffer(std::size_t m, double tau);

  void push(std::shared_ptr<const HistoryLevel> level);

  std::size_t m() const { return m_; }
  double tau() const { return tau_; }
  std::size_t size() const { return levels_.size(); }
  bool full() const { return levels_.size() == m_ + 1; }

  /// Level n - lag, where n is the newest level (lag <= m).
  const HistoryLevel& lagged(std::size_t lag) const;
  const HistoryLevel& oldest() const { return *levels_.front(); }
  const HistoryLevel& newest() const { return *levels_.back(); }

 private:
  std::size_t m_;
  double tau_;
  std::deque<std::shared_ptr<const HistoryLevel>> levels_;
};

}  // namespace delaysir
