#include "delaysir/model.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace delaysir {

void ModelParams::validate() const {
  if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("recovery rate b must be > 0");
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("vaccination rate c must be >= 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("delay sigma must be > 0");
  kernel.validate();
}

void HistorySpec::validate() const {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("history spread s must be > 0");
  if (!(capacity >= 0.0) || !std::isfinite(capacity)) {
    throw std::invalid_argument("history capacity must be >= 0");
  }
  if (!(scale >= 0.0) || !std::isfinite(scale)) throw std::invalid_argument("history scale must be >= 0");
}

PointSIR history_eval(const HistorySpec& spec, double sigma, double t, double x, double y) {
  if (!(t >= -sigma && t <= 0.0)) {
    std::ostringstream msg;
    msg << "history_eval: t = " << t << " outside [" << -sigma << ", 0]";
    throw std::invalid_argument(msg.str());
  }
  const double dx = (x - spec.center.x) / spec.s;
  const double dy = (y - spec.center.y) / spec.s;
  const double gauss =
      std::exp(-0.5 * (dx * dx + dy * dy)) / (2.0 * std::numbers::pi * spec.s * spec.s);
  const double infected = spec.scale * gauss * (1.0 + t / sigma);
  return {spec.capacity - infected, infected, 0.0};
}

SIRState history_state(const HistorySpec& spec, double sigma, const GridSpec& grid, double t) {
  SIRState st{Field(grid), Field(grid), Field(grid), t};
  for (std::size_t l = 0; l < grid.L; ++l) {
    for (std::size_t k = 0; k < grid.K; ++k) {
      const PointSIR p = history_eval(spec, sigma, t, grid.x(k), grid.y(l));
      st.S(k, l) = p.S;
      st.I(k, l) = p.I;
      st.R(k, l) = p.R;
    }
  }
  return st;
}

ForceAssembler::ForceAssembler(const GridSpec& grid, DiscCubature cub, const KernelParams& kernel)
    : grid_(grid), cub_(std::move(cub)), kernel_(kernel), kw_(kernel_weights(cub_, kernel)) {
  unit_force_ = std::accumulate(kw_.begin(), kw_.end(), 0.0);
}

Field ForceAssembler::operator()(const FieldInterpolant& delayed) const {
  const std::size_t K = grid_.K;
  const std::size_t L = grid_.L;
  Field T(grid_);
  std::vector<double> col(L), ds(L);
  for (std::size_t k = 0; k < K; ++k) {
    const double xk = grid_.x(k);
    for (std::size_t i = 0; i < kw_.size(); ++i) {
      const double x = xk + cub_.offsets[i].x;
      if (!(x >= 0.0 && x <= grid_.A)) continue;  // I vanishes outside the domain
      delayed.column_at(x, col);
      fritsch_carlson_slopes_uniform(col, grid_.hy, ds);
      const double wi = kw_[i];
      for (std::size_t l = 0; l < L; ++l) {
        const double y = grid_.y(l) + cub_.offsets[i].y;
        if (!(y >= 0.0 && y <= grid_.B)) continue;
        const auto [j, t] = locate_uniform(y, grid_.hy, L);
        T(k, l) += wi * hermite_segment(col[j], col[j + 1], ds[j], ds[j + 1], grid_.hy, t);
      }
    }
  }
  return T;
}

Field force_matrix(const FieldInterpolant& delayed, const GridSpec& grid, const DiscCubature& cub,
                   const KernelParams& kernel) {
  return ForceAssembler(grid, cub, kernel)(delayed);
}

Derivative rhs(const SIRState& state, const Field& T, const ModelParams& params) {
  if (!state.consistent() || !state.S.same_shape(T)) throw std::invalid_argument("rhs: shape mismatch");
  Derivative d{Field(state.S.K(), state.S.L()), Field(state.S.K(), state.S.L()),
               Field(state.S.K(), state.S.L())};
  for (std::size_t i = 0; i < T.size(); ++i) {
    const double infection = state.S[i] * T[i];
    const double vaccination = params.c * state.S[i];
    const double recovery = params.b * state.I[i];
    d.dS[i] = -infection - vaccination;
    d.dI[i] = infection - recovery;
    d.dR[i] = recovery + vaccination;
  }
  return d;
}

const Field& HistoryLevel::force_matrix(const ForceAssembler& assembler) const {
  if (!force) force = assembler(infected);
  return *force;
}

HistoryBuffer::HistoryBuffer(std::size_t m, double tau) : m_(m), tau_(tau) {
  if (m == 0) throw std::invalid_argument("HistoryBuffer: m must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("HistoryBuffer: tau must be > 0");
}

void HistoryBuffer::push(std::shared_ptr<const HistoryLevel> level) {
  if (!levels_.empty() && level->step != levels_.back()->step + 1) {
    throw std::invalid_argument("HistoryBuffer::push: levels must be consecutive");
  }
  levels_.push_back(std::move(level));
  if (levels_.size() > m_ + 1) levels_.pop_front();
}

const HistoryLevel& HistoryBuffer::lagged(std::size_t lag) const {
  if (lag >= levels_.size()) throw std::out_of_range("HistoryBuffer::lagged: lag beyond stored levels");
  return *levels_[levels_.size() - 1 - lag];
}

}  // namespace delaysir
