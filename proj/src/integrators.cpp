#include "delaysir/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "delaysir/errors.hpp"

namespace delaysir {

void ButcherTableau::validate() const {
  if (s == 0) throw std::invalid_argument("ButcherTableau: at least one stage required");
  if (a.size() != s * s) throw std::invalid_argument("ButcherTableau: a must be s x s");
  if (b.size() != s) throw std::invalid_argument("ButcherTableau: b must have s entries");
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i; j < s; ++j) {
      if (coeff(i, j) != 0.0) {
        throw std::invalid_argument("ButcherTableau: a must be strictly lower triangular (explicit)");
      }
    }
  }
  for (double x : a) {
    if (!std::isfinite(x)) throw std::invalid_argument("ButcherTableau: non-finite coefficient");
  }
  const double sum_b = std::accumulate(b.begin(), b.end(), 0.0);
  if (std::abs(sum_b - 1.0) > 1e-12) throw std::invalid_argument("ButcherTableau: weights must sum to 1");
}

double ButcherTableau::abscissa(std::size_t i) const {
  double c = 0.0;
  for (std::size_t j = 0; j < i; ++j) c += coeff(i, j);
  return c;
}

ButcherTableau ButcherTableau::euler() { return {1, {0.0}, {1.0}}; }

ButcherTableau ButcherTableau::ssprk2() {
  return {2, {0.0, 0.0, 1.0, 0.0}, {0.5, 0.5}};
}

ButcherTableau ButcherTableau::ssprk3() {
  return {3, {0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.25, 0.25, 0.0}, {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}};
}

namespace {

// Solves (I + rB) X = RHS for an n x n system and `cols` right-hand sides, Gaussian elimination
// with partial pivoting. Matrices row-major.
std::vector<double> solve(std::vector<double> M, std::vector<double> rhs, std::size_t n,
                          std::size_t cols) {
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t piv = p;
    for (std::size_t i = p + 1; i < n; ++i) {
      if (std::abs(M[i * n + p]) > std::abs(M[piv * n + p])) piv = i;
    }
    if (std::abs(M[piv * n + p]) < 1e-14) throw SingularError("shu_osher: I + rB is singular");
    if (piv != p) {
      for (std::size_t j = 0; j < n; ++j) std::swap(M[p * n + j], M[piv * n + j]);
      for (std::size_t j = 0; j < cols; ++j) std::swap(rhs[p * cols + j], rhs[piv * cols + j]);
    }
    for (std::size_t i = p + 1; i < n; ++i) {
      const double f = M[i * n + p] / M[p * n + p];
      if (f == 0.0) continue;
      for (std::size_t j = p; j < n; ++j) M[i * n + j] -= f * M[p * n + j];
      for (std::size_t j = 0; j < cols; ++j) rhs[i * cols + j] -= f * rhs[p * cols + j];
    }
  }
  for (std::size_t pi = n; pi-- > 0;) {
    for (std::size_t j = 0; j < cols; ++j) {
      double acc = rhs[pi * cols + j];
      for (std::size_t q = pi + 1; q < n; ++q) acc -= M[pi * n + q] * rhs[q * cols + j];
      rhs[pi * cols + j] = acc / M[pi * n + pi];
    }
  }
  return rhs;
}

bool feasible(const ShuOsherForm& f) {
  constexpr double kFloor = -1e-12;
  return std::all_of(f.alpha.begin(), f.alpha.end(), [](double x) { return x >= kFloor; }) &&
         std::all_of(f.v.begin(), f.v.end(), [](double x) { return x >= kFloor; });
}

bool feasible_at(const ButcherTableau& t, double r) {
  try {
    return feasible(shu_osher(t, r));
  } catch (const SingularError&) {
    return false;
  }
}

}  // namespace

ShuOsherForm shu_osher(const ButcherTableau& tableau, double r) {
  tableau.validate();
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("shu_osher: r must be >= 0");
  const std::size_t s = tableau.s;
  const std::size_t n = s + 1;
  std::vector<double> B(n * n, 0.0);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) B[i * n + j] = tableau.coeff(i, j);
  }
  for (std::size_t j = 0; j < s; ++j) B[s * n + j] = tableau.b[j];

  std::vector<double> M(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) M[i * n + j] = (i == j ? 1.0 : 0.0) + r * B[i * n + j];
  }
  // Right-hand sides [B | e] solved together.
  std::vector<double> rhs(n * (n + 1), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rhs[i * (n + 1) + j] = B[i * n + j];
    rhs[i * (n + 1) + n] = 1.0;
  }
  const std::vector<double> X = solve(std::move(M), std::move(rhs), n, n + 1);

  ShuOsherForm f;
  f.stages = s;
  f.r = r;
  f.alpha.assign(n * n, 0.0);
  f.v.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) f.alpha[i * n + j] = r * X[i * (n + 1) + j];
    f.v[i] = X[i * (n + 1) + n];
  }
  return f;
}

double ssp_coefficient(const ButcherTableau& tableau) {
  tableau.validate();
  constexpr double kTol = 1e-10;
  constexpr double kCap = 1 << 20;
  double hi = 1.0;
  while (feasible_at(tableau, hi)) {
    if (hi >= kCap) return hi;
    hi *= 2.0;
  }
  double lo = 0.0;
  if (!feasible_at(tableau, lo)) return 0.0;
  while (hi - lo > kTol) {
    const double mid = 0.5 * (lo + hi);
    (feasible_at(tableau, mid) ? lo : hi) = mid;
  }
  // A coefficient that goes negative like -k r^2 stays inside the rounding slack up to
  // r ~ 1e-6/sqrt(k); such a sliver is not a usable SSP interval.
  if (lo < 1e-3) return 0.0;
  for (int den = 1; den <= 12; ++den) {
    const double q = std::round(lo * den) / den;
    if (q > 0.0 && std::abs(q - lo) <= 2.0 * kTol && feasible_at(tableau, q)) return q;
  }
  return lo;
}

ShuOsherForm optimal_shu_osher(const ButcherTableau& tableau) {
  const double C = ssp_coefficient(tableau);
  if (!(C > 0.0)) throw std::invalid_argument("optimal_shu_osher: SSP coefficient is zero");
  ShuOsherForm f = shu_osher(tableau, C);
  f.C = C;
  return f;
}

SIRState euler_step(const SIRState& state, const Field& T, double tau, const ModelParams& p) {
  if (!state.consistent() || !state.S.same_shape(T)) throw std::invalid_argument("euler_step: shape mismatch");
  SIRState out = state;
  for (std::size_t i = 0; i < T.size(); ++i) {
    const double S = state.S[i];
    const double I = state.I[i];
    const double infection = tau * S * T[i];
    out.S[i] = S - infection - p.c * tau * S;
    out.I[i] = I + infection - p.b * tau * I;
    out.R[i] = state.R[i] + p.b * tau * I + p.c * tau * S;
  }
  out.t = state.t + tau;
  return out;
}

namespace {

// u + h F(u, T)
SIRState euler_substep(const SIRState& u, const Field& T, double h, const ModelParams& p) {
  SIRState out = u;
  for (std::size_t i = 0; i < T.size(); ++i) {
    const double S = u.S[i];
    const double I = u.I[i];
    const double infection = S * T[i];
    out.S[i] = S + h * (-infection - p.c * S);
    out.I[i] = I + h * (infection - p.b * I);
    out.R[i] = u.R[i] + h * (p.b * I + p.c * S);
  }
  return out;
}

void axpy(SIRState& acc, double w, const SIRState& x) {
  for (std::size_t i = 0; i < acc.S.size(); ++i) {
    acc.S[i] += w * x.S[i];
    acc.I[i] += w * x.I[i];
    acc.R[i] += w * x.R[i];
  }
}

}  // namespace

SIRState rk_step(const SIRState& state, const Field& T, double tau, const ModelParams& params,
                 const ShuOsherForm& form) {
  std::vector<const Field*> forces(form.stages, &T);
  return rk_step(state, forces, tau, params, form);
}

SIRState rk_step(const SIRState& state, std::span<const Field* const> stage_forces, double tau,
                 const ModelParams& params, const ShuOsherForm& form) {
  if (stage_forces.size() != form.stages) throw std::invalid_argument("rk_step: one force per stage");
  for (const Field* T : stage_forces) {
    if (!state.consistent() || !state.S.same_shape(*T)) throw std::invalid_argument("rk_step: shape mismatch");
  }
  if (!(form.C > 0.0)) throw std::invalid_argument("rk_step: form needs a positive SSP coefficient");
  const std::size_t n = form.stages + 1;
  const double h = tau / form.C;
  const Field zero(state.S.K(), state.S.L());

  std::vector<SIRState> stage;     // u_(i)
  std::vector<SIRState> substep;   // u_(i) + h F(u_(i))
  stage.reserve(n);
  substep.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SIRState u{zero, zero, zero, state.t};
    if (form.v[i] != 0.0) axpy(u, form.v[i], state);
    for (std::size_t j = 0; j < i; ++j) {
      const double w = form.a(i, j);
      if (w != 0.0) axpy(u, w, substep[j]);
    }
    stage.push_back(std::move(u));
    if (i + 1 < n) substep.push_back(euler_substep(stage.back(), *stage_forces[i], h, params));
  }
  SIRState out = std::move(stage.back());
  out.t = state.t + tau;
  return out;
}

Scheme Scheme::from_id(const std::string& id) {
  if (id == "euler") {
    Scheme s = custom("euler", ButcherTableau::euler());
    s.closed_form_euler = true;
    return s;
  }
  if (id == "ssprk2" || id == "rk2") return custom("ssprk2", ButcherTableau::ssprk2());
  if (id == "ssprk3" || id == "rk3") return custom("ssprk3", ButcherTableau::ssprk3());
  throw std::invalid_argument("unknown scheme id '" + id + "' (expected euler, ssprk2 or ssprk3)");
}

Scheme Scheme::custom(const std::string& name, ButcherTableau tableau) {
  tableau.validate();
  Scheme s;
  s.name = name;
  s.form = optimal_shu_osher(tableau);
  s.tableau = std::move(tableau);
  return s;
}

Trajectory simulate(const ModelParams& params, const GridSpec& grid, const DiscCubature& cub,
                    const HistorySpec& history, const Scheme& scheme, std::size_t m,
                    double final_time, const SimulationOptions& options) {
  params.validate();
  history.validate();
  if (m == 0) throw std::invalid_argument("simulate: m must be a positive integer");
  if (!(final_time > 0.0) || !std::isfinite(final_time)) {
    throw std::invalid_argument("simulate: final time must be > 0");
  }
  const double sigma = params.sigma;
  const double tau = sigma / static_cast<double>(m);
  auto mesh_time = [&](long n) { return sigma * (static_cast<double>(n) / static_cast<double>(m)); };

  Trajectory traj;
  traj.scheme = scheme.name;
  traj.m = m;
  traj.tau = tau;
  traj.requested_final_time = final_time;
  const long n_steps = static_cast<long>(std::floor(final_time / tau + 1e-9));
  traj.rounded_down = std::abs(mesh_time(n_steps) - final_time) > 1e-9 * std::max(1.0, final_time);

  const ForceAssembler assembler(grid, cub, params.kernel);
  HistoryBuffer buffer(m, tau);
  for (long j = -static_cast<long>(m); j <= 0; ++j) {
    const double t = mesh_time(j);
    SIRState h = history_state(history, sigma, grid, t);
    buffer.push(std::make_shared<const HistoryLevel>(
        HistoryLevel{j, t, FieldInterpolant(grid, std::move(h.I)), std::nullopt}));
  }

  SIRState state = history_state(history, sigma, grid, 0.0);
  traj.M = state.total().max();
  const std::size_t every = options.snapshot_every ? options.snapshot_every : m;
  traj.snapshots.push_back(state);

  // Per-stage offsets into the delayed window, for stage-aligned coupling.
  const std::size_t s = scheme.tableau.s;
  std::vector<double> abscissa(s, 0.0);
  for (std::size_t j = 0; j < s; ++j) {
    abscissa[j] = scheme.tableau.abscissa(j);
    if (options.coupling == DelayCoupling::stage_aligned &&
        !(abscissa[j] >= 0.0 && abscissa[j] <= 1.0)) {
      throw std::invalid_argument("simulate: stage-aligned coupling needs stage abscissae in [0, 1]");
    }
  }
  std::vector<Field> blended(s);
  std::vector<const Field*> stage_forces(s);

  long n = 0;
  for (; n < n_steps; ++n) {
    const Field& T = buffer.oldest().force_matrix(assembler);
    SIRState next;
    if (scheme.closed_form_euler) {
      next = euler_step(state, T, tau, params);
    } else if (options.coupling == DelayCoupling::frozen) {
      next = rk_step(state, T, tau, params, scheme.form);
    } else {
      for (std::size_t j = 0; j < s; ++j) {
        const double theta = abscissa[j];
        if (theta == 0.0) {
          stage_forces[j] = &T;
        } else if (theta == 1.0) {
          stage_forces[j] = &buffer.lagged(m - 1).force_matrix(assembler);
        } else {
          const Field& next_level = buffer.lagged(m - 1).force_matrix(assembler);
          blended[j] = (1.0 - theta) * T + theta * next_level;
          stage_forces[j] = &blended[j];
        }
      }
      next = rk_step(state, stage_forces, tau, params, scheme.form);
    }
    next.t = mesh_time(n + 1);
    const PropertyVerdict v = check_step(state, next, traj.M, n);
    traj.verdict.merge(v);
    if (options.keep_step_log) traj.step_log.push_back({n, next.t, v});
    state = std::move(next);
    buffer.push(std::make_shared<const HistoryLevel>(
        HistoryLevel{n + 1, state.t, FieldInterpolant(grid, state.I), std::nullopt}));
    const bool last = n + 1 == n_steps;
    const bool broken = !state.S.all_finite() || !state.I.all_finite() || !state.R.all_finite();
    const bool stop = broken || (options.stop_on_violation && !v.all_pass());
    if (last || stop || static_cast<std::size_t>(n + 1) % every == 0) traj.snapshots.push_back(state);
    if (stop) {
      traj.stopped_early = !last;
      ++n;
      break;
    }
  }
  traj.steps = n;
  traj.final_time = mesh_time(n);
  return traj;
}

}  // namespace delaysir
