// Time stepping on the mesh t_n = n*sigma/m: explicit Euler and explicit SSP Runge-Kutta methods
// in canonical Shu-Osher form.
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "delaysir/grid.hpp"
#include "delaysir/model.hpp"
#include "delaysir/qualitative.hpp"

namespace delaysir {

/// Explicit Butcher tableau: `a` strictly lower triangular (s x s, row-major), weights `b`.
struct ButcherTableau {
  std::size_t s{1};
  std::vector<double> a;
  std::vector<double> b;

  double coeff(std::size_t i, std::size_t j) const { return a[i * s + j]; }
  /// Stage abscissa c_i = sum_j a_ij.
  double abscissa(std::size_t i) const;
  /// Throws std::invalid_argument unless explicit, sized consistently and sum(b) = 1.
  void validate() const;

  static ButcherTableau euler();
  static ButcherTableau ssprk2();  // Heun: a21 = 1, b = (1/2, 1/2)
  static ButcherTableau ssprk3();  // a21 = 1, a31 = a32 = 1/4, b = (1/6, 1/6, 2/3)
};

/// u_(i) = v_i u^n + sum_{j<i} alpha_ij (u_(j) + (dt/r) F(u_(j))), i = 1..s+1.
/// alpha is (s+1) x (s+1) row-major.
struct ShuOsherForm {
  std::size_t stages{1};  // s; the form has s+1 rows
  double r{0.0};
  std::vector<double> alpha;
  std::vector<double> v;
  double C{0.0};  // SSP coefficient of the tableau the form was built from

  double a(std::size_t i, std::size_t j) const { return alpha[i * (stages + 1) + j]; }
};

/// alpha_r = r (I + rB)^{-1} B, v_r = (I + rB)^{-1} e with B = [[a, 0], [b^T, 0]].
/// Throws SingularError if I + rB is numerically singular.
ShuOsherForm shu_osher(const ButcherTableau& tableau, double r);

/// Largest r >= 0 with alpha_r, v_r >= -1e-12 entrywise. Bisection to 1e-10 on [0, r_hi], r_hi
/// doubled from 1 until infeasible; a small-denominator rational within the bisection
/// tolerance that is feasible is returned exactly. Returns 0 if only r = 0 is feasible or the
/// feasible interval is shorter than 1e-3.
double ssp_coefficient(const ButcherTableau& tableau);

/// The optimal form, built at r = C. Throws std::invalid_argument when C = 0.
ShuOsherForm optimal_shu_osher(const ButcherTableau& tableau);

/// S+ = S - tau S.T - c tau S,  I+ = I + tau S.T - b tau I,  R+ = R + b tau I + c tau S.
SIRState euler_step(const SIRState& state, const Field& T_delayed, double tau,
                    const ModelParams& params);

/// One Runge-Kutta step in Shu-Osher form with substep tau/C. The delayed force is held at
/// T_delayed for every stage.
SIRState rk_step(const SIRState& state, const Field& T_delayed, double tau,
                 const ModelParams& params, const ShuOsherForm& form);

/// As above, with a separate delayed force per stage: stage_forces[j] drives the Euler substep
/// taken from u_(j+1). Needs form.stages entries.
SIRState rk_step(const SIRState& state, std::span<const Field* const> stage_forces, double tau,
                 const ModelParams& params, const ShuOsherForm& form);

/// Which delayed level feeds the RK stages.
enum class DelayCoupling {
  /// Every stage sees the level t_n - sigma.
  frozen,
  /// Stage j sees t_n + c_j tau - sigma: the mesh level itself when c_j is 0 or 1, the convex
  /// combination of the two neighbouring force matrices otherwise.
  stage_aligned,
};

/// A named time integrator. Euler uses the closed-form update; everything else goes through
/// rk_step with the optimal Shu-Osher form of `tableau`.
struct Scheme {
  std::string name;
  ButcherTableau tableau;
  ShuOsherForm form;
  bool closed_form_euler{false};

  double ssp() const { return form.C; }

  /// "euler", "ssprk2" (alias "rk2"), "ssprk3" (alias "rk3"). Throws std::invalid_argument otherwise.
  static Scheme from_id(const std::string& id);
  static Scheme custom(const std::string& name, ButcherTableau tableau);
};

struct SimulationOptions {
  std::size_t snapshot_every{0};  // in steps; 0 means every m steps (once per delay)
  DelayCoupling coupling{DelayCoupling::stage_aligned};
  bool stop_on_violation{false};
  bool keep_step_log{true};
};

struct StepRecord {
  long step{0};  // n of the step t_n -> t_{n+1}
  double t{0.0}; // t_{n+1}
  PropertyVerdict verdict;
};

struct Trajectory {
  std::string scheme;
  std::size_t m{0};
  double tau{0.0};
  double requested_final_time{0.0};
  double final_time{0.0};     // last mesh time reached
  bool rounded_down{false};   // requested_final_time was not on the mesh
  bool stopped_early{false};  // stop_on_violation fired or state became non-finite
  long steps{0};
  double M{0.0};  // max of S+I+R at t = 0
  std::vector<SIRState> snapshots;
  std::vector<StepRecord> step_log;
  PropertyVerdict verdict;  // all steps merged
};

/// Seeds the history at t = -sigma, -sigma+tau, ..., 0 from `history` and advances to the
/// largest mesh time not exceeding final_time, checking D1-D4 after every step.
Trajectory simulate(const ModelParams& params, const GridSpec& grid, const DiscCubature& cub,
                    const HistorySpec& history, const Scheme& scheme, std::size_t m,
                    double final_time, const SimulationOptions& options = {});

}  // namespace delaysir
