#include "delaysir/sharpness.hpp"

#include <future>
#include <stdexcept>

namespace delaysir {

SharpnessRow find_experimental_bound(const ProblemSetup& setup, const Scheme& scheme,
                                     std::size_t m_start, std::size_t m_floor) {
  const DiscCubature cub = build_disc_cubature(setup.params.kernel.delta, setup.cubature_order);
  const BoundReport bounds = compute_bounds(setup.params, setup.grid, cub, setup.history, scheme.ssp());
  if (m_floor == 0) m_floor = 1;
  if (m_start == 0) m_start = bounds.m_tilde;
  if (m_start < m_floor) throw std::invalid_argument("find_experimental_bound: m_start below m_floor");

  SharpnessRow row;
  row.delta = setup.params.kernel.delta;
  row.sigma = setup.params.sigma;
  row.b = setup.params.b;
  row.theor_bound = bounds.tau_theory;
  row.m_tilde = bounds.m_tilde;
  row.time_step = bounds.tau_actual;

  SimulationOptions opts;
  opts.stop_on_violation = true;
  opts.keep_step_log = false;
  opts.coupling = setup.coupling;
  opts.snapshot_every = static_cast<std::size_t>(-1);

  std::vector<std::future<ScanPoint>> jobs;
  for (std::size_t m = m_start; m >= m_floor; --m) {
    jobs.push_back(std::async(std::launch::async, [&, m] {
      const Trajectory tr = simulate(setup.params, setup.grid, cub, setup.history, scheme, m,
                                     setup.final_time, opts);
      return ScanPoint{m, tr.verdict.all_pass(), tr.verdict.first_violation};
    }));
  }
  for (auto& j : jobs) row.scan.push_back(j.get());

  if (!row.scan.front().pass) return row;  // the starting mesh already fails
  row.valid = true;
  row.m_exp = m_floor;
  // scan is ordered by descending m; look for the smallest passing m with m-1 failing
  for (std::size_t i = 0; i + 1 < row.scan.size(); ++i) {
    if (row.scan[i].pass && !row.scan[i + 1].pass) {
      row.m_exp = row.scan[i].m;
    }
  }
  row.real_bound = row.sigma / static_cast<double>(row.m_exp);
  row.diff = static_cast<long>(row.m_tilde) - static_cast<long>(row.m_exp);
  row.ratio = row.time_step / row.real_bound;
  return row;
}

}  // namespace delaysir
