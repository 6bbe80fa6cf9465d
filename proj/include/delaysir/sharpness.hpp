// Empirical sharpness of the step-size bound: scan coarser meshes until the qualitative
// properties break.
#pragma once

#include <cstddef>
#include <vector>

#include "delaysir/bounds.hpp"
#include "delaysir/integrators.hpp"

namespace delaysir {

struct ProblemSetup {
  GridSpec grid = make_grid(1.0, 1.0, 20, 20);
  ModelParams params;
  HistorySpec history;
  std::size_t cubature_order{40};
  double final_time{15.0};
  DelayCoupling coupling{DelayCoupling::stage_aligned};
};

struct ScanPoint {
  std::size_t m{0};
  bool pass{false};
  std::optional<Violation> violation;
};

struct SharpnessRow {
  double delta{0.0};
  double sigma{0.0};
  double b{0.0};
  double theor_bound{0.0};
  double time_step{0.0};   // sigma / m_tilde
  double real_bound{0.0};  // sigma / m_exp
  long diff{0};            // m_tilde - m_exp
  double ratio{0.0};       // time_step / real_bound
  std::size_t m_tilde{0};
  std::size_t m_exp{0};
  bool valid{false};       // false when the starting mesh already fails
  std::vector<ScanPoint> scan;  // descending m
};

/// Runs the problem for m = m_start, m_start-1, ..., m_floor (independent runs, executed
/// concurrently) and picks m_exp = the smallest passing m whose neighbour m-1 fails, or
/// m_floor if every scanned mesh passes. m_start <= 0 means "use m_tilde".
SharpnessRow find_experimental_bound(const ProblemSetup& setup, const Scheme& scheme,
                                     std::size_t m_start = 0, std::size_t m_floor = 1);

}  // namespace delaysir
