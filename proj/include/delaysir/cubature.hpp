// Positive-weight cubature over the disc and the discrete infection force.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace delaysir {

struct Point2 {
  double x{0.0};
  double y{0.0};
};

/// Weight function W(x', y') = a * (delta - |(x', y') - (x, y)|) on the delta-ball.
struct KernelParams {
  double a{100.0};
  double delta{0.1};

  void validate() const;
};

/// Gauss-Legendre rule on [0,1]: nodes in (0,1) ascending, positive weights summing to 1.
struct UnitRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [0,1], exact for polynomials of degree <= 2n-1.
/// Nodes come from Newton iteration on P_n. Throws std::invalid_argument for n == 0.
UnitRule gauss_nodes_unit(std::size_t n);

/// Tensor rule over the polar square (r', theta') in [0,1)^2 mapped onto the ball of radius delta.
/// Point i = n*j + l has offset mu_j*delta*(cos 2 pi mu_l, sin 2 pi mu_l) and weight
/// omega_j*omega_l*2*pi*delta^2*mu_j.
struct DiscCubature {
  double delta{0.0};
  std::vector<Point2> offsets;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double weight_sum() const;
};

DiscCubature build_disc_cubature(double delta, std::size_t n);

double kernel_W(const KernelParams& params, Point2 center, Point2 sample);

/// Sum_i w_i W(center + offset_i) sampler(center + offset_i).
/// The sampler must be total on the plane. Throws EvaluationError on a non-finite sample.
double force_at_point(const DiscCubature& cub, const KernelParams& params, Point2 center,
                      const std::function<double(double, double)>& sampler);

/// Products w_i * W(offset_i). W depends only on the offset, so these are shared by every center.
std::vector<double> kernel_weights(const DiscCubature& cub, const KernelParams& params);

}  // namespace delaysir
