#include "delaysir/cubature.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "delaysir/errors.hpp"

namespace delaysir {

void KernelParams::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("kernel amplitude a must be > 0");
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("kernel radius delta must be > 0");
  }
}

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
    p0 = p1;
    p1 = p2;
  }
  const double nd = static_cast<double>(n);
  const double dp = nd * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

UnitRule gauss_nodes_unit(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_nodes_unit: n must be >= 1");
  UnitRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = 0.5;
    rule.weights[0] = 1.0;
    return rule;
  }
  const double nd = static_cast<double>(n);
  // Roots of P_n on [-1,1] come in +- pairs; solve for the positive half.
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      auto [p, d] = legendre(n, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) <= 1e-16 * std::abs(x) + 1e-300) break;
    }
    dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1,1] -> [0,1]: node (1+x)/2, weight w/2. Ascending order.
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.5;
  return rule;
}

double DiscCubature::weight_sum() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

DiscCubature build_disc_cubature(double delta, std::size_t n) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("build_disc_cubature: delta must be > 0");
  }
  const UnitRule rule = gauss_nodes_unit(n);
  DiscCubature cub;
  cub.delta = delta;
  cub.offsets.reserve(n * n);
  cub.weights.reserve(n * n);
  const double jac = 2.0 * std::numbers::pi * delta * delta;
  for (std::size_t j = 0; j < n; ++j) {
    const double radius = rule.nodes[j] * delta;
    for (std::size_t l = 0; l < n; ++l) {
      const double angle = 2.0 * std::numbers::pi * rule.nodes[l];
      cub.offsets.push_back({radius * std::cos(angle), radius * std::sin(angle)});
      cub.weights.push_back(rule.weights[j] * rule.weights[l] * jac * rule.nodes[j]);
    }
  }
  return cub;
}

double kernel_W(const KernelParams& params, Point2 center, Point2 sample) {
  const double dist = std::hypot(sample.x - center.x, sample.y - center.y);
  return params.a * (params.delta - dist);
}

std::vector<double> kernel_weights(const DiscCubature& cub, const KernelParams& params) {
  std::vector<double> kw(cub.size());
  for (std::size_t i = 0; i < cub.size(); ++i) {
    kw[i] = cub.weights[i] * kernel_W(params, {0.0, 0.0}, cub.offsets[i]);
  }
  return kw;
}

double force_at_point(const DiscCubature& cub, const KernelParams& params, Point2 center,
                      const std::function<double(double, double)>& sampler) {
  double acc = 0.0;
  for (std::size_t i = 0; i < cub.size(); ++i) {
    const Point2 p{center.x + cub.offsets[i].x, center.y + cub.offsets[i].y};
    const double v = sampler(p.x, p.y);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "force_at_point: sampler returned non-finite value at (" << p.x << ", " << p.y << ")";
      throw EvaluationError(msg.str());
    }
    acc += cub.weights[i] * kernel_W(params, center, p) * v;
  }
  return acc;
}

}  // namespace delaysir
