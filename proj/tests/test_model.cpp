#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include "delaysir/model.hpp"

using namespace delaysir;

TEST_CASE("history_eval") {
  HistorySpec h;
  auto start = history_eval(h, 1.0, -1.0, 0.5, 0.5);
  CHECK(start.I == 0.0);
  CHECK(start.S == 20.0);
  CHECK(start.R == 0.0);

  auto now = history_eval(h, 1.0, 0.0, 0.5, 0.5);
  CHECK(now.I == doctest::Approx(1 / (2 * M_PI * 0.01)).epsilon(1e-14));
  CHECK(now.I < 20.0);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    double sigma = 0.2 + 2 * u(rng);
    auto p = history_eval(h, sigma, -sigma * u(rng), u(rng), u(rng));
    CHECK(p.S + p.I + p.R == doctest::Approx(20.0).epsilon(1e-14));
    CHECK(p.S >= 0);
    CHECK(p.I >= 0);
  }

  CHECK_THROWS_AS(history_eval(h, 1.0, 0.01, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(history_eval(h, 1.0, -1.01, 0.5, 0.5), std::invalid_argument);

  HistorySpec quiet;
  quiet.scale = 0;
  auto q = history_state(quiet, 1.0, make_grid(1, 1, 10, 10), 0.0);
  CHECK(q.I.max() == 0.0);
  CHECK(q.S.min() == 20.0);
}

TEST_CASE("force matrix") {
  auto g = make_grid(1, 1, 20, 20);
  KernelParams k{100, 0.13};
  auto cub = build_disc_cubature(0.13, 40);
  ForceAssembler assemble(g, cub, k);
  CHECK(assemble.unit_force() == doctest::Approx(100 * M_PI * std::pow(0.13, 3) / 3).epsilon(1e-12));

  SUBCASE("zero and constant delayed densities") {
    auto T0 = assemble(FieldInterpolant(g, Field(g, 0.0)));
    CHECK(T0.max() == 0.0);
    CHECK(T0.min() == 0.0);

    auto T20 = assemble(FieldInterpolant(g, Field(g, 20.0)));
    // Node (10,10) sits at ~(0.526, 0.526): the whole ball lies inside the square.
    CHECK(T20(10, 10) == doctest::Approx(20 * 100 * M_PI * std::pow(0.13, 3) / 3).epsilon(1e-12));
    CHECK(T20.max() == doctest::Approx(20 * assemble.unit_force()).epsilon(1e-12));
    // Corner balls lose three quarters of their area to the exterior.
    CHECK(T20(0, 0) < 0.3 * T20(10, 10));
  }

  SUBCASE("batched assembly equals pointwise cubature") {
    auto I = history_state(HistorySpec{}, 1.0, g, -0.3).I;
    FieldInterpolant fi(g, I);
    auto T = assemble(fi);
    auto T_free = force_matrix(fi, g, cub, k);
    for (std::size_t l = 0; l < g.L; l += 3) {
      for (std::size_t kk = 0; kk < g.K; kk += 2) {
        double ref = force_at_point(cub, k, {g.x(kk), g.y(l)}, [&](double x, double y) { return fi(x, y); });
        CHECK(T(kk, l) == doctest::Approx(ref).epsilon(1e-12));
        CHECK(T_free(kk, l) == doctest::Approx(ref).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("rhs") {
  ModelParams p{0.05, 0.01, 1.0, {}};
  SIRState s{Field(1, 1, 20.0), Field(1, 1, 1.0), Field(1, 1, 0.0), 0.0};
  auto d = rhs(s, Field(1, 1, 0.1), p);
  CHECK(d.dS[0] == doctest::Approx(-2.2));
  CHECK(d.dI[0] == doctest::Approx(1.95));
  CHECK(d.dR[0] == doctest::Approx(0.25));

  SIRState zero{Field(2, 2), Field(2, 2), Field(2, 2), 0.0};
  auto dz = rhs(zero, Field(2, 2), p);
  CHECK(dz.dS.max() == 0.0);
  CHECK(dz.dI.max() == 0.0);

  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0, 5);
  SIRState r{Field(4, 3), Field(4, 3), Field(4, 3), 0.0};
  Field T(4, 3);
  for (std::size_t i = 0; i < 12; ++i) {
    r.S[i] = u(rng);
    r.I[i] = u(rng);
    r.R[i] = u(rng);
    T[i] = u(rng);
  }
  auto dr = rhs(r, T, p);
  for (std::size_t i = 0; i < 12; ++i) CHECK(std::abs(dr.dS[i] + dr.dI[i] + dr.dR[i]) < 1e-13);

  CHECK_THROWS_AS(rhs(r, Field(3, 3), p), std::invalid_argument);
}

namespace {
std::shared_ptr<const HistoryLevel> level(const GridSpec& g, long n, double tau) {
  return std::make_shared<const HistoryLevel>(
      HistoryLevel{n, n * tau, FieldInterpolant(g, Field(g, static_cast<double>(n))), std::nullopt});
}
}  // namespace

TEST_CASE("HistoryBuffer keeps m+1 consecutive levels") {
  auto g = make_grid(1, 1, 3, 3);
  HistoryBuffer buf(3, 0.25);
  for (long n = -3; n <= 0; ++n) buf.push(level(g, n, 0.25));
  CHECK(buf.full());
  CHECK(buf.oldest().step == -3);
  CHECK(buf.newest().step == 0);
  CHECK(buf.lagged(1).step == -1);

  buf.push(level(g, 1, 0.25));
  CHECK(buf.size() == 4);
  CHECK(buf.oldest().step == -2);
  CHECK(buf.lagged(3).step == -2);
  CHECK_THROWS_AS(buf.lagged(4), std::out_of_range);
  CHECK_THROWS_AS(buf.push(level(g, 3, 0.25)), std::invalid_argument);
  CHECK_THROWS_AS(HistoryBuffer(0, 0.1), std::invalid_argument);

  // Force matrices are assembled once and cached on the level.
  auto cub = build_disc_cubature(0.1, 4);
  ForceAssembler assemble(g, cub, {100, 0.1});
  const Field& a = buf.newest().force_matrix(assemble);
  const Field& b = buf.newest().force_matrix(assemble);
  CHECK(&a == &b);
}
