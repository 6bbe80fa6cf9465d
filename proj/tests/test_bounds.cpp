#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "delaysir/bounds.hpp"

using namespace delaysir;

namespace {
double closed_form_bar(double M, double a, double delta) { return M * a * M_PI * std::pow(delta, 3) / 3; }
}  // namespace

TEST_CASE("initial_max_density") {
  auto g = make_grid(1, 1, 20, 20);
  auto h = history_state(HistorySpec{}, 1.0, g, 0.0);
  CHECK(initial_max_density(h) == doctest::Approx(20.0));
  CHECK(initial_max_density(scaled(h, 2.0)) == doctest::Approx(40.0));
  SIRState zero{Field(g), Field(g), Field(g), 0.0};
  CHECK(initial_max_density(zero) == 0.0);
}

TEST_CASE("t_bar") {
  auto g = make_grid(1, 1, 20, 20);
  for (double delta : {0.12, 0.13}) {
    auto cub = build_disc_cubature(delta, 40);
    CHECK(t_bar(g, cub, {100, delta}, 20.0) ==
          doctest::Approx(closed_form_bar(20, 100, delta)).epsilon(1e-12));
    CHECK(t_bar(g, cub, {100, delta}, 0.0) == 0.0);
  }
  auto cub = build_disc_cubature(0.13, 40);
  CHECK(t_bar(g, cub, {100, 0.13}, 20.0) == doctest::Approx(4.6014).epsilon(1e-5));
  CHECK(1 / (t_bar(g, build_disc_cubature(0.12, 40), {100, 0.12}, 20.0) + 0.01) ==
        doctest::Approx(0.2755).epsilon(2e-4));
}

TEST_CASE("step_bound") {
  CHECK(step_bound(4.6019, 0.05, 0.01, 1.0) == doctest::Approx(0.2169).epsilon(2e-4));
  CHECK(step_bound(4.6019, 0.05, 0.01, 2.0) == doctest::Approx(0.4338).epsilon(2e-4));
  CHECK(step_bound(closed_form_bar(20, 100, 0.1), 0.1, 0.01, 1.0) == doctest::Approx(0.4752).epsilon(1e-4));
  // Fast recovery: the 1/b branch takes over.
  CHECK(step_bound(4.6019, 1000, 0.01, 1.0) == doctest::Approx(1e-3));
  CHECK_THROWS_AS(step_bound(1, 0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(step_bound(1, 0.1, 0, 0), std::invalid_argument);
}

TEST_CASE("m_tilde") {
  CHECK(m_tilde(1.0, 0.2169) == 5);
  CHECK(m_tilde(0.5, 0.2169) == 3);
  CHECK(m_tilde(0.4, 0.1737) == 3);
  // Strict inequality: a bound that hits a mesh fraction exactly needs the next m.
  CHECK(m_tilde(1.0, 0.25) == 5);
  CHECK(m_tilde(1.0, 2.0) == 1);
  CHECK_THROWS_AS(m_tilde(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("compute_bounds") {
  auto g = make_grid(1, 1, 20, 20);
  ModelParams p{0.05, 0.01, 0.3, {100, 0.15}};
  auto r = compute_bounds(p, g, build_disc_cubature(0.15, 40), HistorySpec{}, 1.0);
  CHECK(r.M == doctest::Approx(20.0));
  CHECK(r.tau_theory == doctest::Approx(0.1413).epsilon(5e-4));
  CHECK(r.m_tilde == 3);
  CHECK(r.tau_actual == doctest::Approx(0.1));

  ModelParams q{0.05, 0.01, 0.5, {100, 0.135}};
  auto s = compute_bounds(q, g, build_disc_cubature(0.135, 40), HistorySpec{}, 1.0);
  CHECK(s.tau_theory == doctest::Approx(0.1937).epsilon(5e-4));
  CHECK(s.tau_actual == doctest::Approx(0.5 / 3));
}
