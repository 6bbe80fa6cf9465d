#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "delaysir/errors.hpp"
#include "delaysir/grid.hpp"
#include "delaysir/model.hpp"

using namespace delaysir;

TEST_CASE("make_grid spacing") {
  auto g = make_grid(1, 1, 20, 20);
  CHECK(g.hx == doctest::Approx(1.0 / 19).epsilon(1e-15));
  CHECK(g.hy == doctest::Approx(1.0 / 19).epsilon(1e-15));

  auto two = make_grid(1, 1, 2, 2);
  CHECK(two.hx == 1.0);
  CHECK(two.hy == 1.0);

  auto rect = make_grid(2, 1, 21, 11);
  CHECK(rect.hx == doctest::Approx(0.1));
  CHECK(rect.hy == doctest::Approx(0.1));
  CHECK(rect.x(20) == doctest::Approx(2.0));
  CHECK(rect.y(10) == doctest::Approx(1.0));
}

TEST_CASE("make_grid rejects degenerate input") {
  CHECK_THROWS_AS(make_grid(0, 1, 5, 5), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, -1, 5, 5), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 1, 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 1, 5, 1), std::invalid_argument);
}

TEST_CASE("field_from_fn") {
  auto g = make_grid(1, 1, 20, 20);
  auto zero = field_from_fn(g, [](double, double) { return 0.0; });
  CHECK(zero.max() == 0.0);
  CHECK(zero.min() == 0.0);

  auto twenty = field_from_fn(g, [](double, double) { return 20.0; });
  CHECK(twenty.min() == 20.0);
  CHECK(twenty.max() == 20.0);

  // Row-major layout: node (k,l) sits at (x_k, y_l).
  auto xy = field_from_fn(g, [](double x, double y) { return x + 10 * y; });
  CHECK(xy(3, 7) == doctest::Approx(g.x(3) + 10 * g.y(7)));
  CHECK(xy.row(7)[3] == xy(3, 7));

  SUBCASE("non-finite value names the node") {
    auto bad = [](double x, double y) {
      return (x > 0.5 && y > 0.5) ? std::numeric_limits<double>::quiet_NaN() : 1.0;
    };
    try {
      field_from_fn(g, bad);
      FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
      CHECK(std::string(e.what()).find("(") != std::string::npos);
    }
  }
}

TEST_CASE("Gaussian history peak") {
  auto g = make_grid(1, 1, 21, 21);  // (0.5, 0.5) is a node
  HistorySpec h;
  auto I = field_from_fn(g, [&](double x, double y) { return history_eval(h, 1.0, 0.0, x, y).I; });
  CHECK(I(10, 10) == doctest::Approx(1.0 / (2 * M_PI * 0.01)).epsilon(1e-12));
  CHECK(I(10, 10) == doctest::Approx(15.9155).epsilon(1e-5));
}

TEST_CASE("total_mass") {
  auto g = make_grid(1, 1, 20, 20);
  SIRState s{Field(g, 20.0), Field(g, 0.0), Field(g, 0.0), 0.0};
  CHECK(total_mass(s, g) == doctest::Approx(20.0 * 400 * g.hx * g.hy));

  SIRState zero{Field(g), Field(g), Field(g), 0.0};
  CHECK(total_mass(zero, g) == 0.0);

  auto hist = history_state(HistorySpec{}, 1.0, g, 0.0);
  CHECK(total_mass(hist, g) == doctest::Approx(20.0 * 400 * g.hx * g.hy).epsilon(1e-13));

  // Linear in the state.
  CHECK(total_mass(scaled(hist, 2.5), g) == doctest::Approx(2.5 * total_mass(hist, g)));
  CHECK(field_mass(hist.I, g) + field_mass(hist.S, g) ==
        doctest::Approx(total_mass(hist, g)));
}

TEST_CASE("Field arithmetic") {
  Field a(3, 2, 1.0);
  Field b(3, 2, 2.0);
  auto c = 2.0 * a + b;
  CHECK(c.min() == 4.0);
  CHECK(c.sum() == 24.0);
  CHECK(c.all_finite());
  c(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_FALSE(c.all_finite());
  CHECK_FALSE(a.same_shape(Field(2, 3)));
}
