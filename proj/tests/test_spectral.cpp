#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isotk/spectral.hpp"

using namespace isotk;

TEST_CASE("interval constant: eigensolver oracle vs the stated pi/a") {
  const auto e1 = poincare_interval(1.0);
  // the FD Neumann gap of [-1,1] extrapolates to pi/2
  CHECK(e1.oracle_value == doctest::Approx(M_PI / 2.0).epsilon(1e-8));
  CHECK(e1.paper_value == doctest::Approx(M_PI));
  CHECK(e1.value == e1.oracle_value);  // oracle is the default
  // both constants are surfaced; they disagree by exactly a factor 2
  CHECK(e1.paper_value / e1.oracle_value == doctest::Approx(2.0).epsilon(1e-8));

  // exact 1/t scaling law
  const auto e2 = poincare_interval(2.0);
  CHECK(e2.value == doctest::Approx(e1.value / 2.0).epsilon(1e-12));
  const auto eh = poincare_interval(0.5);
  CHECK(eh.value == doctest::Approx(2.0 * e1.value).epsilon(1e-12));
}

TEST_CASE("box tensorization takes the minimum over axes") {
  const auto sq = poincare_box({0.5, 0.5});
  CHECK(sq.value == doctest::Approx(poincare_interval(0.5).value));
  CHECK(sq.method == "tensorized");

  // E_alpha: the long axis wins
  const double alpha = 4.0;
  const auto ea = poincare_box({alpha / 2.0, 1.0 / (2.0 * alpha)});
  CHECK(ea.value == doctest::Approx(poincare_interval(alpha / 2.0).value));

  // permutation invariance
  const auto p1 = poincare_box({0.3, 0.9, 0.6});
  const auto p2 = poincare_box({0.9, 0.6, 0.3});
  CHECK(p1.value == doctest::Approx(p2.value));
}

TEST_CASE("grid estimate matches the tensorized oracle for boxes") {
  const auto sq = ConvexBody::box({0.5, 0.5});
  const auto grid = poincare_grid(sq, 64);
  const auto oracle = poincare_box({0.5, 0.5});
  CHECK(std::fabs(grid.value - oracle.value) / oracle.value < 0.05);
  CHECK(grid.bracket_lo <= grid.value);
  CHECK(grid.value <= grid.bracket_hi);

  // approximate 1/t dilation law on the grid path
  const auto grid2 = poincare_grid(ConvexBody::box({1.0, 1.0}), 64);
  CHECK(std::fabs(grid2.value - grid.value / 2.0) / (grid.value / 2.0) < 0.05);

  // anisotropic box
  const auto rect = poincare_grid(ConvexBody::box({1.0, 0.25}), 48);
  const auto rect_oracle = poincare_box({1.0, 0.25});
  CHECK(std::fabs(rect.value - rect_oracle.value) / rect_oracle.value < 0.05);
}

TEST_CASE("grid estimate self-convergence on the disk") {
  const auto ball = ConvexBody::ball(1.0, 2);
  const auto a = poincare_grid(ball, 32);
  const auto b = poincare_grid(ball, 64);
  CHECK(a.value > 0.0);
  CHECK(std::fabs(a.value - b.value) / b.value < 0.05);
}

TEST_CASE("grid rejects too-coarse input") {
  CHECK_THROWS_AS(poincare_grid(ConvexBody::box({0.5, 0.5}), 4), InvalidInput);
}

TEST_CASE("cheeger bracket") {
  const auto box = ConvexBody::box({0.5, 1.5});
  const auto est = cheeger_estimate(box, "tensorized");
  CHECK(est.kind == "cheeger");
  CHECK(est.has_bracket);
  CHECK(est.bracket_lo > 0.0);
  CHECK(est.bracket_lo <= est.value);
  CHECK(est.value <= est.bracket_hi);
  CHECK(est.bracket_hi == doctest::Approx(2.0 * est.bracket_lo));

  // dilation law: bracket(tE) = bracket(E)/t
  const auto est2 = cheeger_estimate(ConvexBody::box({1.0, 3.0}), "tensorized");
  CHECK(est2.bracket_lo == doctest::Approx(est.bracket_lo / 2.0).epsilon(1e-10));
  CHECK(est2.bracket_hi == doctest::Approx(est.bracket_hi / 2.0).epsilon(1e-10));

  CHECK_THROWS_AS(cheeger_estimate(box, "secret"), InvalidInput);

  // grid-backed bracket for a non-box body
  const auto ball_est = cheeger_estimate(ConvexBody::ball(1.0, 2), "grid_eigen", 32);
  CHECK(ball_est.bracket_lo > 0.0);
  CHECK(ball_est.has_bracket);
}
