#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isotk/json_io.hpp"
#include "test_helpers.hpp"

using namespace isotk;
using isotk::testing::Rng;

namespace {

void check_same_body(const ConvexBody& a, const ConvexBody& b) {
  REQUIRE(a.dim() == b.dim());
  Rng rng(71);
  for (int i = 0; i < 40; ++i) {
    const Vec z = testing::random_point(rng, a.dim(), -2.0, 2.0);
    CHECK(support(a, z) == doctest::Approx(support(b, z)).epsilon(1e-12));
  }
}

}  // namespace

TEST_CASE("body JSON round trips") {
  const auto box = ConvexBody::box({0.5, 1.25});
  check_same_body(box, body_from_json(body_to_json(box)));

  const auto ball = ConvexBody::ball(0.7, 3);
  check_same_body(ball, body_from_json(body_to_json(ball)));

  const auto tri = ConvexBody::polytope({{-0.2, -0.3}, {1.0, 0.0}, {0.1, 0.9}});
  check_same_body(tri, body_from_json(body_to_json(tri)));

  Mat a = Mat::identity(2);
  a(0, 1) = 0.6;
  const auto aff = ConvexBody::affine(a, {0.2, -0.1}, ConvexBody::box({0.4, 0.4}));
  check_same_body(aff, body_from_json(body_to_json(aff)));
}

TEST_CASE("schema details") {
  // ball dimension defaults to 2
  const auto ball = body_from_json(json::parse(R"({"type":"ball","radius":1.5})"));
  CHECK(ball.dim() == 2);
  CHECK(ball.radius == doctest::Approx(1.5));

  // unknown keys are rejected
  CHECK_THROWS_AS(body_from_json(json::parse(R"({"type":"box","half_sides":[1,1],"color":3})")),
                  InvalidInput);
  CHECK_THROWS_AS(body_from_json(json::parse(R"({"type":"torus","radius":1})")), InvalidInput);
  CHECK_THROWS_AS(body_from_json(json::parse(R"({"radius":1})")), InvalidInput);

  // invalid parameters surface as InvalidInput
  CHECK_THROWS_AS(body_from_json(json::parse(R"({"type":"box","half_sides":[1,-1]})")),
                  InvalidInput);
}

TEST_CASE("convex function JSON") {
  const auto q = function_from_json(json::parse(R"({"type":"quadratic","scale":0.5,"dim":3})"));
  CHECK(q.type == FnType::Quadratic);
  CHECK(eval_v(q, {1.0, 0.0, 0.0}) == doctest::Approx(0.5));

  const auto p = function_from_json(
      json::parse(R"({"type":"power_norm","exponent":3,"scale":1.0,"dim":2})"));
  CHECK(eval_v(p, {2.0, 0.0}) == doctest::Approx(8.0));

  const auto ind = function_from_json(
      json::parse(R"({"type":"indicatrix","body":{"type":"box","half_sides":[1,1]}})"));
  CHECK(eval_v(ind, {0.0, 0.0}) == 0.0);

  CHECK_THROWS_AS(function_from_json(json::parse(R"({"type":"quadratic","scale":0.5})")),
                  InvalidInput);
  CHECK_THROWS_AS(
      function_from_json(json::parse(R"({"type":"quadratic","scale":0.5,"dim":2,"k":1})")),
      InvalidInput);
}

TEST_CASE("scalar field JSON") {
  const auto f = field_from_json(json::parse(
      R"({"type":"gaussian_mixture","centers":[[0,0]],"sigmas":[1.0],"amplitudes":[2.0]})"));
  CHECK(field_value(f, {0.0, 0.0}) == doctest::Approx(2.0));
  CHECK(f.radial);
  CHECK_THROWS_AS(field_from_json(json::parse(R"({"type":"spline"})")), InvalidInput);
}

TEST_CASE("quadrature spec JSON") {
  const auto q = quadspec_from_json(
      json::parse(R"({"box":[[-1,1],[-2,2]],"rel_tol":1e-7,"max_cells":5000})"));
  CHECK(q.box.size() == 2);
  CHECK(q.box[1].second == doctest::Approx(2.0));
  CHECK(q.rel_tol == doctest::Approx(1e-7));
  CHECK(q.max_cells == 5000);
  CHECK_THROWS_AS(quadspec_from_json(json::parse(R"({"rel_tol":-1})")), InvalidInput);
  CHECK_THROWS_AS(quadspec_from_json(json::parse(R"({"cells":10})")), InvalidInput);
}

TEST_CASE("report serialization carries tolerances and provenance") {
  const auto e = ConvexBody::box({0.5, 0.5});
  const auto rep = deficit_r(e, ConvexBody::ball(1.0, 2));
  const json j = deficit_report_to_json(rep);
  CHECK(j.contains("lhs"));
  CHECK(j.contains("deficit"));
  CHECK(j.at("tolerances").contains("exact_facet_path"));
  CHECK(j.at("inputs").contains("E"));
  CHECK(j.at("ok").get<bool>());

  const auto spec_j = spectral_to_json(poincare_interval(1.0));
  CHECK(spec_j.contains("oracle_value"));
  CHECK(spec_j.contains("paper_value"));
  CHECK(spec_j.at("kind") == "poincare_h22");
}

TEST_CASE("file loading errors") {
  CHECK_THROWS_AS(load_json_file("/nonexistent/path.json"), InvalidInput);
}
