#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "isotk/convex_function.hpp"
#include "isotk/functional.hpp"
#include "isotk/scalar_field.hpp"
#include "test_helpers.hpp"

using namespace isotk;
using isotk::testing::Rng;

namespace {

// Independent 1-D integrator for the radial oracles: composite Simpson on
// [0, R] after the substitution r = t/(1-t).
double radial_oracle(const std::function<double(double)>& g, int n, int samples = 400001) {
  auto weighted = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double r = t / (1.0 - t);
    const double jac = 1.0 / ((1.0 - t) * (1.0 - t));
    return std::pow(r, n - 1) * g(r) * jac;
  };
  const double h = 1.0 / (samples - 1);
  double s = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double w = (i == 0 || i == samples - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * weighted(i * h);
  }
  return s * h / 3.0 * sphere_area(n);
}

}  // namespace

TEST_CASE("eval_v on the variants") {
  const auto ind = ConvexFunction::indicatrix(ConvexBody::box({1.0, 1.0}));
  CHECK(eval_v(ind, {0.0, 0.0}) == 0.0);
  CHECK(eval_v(ind, {2.0, 0.0}) == kInf);

  const auto quad = ConvexFunction::quadratic(1.0, 2);
  CHECK(eval_v(quad, {1.0, 1.0}) == doctest::Approx(2.0));

  const auto pw = ConvexFunction::power_norm(3.0, 0.5, 2);
  CHECK(eval_v(pw, {2.0, 0.0}) == doctest::Approx(4.0));
}

TEST_CASE("legendre conjugates of the analytic variants") {
  const auto half = ConvexFunction::quadratic(0.5, 2);  // self-conjugate
  Rng rng(21);
  for (int i = 0; i < 40; ++i) {
    const Vec y = testing::random_point(rng, 2, -3.0, 3.0);
    CHECK(conjugate(half, y) == doctest::Approx(0.5 * dot(y, y)));
  }

  const auto quad = ConvexFunction::quadratic(1.0, 2);
  // stationarity x = y/2 gives |y|^2/4; brute-force grid sup as oracle
  for (int i = 0; i < 10; ++i) {
    const Vec y = testing::random_point(rng, 2, -2.0, 2.0);
    double best = -1e300;
    for (double x0 = -4.0; x0 <= 4.0; x0 += 0.01)
      for (double x1 = -4.0; x1 <= 4.0; x1 += 0.01)
        best = std::max(best, x0 * y[0] + x1 * y[1] - (x0 * x0 + x1 * x1));
    CHECK(conjugate(quad, y) == doctest::Approx(dot(y, y) / 4.0));
    CHECK(std::fabs(conjugate(quad, y) - best) < 1e-3);
  }

  // indicatrix conjugate is the support function
  const auto body = ConvexBody::polytope({{-0.2, -0.4}, {1.0, 0.1}, {0.2, 0.9}});
  const auto ind = ConvexFunction::indicatrix(body);
  for (int i = 0; i < 40; ++i) {
    const Vec y = testing::random_point(rng, 2, -2.0, 2.0);
    CHECK(conjugate(ind, y) == doctest::Approx(support(body, y)));
  }

  // power norm against a 1-D line search oracle
  const auto pw = ConvexFunction::power_norm(3.0, 1.0, 2);
  for (double ny : {0.5, 1.0, 2.7}) {
    double best = -1e300;
    for (double r = 0.0; r < 6.0; r += 1e-5) best = std::max(best, r * ny - std::pow(r, 3.0));
    CHECK(conjugate(pw, {ny, 0.0}) == doctest::Approx(best).epsilon(1e-6));
  }
}

TEST_CASE("grid-sampled conjugation and double conjugation") {
  // sample V*(y) = |y|^2/(4s) of V = s|x|^2 on a lattice, conjugate back
  const double s = 0.7;
  const int m = 81;
  const double lo = -4.0, step = 8.0 / (m - 1);
  std::vector<double> vals;
  vals.reserve(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double y0 = lo + i * step, y1 = lo + j * step;
      vals.push_back((y0 * y0 + y1 * y1) / (4.0 * s));
    }
  const auto conj_grid =
      ConvexFunction::grid_sampled({lo, lo}, {step, step}, {m, m}, vals);

  Rng rng(22);
  for (int i = 0; i < 30; ++i) {
    const Vec x = testing::random_point(rng, 2, -0.8, 0.8);
    const auto back = conjugate_checked(conj_grid, x);
    CHECK_FALSE(back.boundary_attained);
    CHECK(std::fabs(back.value - s * dot(x, x)) < 0.05);
  }

  // a sup attained on the lattice edge gets flagged
  const auto far = conjugate_checked(conj_grid, {10.0, 0.0});
  CHECK(far.boundary_attained);

  // nonconvex samples are rejected
  std::vector<double> bad(m * m, 0.0);
  bad[m * (m / 2) + m / 2] = -0.0;
  bad[m * (m / 2) + m / 2 + 1] = 5.0;
  bad[m * (m / 2) + m / 2 + 2] = 1.0;
  CHECK_THROWS_AS(ConvexFunction::grid_sampled({lo, lo}, {step, step}, {m, m}, bad),
                  InvalidInput);
}

TEST_CASE("fenchel-young gap") {
  const auto half = ConvexFunction::quadratic(0.5, 2);
  CHECK(young_gap(half, {0.7, -0.2}, {0.7, -0.2}) == doctest::Approx(0.0));  // y = grad V(x)
  CHECK(young_gap(half, {1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(1.0));

  Rng rng(23);
  const auto body = ConvexBody::box({1.0, 0.7});
  std::vector<ConvexFunction> vs = {ConvexFunction::quadratic(1.3, 2),
                                    ConvexFunction::power_norm(2.5, 0.8, 2),
                                    ConvexFunction::indicatrix(body)};
  for (const auto& v : vs) {
    for (int i = 0; i < 200; ++i) {
      Vec x = testing::random_point(rng, 2, -0.6, 0.6);
      const Vec y = testing::random_point(rng, 2, -2.0, 2.0);
      CHECK(young_gap(v, x, y) >= -1e-9);
    }
  }
  CHECK_THROWS_AS(young_gap(ConvexFunction::indicatrix(body), {5.0, 0.0}, {0.0, 0.0}),
                  InvalidInput);
}

TEST_CASE("partition function Z_V") {
  QuadratureSpec tight;
  tight.rel_tol = 1e-9;
  // indicatrix reduces to the volume
  const auto body = ConvexBody::box({0.7, 1.1});
  const auto ind = ConvexFunction::indicatrix(body);
  CHECK(partition_z(ind, 2).value == doctest::Approx(volume(body)));

  // quadratic at n=2: radial oracle gives pi
  const auto q2 = ConvexFunction::quadratic(1.0, 2);
  const auto z2 = partition_z(q2, 2, tight);
  CHECK(z2.converged);
  CHECK(z2.value == doctest::Approx(M_PI).epsilon(1e-8));
  const double oracle2 = radial_oracle(
      [](double r) { return std::pow(1.0 + r * r, -2.0); }, 2);
  CHECK(z2.value == doctest::Approx(oracle2).epsilon(1e-6));

  // scale 1 at n=3: 4 pi int r^2 (1+r^2/2)^{-3} dr = pi^2 sqrt(2)/2
  const auto q3 = ConvexFunction::quadratic(1.0, 3);
  const auto z3 = partition_z(q3, 3, tight);
  CHECK(z3.value == doctest::Approx(M_PI * M_PI * std::sqrt(2.0) / 2.0).epsilon(1e-8));
  const double oracle3 = radial_oracle(
      [](double r) { return std::pow(1.0 + r * r / 2.0, -3.0); }, 3);
  CHECK(z3.value == doctest::Approx(oracle3).epsilon(1e-6));

  // scale 1/2 at n=3 by substitution: 8 * pi^2/4 = 2 pi^2
  const auto qh3 = ConvexFunction::quadratic(0.5, 3);
  CHECK(partition_z(qh3, 3, tight).value == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-8));

  // cubic norm at n=2: beta-function closed form 4 pi^2 / (9 sqrt(3))
  const auto p3 = ConvexFunction::power_norm(3.0, 1.0, 2);
  CHECK(partition_z(p3, 2, tight).value ==
        doctest::Approx(4.0 * M_PI * M_PI / (9.0 * std::sqrt(3.0))).epsilon(1e-8));

  CHECK_THROWS_AS(partition_z(q2, 3), InvalidInput);  // dimension mismatch
}

TEST_CASE("mu_V density") {
  const auto body = ConvexBody::box({0.5, 1.0});
  const auto ind = ConvexFunction::indicatrix(body);
  const double z = partition_z(ind, 2).value;
  CHECK(mu_v_density(ind, 2, z, {0.0, 0.0}) == doctest::Approx(1.0 / volume(body)));
  CHECK(mu_v_density(ind, 2, z, {3.0, 0.0}) == 0.0);

  const auto q2 = ConvexFunction::quadratic(1.0, 2);
  QuadratureSpec tight;
  tight.rel_tol = 1e-9;
  const double z2 = partition_z(q2, 2, tight).value;
  CHECK(mu_v_density(q2, 2, z2, {0.0, 0.0}) == doctest::Approx(1.0 / M_PI).epsilon(1e-8));

  // total mass via box cubature over most of the support
  auto dens = [&](const Vec& x) { return mu_v_density(q2, 2, z2, x); };
  const auto mass = integrate_box(dens, {{-60.0, 60.0}, {-60.0, 60.0}}, 1e-7, 400000);
  CHECK(std::fabs(mass.value - 1.0) < 5e-3);  // 1 - 1/(1+R^2) tail
}

TEST_CASE("slow moment tails are flagged, not silently trusted") {
  // quadratic at n=2 is exactly on the divergence boundary: int V dmu_V has a
  // log tail. The value must be truncated at the documented cutoff and flagged.
  const auto q2 = ConvexFunction::quadratic(1.0, 2);
  QuadratureSpec tight;
  tight.rel_tol = 1e-9;
  const auto m = mu_v_moments(q2, 2, tight);
  CHECK(m.z == doctest::Approx(M_PI).epsilon(1e-8));
  CHECK_FALSE(m.v_converged);
  const double r_cut = m.v_cutoff;
  CHECK(r_cut >= density_cutoff_radius(q2, 2));
  const double expected =
      M_PI * (std::log(1.0 + r_cut * r_cut) + 1.0 / (1.0 + r_cut * r_cut) - 1.0);
  CHECK(m.v_integral == doctest::Approx(expected).epsilon(1e-6));

  // convergent neighbours are not flagged
  CHECK(mu_v_moments(ConvexFunction::quadratic(1.0, 3), 3).v_converged);
  CHECK(mu_v_moments(ConvexFunction::power_norm(3.0, 1.0, 2), 2).v_converged);

  // cubic norm at n=2 has int V dmu_V = 2 exactly (beta functions)
  const auto mp = mu_v_moments(ConvexFunction::power_norm(3.0, 1.0, 2), 2);
  CHECK(mp.v_mu_moment() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("extremal profile") {
  const auto q2 = ConvexFunction::quadratic(1.0, 2);
  const auto f = extremal_profile(q2, 2, {0.0, 0.0});
  CHECK(field_value(f, {0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(field_value(f, {1.0, 0.0}) == doctest::Approx(0.5));

  // analytic gradient against central differences
  Rng rng(24);
  for (int i = 0; i < 20; ++i) {
    const Vec x = testing::random_point(rng, 2, -2.0, 2.0);
    const Vec g = field_gradient(f, x);
    for (int d = 0; d < 2; ++d) {
      Vec xp = x, xm = x;
      xp[d] += 1e-6;
      xm[d] -= 1e-6;
      CHECK(g[d] == doctest::Approx((field_value(f, xp) - field_value(f, xm)) / 2e-6)
                        .epsilon(1e-4));
    }
  }

  // translation equivariance
  const Vec a = {0.7, -0.3};
  const auto fa = extremal_profile(q2, 2, a);
  for (int i = 0; i < 20; ++i) {
    const Vec x = testing::random_point(rng, 2, -2.0, 2.0);
    CHECK(field_value(fa, add(x, a)) == doctest::Approx(field_value(f, x)));
  }

  // int f^{n'} equals Z_V (profile at quadratic n=2: int f^2 = pi)
  const auto integral = integral_f_nprime(f, 2);
  CHECK(integral.value == doctest::Approx(M_PI).epsilon(1e-6));

  CHECK_THROWS_AS(extremal_profile(
                      ConvexFunction::indicatrix(ConvexBody::box({1.0, 1.0})), 2, {0.0, 0.0}),
                  InvalidInput);
}

TEST_CASE("indicatrix branch of p_V reduces to the classical functional") {
  const auto k = ConvexBody::box({0.5, 0.5});
  const auto ind = ConvexFunction::indicatrix(k);
  const auto f = gaussian_mixture({{0.1, -0.2}}, {0.6}, {1.0});

  const auto yt = young_term(ind, f, 2);
  // independent oracle: midpoint 2-D integration of h_K(-grad f)
  const int m = 600;
  const double lo = -6.0, hi = 6.0, h = (hi - lo) / m;
  double oracle = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Vec x = {lo + (i + 0.5) * h, lo + (j + 0.5) * h};
      oracle += support(k, scale(field_gradient(f, x), -1.0)) * h * h;
    }
  CHECK(yt.integral.value == doctest::Approx(oracle).epsilon(1e-3));

  // 1-homogeneity of the indicatrix branch under f -> c f
  auto cf = f;
  const double c = 2.3;
  auto base_value = f.value;
  auto base_grad = f.gradient;
  cf.value = [base_value, c](const Vec& x) { return c * base_value(x); };
  cf.gradient = [base_grad, c](const Vec& x) { return scale(base_grad(x), c); };
  CHECK(p_v_functional(ind, cf, 2) == doctest::Approx(c * p_v_functional(ind, f, 2)).epsilon(1e-9));
}

TEST_CASE("theorem 1 equality profiles on convergent instances") {
  struct Case {
    ConvexFunction v;
    int n;
  };
  const std::vector<Case> cases = {
      {ConvexFunction::quadratic(1.0, 3), 3},
      {ConvexFunction::quadratic(2.0, 3), 3},
      {ConvexFunction::power_norm(3.0, 1.0, 2), 2},
      {ConvexFunction::power_norm(2.5, 1.0, 2), 2},
      {ConvexFunction::power_norm(4.0, 1.0, 3), 3},
  };
  for (const auto& c : cases) {
    const auto f = extremal_profile(c.v, c.n, Vec(c.n, 0.0));
    const auto b = thm1_breakdown(c.v, f, c.n);
    CHECK(b.moments.v_converged);
    CHECK(std::fabs(b.deficit()) / b.rhs() < 0.01);
  }

  // closed forms for quadratic scale 1 at n=3: Z = pi^2 sqrt(2)/2 and both
  // sides equal 12 Z
  const auto q3 = ConvexFunction::quadratic(1.0, 3);
  const auto f3 = extremal_profile(q3, 3, {0.0, 0.0, 0.0});
  const auto b3 = thm1_breakdown(q3, f3, 3);
  const double z = M_PI * M_PI * std::sqrt(2.0) / 2.0;
  CHECK(b3.p_v() == doctest::Approx(12.0 * z).epsilon(5e-3));
  CHECK(b3.rhs() == doctest::Approx(12.0 * z).epsilon(5e-3));

  // cubic norm at n=2: both sides equal 6 Z with Z = 4 pi^2/(9 sqrt(3))
  const auto p3 = ConvexFunction::power_norm(3.0, 1.0, 2);
  const auto fp = extremal_profile(p3, 2, {0.0, 0.0});
  const auto bp = thm1_breakdown(p3, fp, 2);
  const double zp = 4.0 * M_PI * M_PI / (9.0 * std::sqrt(3.0));
  CHECK(bp.p_v() == doctest::Approx(6.0 * zp).epsilon(5e-3));
  CHECK(bp.rhs() == doctest::Approx(6.0 * zp).epsilon(5e-3));
}

TEST_CASE("theorem 1 inequality on random smooth bumps") {
  Rng rng(25);
  std::uniform_real_distribution<double> amp(0.6, 1.8), sig(0.4, 1.2);
  std::uniform_int_distribution<int> bumps(1, 3);
  for (int n : {2, 3}) {
    std::vector<ConvexFunction> vs = {
        ConvexFunction::quadratic(1.0, n), ConvexFunction::power_norm(3.0, 1.0, n),
        ConvexFunction::indicatrix(ConvexBody::box(Vec(n, 0.75)))};
    for (const auto& v : vs) {
      for (int rep = 0; rep < 4; ++rep) {
        const int b = bumps(rng);
        std::vector<Vec> centers;
        std::vector<double> sigmas, amps;
        for (int i = 0; i < b; ++i) {
          centers.push_back(testing::random_point(rng, n));
          sigmas.push_back(sig(rng));
          amps.push_back(amp(rng));
        }
        const auto f = gaussian_mixture(centers, sigmas, amps);
        const auto bd = thm1_breakdown(v, f, n);
        CHECK(bd.deficit() >= -1e-6 * std::max(1.0, bd.rhs()));
      }
    }
  }
}

TEST_CASE("thm1 bracket is independent of f and recovers n|K|^{1/n}") {
  const auto k = ConvexBody::box({0.5, 1.0});
  const auto ind = ConvexFunction::indicatrix(k);
  Thm1Breakdown b;
  b.n = 2;
  b.moments = mu_v_moments(ind, 2);
  CHECK(b.bracket() == doctest::Approx(2.0 * std::sqrt(volume(k))));

  const auto q3 = ConvexFunction::quadratic(1.0, 3);
  const auto m = mu_v_moments(q3, 3);
  Thm1Breakdown b1;
  b1.n = 3;
  b1.moments = m;
  const double bracket = b1.bracket();
  // the bracket uses only (V, n); two different f change nothing
  const auto f1 = gaussian_mixture({{0.0, 0.0, 0.0}}, {0.5}, {1.0});
  const auto f2 = gaussian_mixture({{0.3, 0.1, -0.2}}, {0.9}, {1.4});
  CHECK(thm1_rhs(q3, 3, f1) / std::pow(integral_f_nprime(f1, 3).value, 2.0 / 3.0) ==
        doctest::Approx(bracket).epsilon(1e-9));
  CHECK(thm1_rhs(q3, 3, f2) / std::pow(integral_f_nprime(f2, 3).value, 2.0 / 3.0) ==
        doctest::Approx(bracket).epsilon(1e-9));
}
