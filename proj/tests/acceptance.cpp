// Acceptance suite: one check per shipped criterion, one PASS/FAIL line each,
// exit code = number of failures. Every tolerance is pinned here in code.
//
// Known-red criteria (see the measured numbers in the output):
//   - criterion 2: at V(x) = |x|^2, n = 2 the mu_V moment integral diverges
//     logarithmically, so the equality-case ratio stalls near 2*pi / RHS at
//     any effective-support truncation; the 1% target is unreachable. The
//     convergent neighbour instances hit equality to < 1% and are printed as
//     info lines.
//   - criterion 7 (lower envelope): F(t) = t - log(1+t) satisfies
//     F(t) < min{t^2, t} for every t > 0 (F(1) = 0.3069 < 1), so the asserted
//     lower constant 1 fails pointwise; the true envelope has constant 1/4.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <vector>

#include "isotk/measure.hpp"
#include "isotk/spectral.hpp"
#include "isotk/transport.hpp"
#include "isotk/verify.hpp"
#include "test_helpers.hpp"

using namespace isotk;
using isotk::testing::Rng;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int criterion, bool pass, const std::string& what, double seconds) {
  std::printf("[%s] criterion %2d: %s (%.1fs)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              seconds);
  if (!pass) ++g_failures;
}

void info(const std::string& what) { std::printf("       info: %s\n", what.c_str()); }

double monotone_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  std::vector<int> oi(mu.size()), oj(nu.size());
  std::iota(oi.begin(), oi.end(), 0);
  std::iota(oj.begin(), oj.end(), 0);
  std::sort(oi.begin(), oi.end(), [&](int a, int b) { return mu.points[a][0] < mu.points[b][0]; });
  std::sort(oj.begin(), oj.end(), [&](int a, int b) { return nu.points[a][0] < nu.points[b][0]; });
  double cost = 0.0, a = mu.weights[oi[0]], b = nu.weights[oj[0]];
  std::size_t i = 0, j = 0;
  while (i < mu.size() && j < nu.size()) {
    const double mass = std::min(a, b);
    cost += mass * std::pow(std::fabs(mu.points[oi[i]][0] - nu.points[oj[j]][0]), p);
    a -= mass;
    b -= mass;
    if (a <= 1e-17) {
      if (++i < mu.size()) a = mu.weights[oi[i]];
    }
    if (b <= 1e-17) {
      if (++j < nu.size()) b = nu.weights[oj[j]];
    }
  }
  return cost;
}

// --- criterion 1: sharp anisotropic isoperimetric inequality, random pairs ---
void criterion_1() {
  Timer t;
  Rng rng(101);
  bool ok = true;
  double worst = 0.0;
  for (int n : {2, 3}) {
    for (int rep = 0; rep < 100; ++rep) {
      const auto e = testing::random_polytope(rng, n);
      const auto k = testing::random_polytope(rng, n);
      const double r = deficit_r(e, k).deficit;
      worst = std::min(worst, r);
      if (r < -1e-9) ok = false;
    }
    for (int rep = 0; rep < 10; ++rep) {
      const auto k = testing::random_polytope(rng, n);
      Mat d = Mat::identity(n);
      for (int i = 0; i < n; ++i) d(i, i) = 0.5 + (rep % 5);
      const auto e = affine_map(k, d, testing::random_point(rng, n));
      if (std::fabs(deficit_r(e, k).deficit) > 1e-9) ok = false;
    }
  }
  const double sec = t.seconds();
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "sharp-inequality deficit >= -1e-9 on 200 random pairs, equality at E = tK + a (worst R %.1e)",
                worst);
  report(1, ok && sec < 30.0, buf, sec);
}

// --- criterion 2: Theorem 1 equality case at quadratic V, n = 2 ---
void criterion_2() {
  Timer t;
  QuadratureSpec quad;
  quad.rel_tol = 1e-6;
  const auto v = ConvexFunction::quadratic(1.0, 2);
  const auto f = extremal_profile(v, 2, {0.0, 0.0});
  const auto b = thm1_breakdown(v, f, 2, quad);

  const bool z_ok = std::fabs(b.moments.z - M_PI) / M_PI <= 1e-3;
  const double ratio = std::fabs(b.deficit()) / b.rhs();
  const bool ratio_ok = ratio <= 0.01;
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "Thm 1 equality at V=|x|^2, n=2: Z_V=%.8f (pi to 0.1%%: %s), "
                "|p_V-RHS|/RHS = %.4f vs 0.01 (moment converged: %s, cutoff r=%.0f)",
                b.moments.z, z_ok ? "yes" : "no", ratio, b.moments.v_converged ? "yes" : "no",
                b.moments.v_cutoff);
  report(2, z_ok && ratio_ok && t.seconds() < 60.0, buf, t.seconds());
  info("exact analysis: deficit -> -2*pi at any truncation while RHS grows like log R; "
       "the 1% ratio would need cutoff radius e^50");

  // convergent neighbour instances reach equality (informational)
  for (const auto& [vv, n] :
       {std::pair<ConvexFunction, int>{ConvexFunction::quadratic(1.0, 3), 3},
        {ConvexFunction::power_norm(3.0, 1.0, 2), 2}}) {
    const auto fp = extremal_profile(vv, n, Vec(n, 0.0));
    const auto bb = thm1_breakdown(vv, fp, n, quad);
    char ib[160];
    std::snprintf(ib, sizeof ib,
                  "convergent instance n=%d: |p_V-RHS|/RHS = %.2e (<= 0.01: %s)", n,
                  std::fabs(bb.deficit()) / bb.rhs(),
                  std::fabs(bb.deficit()) / bb.rhs() <= 0.01 ? "yes" : "no");
    info(ib);
  }
}

// --- criterion 3: Theorem 1 as an inequality over random smooth f ---
void criterion_3() {
  Timer t;
  Rng rng(103);
  std::uniform_real_distribution<double> amp(0.6, 1.8), sig(0.4, 1.2);
  std::uniform_int_distribution<int> bumps(1, 3);
  bool ok = true;
  double worst = 1e300;
  int runs = 0;
  for (int n : {2, 3}) {
    const std::vector<ConvexFunction> vs = {
        ConvexFunction::quadratic(1.0, n), ConvexFunction::power_norm(3.0, 1.0, n),
        ConvexFunction::indicatrix(ConvexBody::box(Vec(n, 0.75)))};
    for (const auto& v : vs) {
      for (int rep = 0; rep < 9; ++rep) {
        std::vector<Vec> centers;
        std::vector<double> sigmas, amps;
        const int b = bumps(rng);
        for (int i = 0; i < b; ++i) {
          centers.push_back(testing::random_point(rng, n));
          sigmas.push_back(sig(rng));
          amps.push_back(amp(rng));
        }
        const auto f = gaussian_mixture(centers, sigmas, amps);
        const auto bd = thm1_breakdown(v, f, n);
        const double d = bd.deficit() / std::max(1.0, bd.rhs());
        worst = std::min(worst, d);
        if (d < -1e-6) ok = false;
        ++runs;
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "Thm 1 deficit >= -1e-6 over %d randomized smooth f x {quadratic, cubic norm, "
                "indicatrix} at n=2,3 (worst %.1e)",
                runs, worst);
  report(3, ok, buf, t.seconds());
}

// --- criterion 4: the two-rectangle example at alpha = 4, 8, 16 ---
void criterion_4() {
  Timer t;
  const auto r4 = example_2d(4.0, 32);
  const bool r_ok = std::fabs(r4.r_deficit - 1.125) <= 1e-9;
  const bool w1_ok = r4.w1 >= 0.5 - r4.w1_tolerance;

  const auto r8 = example_2d(8.0, 16);
  const auto r16 = example_2d(16.0, 16);
  const bool growth_ok =
      r8.remainder_oracle > r4.remainder_oracle && r16.remainder_oracle > r8.remainder_oracle;
  const double asym_cap = 4.0 / std::pow(2.0, 7.0);
  const bool asym_ok = r4.asymmetry_remainder_value <= asym_cap && r8.asymmetry_remainder_value <= asym_cap &&
                      r16.asymmetry_remainder_value <= asym_cap;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "alpha=4 res 32: W1=%.4f >= 0.5-%.3f, R=%.9f; remainder grows %.3f -> %.3f -> %.3f "
                "while the asymmetry remainder stays <= %.4f",
                r4.w1, r4.w1_tolerance, r4.r_deficit, r4.remainder_oracle, r8.remainder_oracle,
                r16.remainder_oracle, asym_cap);
  const double sec = t.seconds();
  report(4, r_ok && w1_ok && growth_ok && asym_ok && sec < 300.0, buf, sec);
}

// --- criterion 5: isotropic W1 lower bound, cube vs ball ---
void criterion_5() {
  Timer t;
  bool ok = true;
  std::string detail;
  {
    const auto cube = ConvexBody::box({0.5, 0.5});
    const auto ball = normalize(ConvexBody::ball(1.0, 2));
    const auto rep = isotropic_w1_bounds(cube, ball, 32);
    ok = ok && rep.lower_ok && rep.dual_ok;
    char b[120];
    std::snprintf(b, sizeof b, "n=2 res 32: sqrt(2)|dM|=%.4f <= W1=%.4f + 0.02; dual=%.4f",
                  rep.lower_bound, rep.w1, rep.dual_value);
    detail += b;
  }
  {
    const auto cube = ConvexBody::box({0.5, 0.5, 0.5});
    const auto ball = normalize(ConvexBody::ball(1.0, 3));
    const auto rep = isotropic_w1_bounds(cube, ball, 16);
    ok = ok && rep.lower_ok && rep.dual_ok;
    char b[120];
    std::snprintf(b, sizeof b, " | n=3 res 16: %.4f <= %.4f + 0.02; dual=%.4f", rep.lower_bound,
                  rep.w1, rep.dual_value);
    detail += b;
  }
  const double sec = t.seconds();
  report(5, ok && sec < 600.0, detail, sec);
}

// --- criterion 6: the quantitative AM-GM gap ---
void criterion_6() {
  Timer t;
  Rng rng(106);
  std::uniform_real_distribution<double> logu(std::log(1e-2), std::log(1e2));
  std::uniform_int_distribution<int> nn(2, 10);
  double worst = 1e300;
  for (int rep = 0; rep < 10000; ++rep) {
    std::vector<double> eig(nn(rng));
    for (auto& l : eig) l = std::exp(logu(rng));
    worst = std::min(worst, am_gm_gap(eig));
  }
  const double sec = t.seconds();
  char buf[120];
  std::snprintf(buf, sizeof buf, "AM-GM gap >= -1e-12 on 10^4 random spectra, n <= 10 (worst %.1e)",
                worst);
  report(6, worst >= -1e-12 && sec < 5.0, buf, sec);
}

// --- criterion 7: properties of F(t) = t - log(1+t) ---
void criterion_7() {
  Timer t;
  const bool zero_ok = remainder_f(0.0) == 0.0;

  // the stated two-sided envelope, checked literally on the 10^4-point grid
  double worst_lower = 1e300, worst_upper = 0.0, worst_t = 0.0;
  bool lower_ok = true, upper_ok = true;
  for (int i = 1; i <= 10000; ++i) {
    const double tt = i * 0.01;
    const double f = remainder_f(tt);
    const double m = std::min(tt * tt, tt);
    if (f < m) lower_ok = false;
    if (f > 2.0 * m) upper_ok = false;
    if (f / m < worst_lower) {
      worst_lower = f / m;
      worst_t = tt;
    }
    worst_upper = std::max(worst_upper, f / m);
  }

  // Jensen relation on 20 random instances
  Rng rng(107);
  std::uniform_real_distribution<double> u(-0.5, 0.5), du(0.5, 2.5);
  bool jensen_ok = true;
  for (int rep = 0; rep < 20; ++rep) {
    DiscreteMeasure mu, nu;
    const int m = 6 + static_cast<int>(rng() % 6), k = 6 + static_cast<int>(rng() % 6);
    for (int i = 0; i < m; ++i) {
      mu.points.push_back({u(rng), u(rng)});
      mu.weights.push_back(0.2 + (rng() % 100) / 100.0);
    }
    for (int j = 0; j < k; ++j) {
      nu.points.push_back({u(rng) + 0.9, u(rng) + 0.4});
      nu.weights.push_back(0.2 + (rng() % 100) / 100.0);
    }
    mu.renormalize();
    nu.renormalize();
    const double d = du(rng);
    const double w1 = solve_exact(mu, nu, CostSpec::euclidean(1.0)).primal_cost;
    const double wf = solve_exact(mu, nu, CostSpec::cheeger(d)).primal_cost;
    if (wf < remainder_f(d * w1) - 1e-9) jensen_ok = false;
  }

  char buf[240];
  std::snprintf(buf, sizeof buf,
                "F(0)=0: %s; min{t^2,t} <= F <= 2min{t^2,t} on 10^4 grid points: lower %s "
                "(min F/min{t^2,t} = %.4f at t=%.2f), upper %s; Jensen W_F >= F(D W1) on 20 "
                "instances: %s",
                zero_ok ? "yes" : "no", lower_ok ? "holds" : "FAILS", worst_lower, worst_t,
                upper_ok ? "holds" : "FAILS", jensen_ok ? "yes" : "no");
  report(7, zero_ok && lower_ok && upper_ok && jensen_ok, buf, t.seconds());
  info("F <= t^2/2 near 0 and F(1) = 1 - log 2 = 0.3069, so the stated lower constant 1 "
       "cannot hold at any t; the sharp envelope is (1/4) min{t^2,t} <= F <= min{t^2,t}");
}

// --- criterion 8: transport solver correctness ---
void criterion_8() {
  Timer t;
  Rng rng(108);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  bool oracle_ok = true, defect_ok = true;
  for (int rep = 0; rep < 50; ++rep) {
    DiscreteMeasure mu, nu;
    const int m = 3 + static_cast<int>(rng() % 30), k = 3 + static_cast<int>(rng() % 30);
    for (int i = 0; i < m; ++i) {
      mu.points.push_back({u(rng)});
      mu.weights.push_back(0.1 + (rng() % 100) / 100.0);
    }
    for (int j = 0; j < k; ++j) {
      nu.points.push_back({u(rng)});
      nu.weights.push_back(0.1 + (rng() % 100) / 100.0);
    }
    mu.renormalize();
    nu.renormalize();
    const double p = (rep % 2) ? 2.0 : 1.0;
    const auto plan = solve_exact(mu, nu, CostSpec::euclidean(p));
    if (std::fabs(plan.primal_cost - monotone_1d(mu, nu, p)) > 1e-10) oracle_ok = false;
    if (plan.marginal_defect > 1e-10) defect_ok = false;
  }

  bool entropic_ok = true;
  double worst_gap = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    DiscreteMeasure mu, nu;
    const int m = 120 + static_cast<int>(rng() % 180);
    const int k = 120 + static_cast<int>(rng() % 180);
    for (int i = 0; i < m; ++i) {
      mu.points.push_back({u(rng) * 0.25, u(rng) * 0.25});
      mu.weights.push_back(0.2 + (rng() % 100) / 100.0);
    }
    for (int j = 0; j < k; ++j) {
      nu.points.push_back({u(rng) * 0.25 + 1.3, u(rng) * 0.25 + 0.8});
      nu.weights.push_back(0.2 + (rng() % 100) / 100.0);
    }
    mu.renormalize();
    nu.renormalize();
    const auto cost = CostSpec::euclidean(1.0);
    std::vector<double> cs;
    cs.reserve(static_cast<std::size_t>(m) * k);
    for (const auto& x : mu.points)
      for (const auto& y : nu.points) cs.push_back(cost(x, y));
    std::nth_element(cs.begin(), cs.begin() + cs.size() / 2, cs.end());
    const double eps = 0.01 * cs[cs.size() / 2];
    const double exact = solve_exact(mu, nu, cost).primal_cost;
    const auto ent = solve_entropic(mu, nu, cost, eps, 200000, 1e-9);
    const double gap = std::fabs(ent.primal_cost - exact) / exact;
    worst_gap = std::max(worst_gap, gap);
    if (gap > 0.05) entropic_ok = false;
    if (ent.marginal_defect > 1e-9) defect_ok = false;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "exact LP == 1-D monotone oracle to 1e-10 on 50 instances: %s; entropic within 5%% "
                "at eps = 0.01 median on 20 instances (worst %.3f); defects in tolerance: %s",
                oracle_ok ? "yes" : "no", worst_gap, defect_ok ? "yes" : "no");
  report(8, oracle_ok && entropic_ok && defect_ok, buf, t.seconds());
}

// --- criterion 9: spectral estimates ---
void criterion_9() {
  Timer t;
  const auto grid = poincare_grid(ConvexBody::box({0.5, 0.5}), 64);
  const auto oracle = poincare_box({0.5, 0.5});
  const double rel = std::fabs(grid.value - oracle.value) / oracle.value;

  const auto a1 = poincare_interval(1.0);
  const auto a3 = poincare_interval(3.0);
  const bool dilation_ok = std::fabs(a3.value - a1.value / 3.0) <= 1e-12 * a1.value;
  const bool surfaced = a1.paper_value > 0.0 && a1.oracle_value > 0.0 &&
                        std::fabs(a1.paper_value - 2.0 * a1.oracle_value) < 1e-6;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "unit-square grid estimate %.5f vs tensorized oracle %.5f (rel %.4f <= 0.05); "
                "dilation law exact; interval constants both reported (pi/a = 2 * pi/(2a))",
                grid.value, oracle.value, rel);
  report(9, rel <= 0.05 && dilation_ok && surfaced, buf, t.seconds());
}

// --- criterion 10: scaling invariance of R ---
void criterion_10() {
  Timer t;
  Rng rng(110);
  bool ok = true;
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + rep % 2;
    const auto e = testing::random_polytope(rng, n);
    const auto k = testing::random_polytope(rng, n);
    const auto rep_sc = check_scaling_invariance(
        e, k, {{1.0, 1.0}, {2.0, 3.0}, {0.5, 0.7}, {5.0, 0.2}, {1.3, 1.3}});
    worst = std::max(worst, rep_sc.metrics.at("max_discrepancy"));
    if (!rep_sc.ok) ok = false;
  }
  char buf[140];
  std::snprintf(buf, sizeof buf,
                "R(sE, tK) = R(E, K) to 1e-9 across 5 scale pairs on 20 random pairs (worst %.1e)",
                worst);
  report(10, ok, buf, t.seconds());
}

}  // namespace

int main() {
  std::printf("acceptance suite\n================\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("================\n%d of 10 criteria failed\n", g_failures);
  return g_failures;
}
