#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "isotk/body.hpp"
#include "isotk/convex_function.hpp"
#include "isotk/errors.hpp"
#include "isotk/functional.hpp"
#include "isotk/measure.hpp"
#include "isotk/perimeter.hpp"
#include "isotk/quadrature.hpp"
#include "isotk/scalar_field.hpp"
#include "isotk/spectral.hpp"
#include "isotk/transport.hpp"

namespace isotk {

// Two sides of an inequality plus bookkeeping. `deficit` is lhs - rhs for
// theorem-style reports and ratio - 1 for the isoperimetric ratio R(E, K).
struct DeficitReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double deficit = 0.0;
  bool has_remainder = false;
  double remainder = 0.0;
  std::map<std::string, double> comparison;  // labeled remainder candidates
  std::map<std::string, double> tolerances;
  std::map<std::string, double> metrics;
  std::map<std::string, std::string> inputs;
  std::vector<std::string> flags;
  bool ok = true;  // every asserted sub-inequality held
};

inline std::string body_brief(const ConvexBody& b) {
  switch (b.type) {
    case BodyType::Box: {
      std::string s = "box(";
      for (std::size_t i = 0; i < b.half_sides.size(); ++i)
        s += (i ? "," : "") + std::to_string(b.half_sides[i]);
      return s + ")";
    }
    case BodyType::Ball:
      return "ball(r=" + std::to_string(b.radius) + ",n=" + std::to_string(b.ball_dim) + ")";
    case BodyType::Polytope:
      return "polytope(" + std::to_string(b.vertices.size()) + " vertices)";
    case BodyType::Affine:
      return "affine(" + body_brief(*b.base) + ")";
  }
  return "?";
}

// R(E, K) = p_K(E) / (n |K|^{1/n} |E|^{1/n'}) - 1. The denominator exponent
// follows the scaling-invariant normalization (1/n' on |E|).
inline DeficitReport deficit_r(const ConvexBody& e, const ConvexBody& k,
                               NormalSign sign = NormalSign::Outward) {
  const int n = e.dim();
  if (k.dim() != n) throw InvalidInput("deficit_r: dimension mismatch");
  DeficitReport rep;
  const double p = anisotropic_perimeter(e, k, sign);
  const double ve = volume(e), vk = volume(k);
  rep.lhs = p;
  rep.rhs = n * std::pow(vk, 1.0 / n) * std::pow(ve, (n - 1.0) / n);
  rep.deficit = rep.lhs / rep.rhs - 1.0;  // this is R(E, K)
  rep.metrics["perimeter"] = p;
  rep.metrics["volume_E"] = ve;
  rep.metrics["volume_K"] = vk;
  rep.metrics["R"] = rep.deficit;
  rep.tolerances["exact_facet_path"] = 1e-9;
  rep.inputs["E"] = body_brief(e);
  rep.inputs["K"] = body_brief(k);
  rep.ok = rep.deficit >= -1e-9;
  if (!rep.ok) rep.flags.push_back("isoperimetric_inequality_violated");
  return rep;
}

// Lemma-5-style invariance: R(sE, tK) = R(E, K) exactly on the facet path.
inline DeficitReport check_scaling_invariance(const ConvexBody& e, const ConvexBody& k,
                                              const std::vector<std::pair<double, double>>& scales) {
  const int n = e.dim();
  const double base = deficit_r(e, k).deficit;
  DeficitReport rep;
  rep.lhs = rep.rhs = base;
  double worst = 0.0;
  for (const auto& [s, t] : scales) {
    if (!(s > 0.0) || !(t > 0.0)) throw InvalidInput("scaling: factors must be positive");
    Mat ds = Mat::identity(n), dt = Mat::identity(n);
    for (int i = 0; i < n; ++i) {
      ds(i, i) = s;
      dt(i, i) = t;
    }
    const double r = deficit_r(affine_map(e, ds, Vec(n, 0.0)), affine_map(k, dt, Vec(n, 0.0))).deficit;
    worst = std::max(worst, std::fabs(r - base));
  }
  rep.deficit = worst;
  rep.metrics["R"] = base;
  rep.metrics["max_discrepancy"] = worst;
  rep.tolerances["scaling_invariance"] = 1e-9;
  rep.ok = worst <= 1e-9;
  return rep;
}

// Theorem 1: p_V(f) >= [n Z^{1/n} int(1+V/(n-1))dmu_V] ||f||_{n'}.
inline DeficitReport thm1_report(const ConvexFunction& v, const ScalarField& f, int n,
                                 const QuadratureSpec& quad = {},
                                 bool extremal_profile_input = false) {
  const Thm1Breakdown b = thm1_breakdown(v, f, n, quad);
  DeficitReport rep;
  rep.lhs = b.p_v();
  rep.rhs = b.rhs();
  rep.deficit = rep.lhs - rep.rhs;
  rep.metrics["young_term"] = b.young.value;
  rep.metrics["z_v"] = b.moments.z;
  rep.metrics["v_mu_moment"] = b.moments.v_mu_moment();
  rep.metrics["bracket"] = b.bracket();
  rep.metrics["f_nprime_integral"] = b.f_nprime.value;
  rep.metrics["relative_deficit"] = rep.deficit / rep.rhs;
  rep.tolerances["quad_rel_tol"] = quad.rel_tol;
  rep.tolerances["deficit_floor"] = -1e-6;
  // achieved accuracies, not just the requested tolerance
  rep.metrics["young_abs_error"] = b.young.abs_error;
  rep.metrics["f_nprime_abs_error"] = b.f_nprime.abs_error;
  rep.metrics["z_abs_error"] = b.moments.z_abs_error;
  rep.metrics["v_moment_abs_error"] = b.moments.v_abs_error;
  if (!b.moments.v_converged) {
    rep.flags.push_back("v_moment_nonconvergent_truncated");
    rep.metrics["v_moment_cutoff_radius"] = b.moments.v_cutoff;
  }
  if (b.vanishing_hits > 0) rep.flags.push_back("vanishing_set_contribution");
  if (extremal_profile_input) rep.flags.push_back("equality_profile_input");
  rep.ok = rep.deficit >= -1e-6 * std::max(1.0, rep.rhs);
  return rep;
}

// Gap of the quantitative arithmetic-geometric inequality
// 2 n lambda_max (lambda_A - lambda_G) - sum (lambda_i - lambda_G)^2 >= 0.
inline double am_gm_gap(const std::vector<double>& eigs) {
  if (eigs.empty()) throw InvalidInput("am_gm_gap: empty spectrum");
  const int n = static_cast<int>(eigs.size());
  double mx = 0.0, sum = 0.0, logsum = 0.0;
  for (double l : eigs) {
    if (!(l > 0.0)) throw InvalidInput("am_gm_gap: eigenvalues must be positive");
    mx = std::max(mx, l);
    sum += l;
    logsum += std::log(l);
  }
  const double la = sum / n;
  const double lg = std::exp(logsum / n);
  double sq = 0.0;
  for (double l : eigs) sq += (l - lg) * (l - lg);
  return 2.0 * n * mx * (la - lg) - sq;
}

// The three-step lower-bound chain from the arithmetic-geometric gap to the
// F-remainder, on a det-1 spectrum. Steps 1-2 are constant-free and checked;
// step 3 carries the configurable constant and is reported, never asserted.
struct RemainderChain {
  double am_gm_gap = 0.0;      // lambda_A - lambda_G
  double hs_over_max = 0.0;    // ||L - I||^2 / (2 n lambda_max)
  double hs_damped = 0.0;      // ||L - I||^2 / (2 n (1 + ||L - I||))
  double f_term = 0.0;         // (c/n) F(||L - I||)
  double admissible_c = 0.0;   // largest c for which step 3 holds
  double c_used = 1.0;
  std::vector<std::string> violated;
};

inline RemainderChain remainder_chain(const std::vector<double>& eigs, double c = 1.0) {
  const int n = static_cast<int>(eigs.size());
  double logsum = 0.0, sum = 0.0, mx = 0.0;
  for (double l : eigs) {
    if (!(l > 0.0)) throw InvalidInput("remainder_chain: eigenvalues must be positive");
    logsum += std::log(l);
    sum += l;
    mx = std::max(mx, l);
  }
  if (std::fabs(std::exp(logsum) - 1.0) > 1e-9)
    throw InvalidInput("remainder_chain: spectrum must have unit determinant");
  RemainderChain ch;
  ch.c_used = c;
  const double lg = std::exp(logsum / n);  // == 1 up to rounding
  double hs2 = 0.0;
  for (double l : eigs) hs2 += (l - 1.0) * (l - 1.0);
  const double hs = std::sqrt(hs2);
  ch.am_gm_gap = sum / n - lg;
  ch.hs_over_max = hs2 / (2.0 * n * mx);
  ch.hs_damped = hs2 / (2.0 * n * (1.0 + hs));
  ch.f_term = c / n * remainder_f(hs);
  ch.admissible_c = remainder_f(hs) > 0.0 ? n * ch.hs_damped / remainder_f(hs) : kInf;
  const double tol = 1e-12 * (1.0 + hs2);
  if (ch.am_gm_gap < ch.hs_over_max - tol) ch.violated.push_back("step1_amgm_vs_hs");
  if (ch.hs_over_max < ch.hs_damped - tol) ch.violated.push_back("step2_max_vs_damped");
  if (ch.hs_damped < ch.f_term - tol) ch.violated.push_back("step3_damped_vs_f");
  return ch;
}

// Fraenkel-type asymmetry A_K(E) by translation grid search with one
// refinement pass, symmetric differences counted on a shared grid.
struct AsymmetryRemainder {
  double asymmetry = 0.0;
  Vec best_translation;
  double remainder = 0.0;  // (C / n^7) * A^2
  double c_used = 1.0;
  int grid_points_per_axis = 21;
};

inline AsymmetryRemainder asymmetry_remainder(const ConvexBody& e, const ConvexBody& k, int translation_grid = 21,
                                  double c = 1.0, int resolution = 64) {
  const int n = e.dim();
  if (k.dim() != n) throw InvalidInput("asymmetry_remainder: dimension mismatch");
  const double ve = volume(e), vk = volume(k);
  const double r = std::pow(ve / vk, 1.0 / n);

  const auto [elo, ehi] = bounding_box(e);
  const auto [klo, khi] = bounding_box(k);
  // shared counting grid covering E and every candidate translate of rK
  Vec glo(n), ghi(n), tlo(n), thi(n);
  for (int d = 0; d < n; ++d) {
    tlo[d] = elo[d] - r * khi[d];
    thi[d] = ehi[d] - r * klo[d];
    glo[d] = std::min(elo[d], tlo[d] + r * klo[d]);
    ghi[d] = std::max(ehi[d], thi[d] + r * khi[d]);
  }
  Vec h(n);
  long cells = 1;
  for (int d = 0; d < n; ++d) {
    h[d] = (ghi[d] - glo[d]) / resolution;
    cells *= resolution;
  }
  auto in_e = membership(e);
  auto in_k = membership(k);
  std::vector<char> e_flag(cells);
  std::vector<Vec> centers(cells, Vec(n));
  {
    std::vector<int> id(n, 0);
    for (long q = 0; q < cells; ++q) {
      for (int d = 0; d < n; ++d) centers[q][d] = glo[d] + (id[d] + 0.5) * h[d];
      e_flag[q] = in_e(centers[q]) ? 1 : 0;
      int d = 0;
      while (d < n && ++id[d] == resolution) id[d++] = 0;
    }
  }
  double cellvol = 1.0;
  for (int d = 0; d < n; ++d) cellvol *= h[d];

  auto asymmetry_at = [&](const Vec& x0) {
    long diff = 0;
    Vec y(n);
    for (long q = 0; q < cells; ++q) {
      for (int d = 0; d < n; ++d) y[d] = (centers[q][d] - x0[d]) / r;
      if ((in_k(y) ? 1 : 0) != e_flag[q]) ++diff;
    }
    return diff * cellvol / ve;
  };

  Vec best(n, 0.0);
  double best_a = 1e300;
  Vec lo = tlo, hi = thi;
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<int> id(n, 0);
    Vec x0(n);
    for (;;) {
      for (int d = 0; d < n; ++d)
        x0[d] = lo[d] + (hi[d] - lo[d]) * id[d] / (translation_grid - 1.0);
      const double a = asymmetry_at(x0);
      if (a < best_a) {
        best_a = a;
        best = x0;
      }
      int d = 0;
      while (d < n && ++id[d] == translation_grid) id[d++] = 0;
      if (d == n) break;
    }
    for (int d = 0; d < n; ++d) {
      const double step = (hi[d] - lo[d]) / (translation_grid - 1.0);
      lo[d] = best[d] - step;
      hi[d] = best[d] + step;
    }
  }
  AsymmetryRemainder out;
  out.asymmetry = best_a;
  out.best_translation = best;
  out.c_used = c;
  out.grid_points_per_axis = translation_grid;
  out.remainder = c / std::pow(static_cast<double>(n), 7.0) * best_a * best_a;
  return out;
}

// Theorem 2 observables: R(E, K), the Cheeger bracket of the normalized body,
// both remainder candidates, and the observed ratio. Only sign facts are
// asserted; the universal constant is reported.
struct Thm2Report {
  DeficitReport r_report;
  SpectralEstimate cheeger;
  Vec translation;
  double w1 = 0.0;
  double w_cheeger_cost = 0.0;        // W_c with c = F(D |x-y|)
  double f_of_dw1 = 0.0;              // F(D * W1)
  double ratio_cost_form = 0.0;       // n R / W_{c_D}
  double ratio_f_form = 0.0;          // n R / F(D W1)
  double d_che_used = 0.0;
  int resolution = 0;
  bool ok = true;
};

inline Thm2Report thm2_report(const ConvexBody& e, const ConvexBody& k, int resolution,
                              const SolverChoice& choice = {},
                              IntervalConstant which = IntervalConstant::Oracle) {
  const int n = e.dim();
  Thm2Report rep;
  rep.resolution = resolution;
  rep.r_report = deficit_r(e, k);
  const double r_val = rep.r_report.deficit;

  ConvexBody et = normalize(e);
  const ConvexBody kt = normalize(k);
  const Vec shift = sub(centroid(kt), centroid(et));
  rep.translation = shift;
  et = affine_map(et, Mat::identity(n), shift);

  rep.cheeger = (et.type == BodyType::Box && shift == Vec(n, 0.0))
                    ? cheeger_estimate(et, "tensorized", resolution, 1.0, 2.0, which)
                    : cheeger_estimate(et, "grid_eigen", resolution);
  const double d_che = rep.cheeger.bracket_lo;
  rep.d_che_used = d_che;

  DiscreteMeasure me = discretize_body(et, resolution);
  DiscreteMeasure mk = discretize_body(kt, resolution);
  SolverChoice ch = choice;
  ch.budget_pairs = std::max(ch.budget_pairs, me.size() * mk.size());
  rep.w1 = transport_cost(me, mk, CostSpec::euclidean(1.0), ch);
  rep.w_cheeger_cost = transport_cost(me, mk, CostSpec::cheeger(d_che), ch);
  rep.f_of_dw1 = remainder_f(d_che * rep.w1);
  rep.ratio_cost_form = rep.w_cheeger_cost > 0.0 ? n * r_val / rep.w_cheeger_cost : kInf;
  rep.ratio_f_form = rep.f_of_dw1 > 0.0 ? n * r_val / rep.f_of_dw1 : kInf;
  rep.ok = rep.r_report.ok && rep.w_cheeger_cost >= 0.0 && rep.f_of_dw1 >= 0.0;
  return rep;
}

// The two-rectangle example: E_alpha = [-a/2,a/2] x [-1/(2a),1/(2a)] against
// K_alpha built with a^2. All reported quantities of the worked example, with
// the discretization tolerance recorded and the W1 lower bound asserted.
struct Example2dReport {
  double alpha = 0.0;
  double r_deficit = 0.0;              // R(E_a, K_a), exact facets
  double w1 = 0.0;                     // exact/entropic LP value
  double paper_lower_bound = 0.0;      // (1/4)(a^2/4 - a/2)
  double poincare_oracle = 0.0;        // interval constant, eigensolver value
  double poincare_paper = 0.0;         // stated pi/a constant
  double remainder_oracle = 0.0;       // (1/4) F(h_oracle * (a^2/4 - a/2))
  double remainder_paper = 0.0;
  double asymmetry_remainder_value = 0.0;  // (C/n^7) A_K(E)^2, C = 1
  double asymmetry = 0.0;
  double cell_diameter = 0.0;
  double w1_tolerance = 0.0;           // 2 * cell diameter
  int resolution = 0;
  bool w1_bound_ok = true;
};

inline Example2dReport example_2d(double alpha, int resolution, const SolverChoice& choice = {},
                                  double c_asym = 1.0) {
  if (!(alpha > 1.0)) throw InvalidInput("example_2d: alpha must exceed 1");
  Example2dReport rep;
  rep.alpha = alpha;
  rep.resolution = resolution;
  const auto e = ConvexBody::box({alpha / 2.0, 1.0 / (2.0 * alpha)});
  const auto k = ConvexBody::box({alpha * alpha / 2.0, 1.0 / (2.0 * alpha * alpha)});
  rep.r_deficit = deficit_r(e, k).deficit;

  DiscreteMeasure me = discretize_body(e, resolution);
  DiscreteMeasure mk = discretize_body(k, resolution);
  SolverChoice ch = choice;
  ch.budget_pairs = std::max(ch.budget_pairs, me.size() * mk.size());
  rep.w1 = transport_cost(me, mk, CostSpec::euclidean(1.0), ch);

  rep.paper_lower_bound = 0.25 * (alpha * alpha / 4.0 - alpha / 2.0);

  const auto interval = poincare_interval(alpha / 2.0);  // long axis wins the min
  rep.poincare_oracle = interval.value;
  rep.poincare_paper = interval.paper_value;
  const double sep = alpha * alpha / 4.0 - alpha / 2.0;
  rep.remainder_oracle = 0.25 * remainder_f(rep.poincare_oracle * sep);
  rep.remainder_paper = 0.25 * remainder_f(rep.poincare_paper * sep);

  const auto asym = asymmetry_remainder(e, k, 21, c_asym, std::max(resolution, 64));
  rep.asymmetry_remainder_value = asym.remainder;
  rep.asymmetry = asym.asymmetry;

  auto cell_diag = [&](const ConvexBody& b) {
    const auto [blo, bhi] = bounding_box(b);
    double s = 0.0;
    for (std::size_t d = 0; d < blo.size(); ++d) {
      const double hd = (bhi[d] - blo[d]) / resolution;
      s += hd * hd;
    }
    return std::sqrt(s);
  };
  rep.cell_diameter = std::max(cell_diag(e), cell_diag(k));
  rep.w1_tolerance = 2.0 * rep.cell_diameter;
  rep.w1_bound_ok = rep.w1 >= rep.paper_lower_bound - rep.w1_tolerance;
  return rep;
}

// Isotropic-position diagnostics.
struct IsotropicStats {
  double l_k = 0.0;  // isotropic constant
  double m_k = 0.0;  // normalized first absolute moment
  double isotropy_defect = 0.0;
  Mat covariance;
};

namespace detail {

// Integral of x x^T over the body (not normalized).
inline Mat second_moment_matrix(const ConvexBody& body) {
  const int n = body.dim();
  Mat m2(n);
  switch (body.type) {
    case BodyType::Box: {
      const double vol = volume(body);
      for (int d = 0; d < n; ++d)
        m2(d, d) = vol * body.half_sides[d] * body.half_sides[d] / 3.0;
      return m2;
    }
    case BodyType::Ball: {
      const double vol = volume(body);
      for (int d = 0; d < n; ++d) m2(d, d) = vol * body.radius * body.radius / (n + 2.0);
      return m2;
    }
    case BodyType::Polytope: {
      if (n > 3) throw InvalidInput("second moments: polytopes supported for n <= 3 only");
      // signed simplices against the origin; for a simplex with vertices
      // w_0..w_n: int x x^T = vol/((n+1)(n+2)) (sum w_i w_i^T + (sum w_i)(sum w_i)^T)
      const auto& vs = body.vertices;
      if (n == 2) {
        const auto hull = hull_2d(vs);
        for (std::size_t i = 0; i < hull.size(); ++i) {
          const Vec& a = vs[hull[i]];
          const Vec& b = vs[hull[(i + 1) % hull.size()]];
          const double sv = 0.5 * (a[0] * b[1] - b[0] * a[1]);  // signed area
          for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q) {
              const double s1 = a[p] * a[q] + b[p] * b[q];
              const double sp = a[p] + b[p], sq = a[q] + b[q];
              m2(p, q) += sv / 12.0 * (s1 + sp * sq);
            }
        }
        return m2;
      }
      const auto tris = hull_3d(vs);
      for (const auto& t : tris) {
        const Vec& a = vs[t.v[0]];
        const Vec& b = vs[t.v[1]];
        const Vec& c = vs[t.v[2]];
        const double sv = dot(a, cross3(b, c)) / 6.0;  // signed volume
        for (int p = 0; p < 3; ++p)
          for (int q = 0; q < 3; ++q) {
            const double s1 = a[p] * a[q] + b[p] * b[q] + c[p] * c[q];
            const double sp = a[p] + b[p] + c[p], sq = a[q] + b[q] + c[q];
            m2(p, q) += sv / 20.0 * (s1 + sp * sq);
          }
      }
      return m2;
    }
    case BodyType::Affine: {
      const Mat base2 = second_moment_matrix(*body.base);
      const Vec basec = centroid(*body.base);
      const double basev = volume(*body.base);
      const double det = std::fabs(determinant(body.matrix));
      // E[(A x + b)(A x + b)^T] scaled by |det|
      Mat out(n);
      const Mat& a = body.matrix;
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          double s = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += a(p, i) * base2(i, j) * a(q, j);
          const Vec ac = a.apply(basec);
          s += ac[p] * body.shift[q] * basev + body.shift[p] * ac[q] * basev;
          s += body.shift[p] * body.shift[q] * basev;
          out(p, q) = det * s;
        }
      return out;
    }
  }
  return m2;
}

// int |x| dx over the body.
inline double first_abs_moment(const ConvexBody& body, const QuadratureSpec& quad) {
  const int n = body.dim();
  switch (body.type) {
    case BodyType::Ball: {
      // n omega_n R^{n+1} / (n+1)
      return n * unit_ball_volume(n) * std::pow(body.radius, n + 1) / (n + 1.0);
    }
    case BodyType::Box: {
      std::vector<std::pair<double, double>> box(n);
      for (int d = 0; d < n; ++d) box[d] = {-body.half_sides[d], body.half_sides[d]};
      return integrate_box([](const Vec& x) { return norm2(x); }, box,
                           std::min(quad.rel_tol, 1e-7), quad.max_cells)
          .value;
    }
    default: {
      // indicator integrand: fixed fine grid with boundary refinement
      const int res = n == 2 ? 512 : 96;
      const DiscreteMeasure m = discretize_body(body, res);
      const double vol = volume(body);
      double s = 0.0;
      for (std::size_t i = 0; i < m.size(); ++i) s += m.weights[i] * norm2(m.points[i]);
      return s * vol;
    }
  }
}

}  // namespace detail

inline IsotropicStats isotropic_stats(const ConvexBody& body, const QuadratureSpec& quad = {}) {
  const int n = body.dim();
  const double vol = volume(body);
  if (std::fabs(vol - 1.0) > 1e-9)
    throw InvalidInput("isotropic_stats: body must have unit volume (apply normalize first)");
  const Vec c = centroid(body);
  if (norm2(c) > 1e-9)
    throw InvalidInput("isotropic_stats: body must be centered at the origin");
  IsotropicStats st;
  st.covariance = detail::second_moment_matrix(body);  // |K| = 1: covariance == second moment
  double tr = 0.0;
  for (int d = 0; d < n; ++d) tr += st.covariance(d, d);
  st.l_k = std::sqrt(tr / n);
  const double iso = tr / n;
  double off = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const double d = st.covariance(p, q) - (p == q ? iso : 0.0);
      off += d * d;
    }
  st.isotropy_defect = std::sqrt(off) / iso;
  st.m_k = detail::first_abs_moment(body, quad) / std::sqrt(static_cast<double>(n));
  return st;
}

// W1 estimate between two isotropic unit-volume bodies: the lower side
// sqrt(n) |M(K) - M(L)| is asserted against the computed W1; the upper-side
// expression carries an unknown constant and is only reported.
struct IsotropicW1Report {
  IsotropicStats k_stats, l_stats;
  double w1 = 0.0;
  double lower_bound = 0.0;        // sqrt(n) |M(K) - M(L)|
  double upper_expression = 0.0;   // c (L_K + L_L) sqrt(n) + 8
  double dual_value = 0.0;         // Kantorovich bound with phi = |x|
  double tolerance = 0.02;
  int resolution = 0;
  bool lower_ok = true;
  bool dual_ok = true;
};

inline IsotropicW1Report isotropic_w1_bounds(const ConvexBody& k, const ConvexBody& l,
                                             int resolution, const SolverChoice& choice = {},
                                             double c_upper = 1.0, double tolerance = 0.02) {
  const int n = k.dim();
  IsotropicW1Report rep;
  rep.resolution = resolution;
  rep.tolerance = tolerance;
  rep.k_stats = isotropic_stats(k);
  rep.l_stats = isotropic_stats(l);
  DiscreteMeasure mk = discretize_body(k, resolution);
  DiscreteMeasure ml = discretize_body(l, resolution);
  SolverChoice ch = choice;
  ch.budget_pairs = std::max(ch.budget_pairs, mk.size() * ml.size());
  rep.w1 = transport_cost(mk, ml, CostSpec::euclidean(1.0), ch);
  rep.lower_bound = std::sqrt(static_cast<double>(n)) * std::fabs(rep.k_stats.m_k - rep.l_stats.m_k);
  rep.upper_expression =
      c_upper * (rep.k_stats.l_k + rep.l_stats.l_k) * std::sqrt(static_cast<double>(n)) + 8.0;
  rep.dual_value = dual_lower_bound(mk, ml, [](const Vec& x) { return norm2(x); });
  rep.lower_ok = rep.lower_bound <= rep.w1 + tolerance;
  rep.dual_ok = rep.dual_value <= rep.w1 + 1e-9;
  return rep;
}

// Measured tail |{x in K : |x| >= c sqrt(n) L_K t}| next to the exp(-sqrt(n) t)
// bound; diagnostic only, the constant c is a parameter.
struct TailReport {
  double threshold_radius = 0.0;
  double measured_fraction = 0.0;
  double bound = 0.0;
};

inline TailReport isotropic_tail(const ConvexBody& body, double t, double c = 1.0,
                                int resolution = 128) {
  if (!(t >= 1.0)) throw InvalidInput("isotropic_tail: t must be >= 1");
  const int n = body.dim();
  const IsotropicStats st = isotropic_stats(body);
  TailReport out;
  out.threshold_radius = c * std::sqrt(static_cast<double>(n)) * st.l_k * t;
  const DiscreteMeasure m = discretize_body(body, resolution);
  double frac = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (norm2(m.points[i]) >= out.threshold_radius) frac += m.weights[i];
  out.measured_fraction = frac;  // |K| = 1, so the fraction is the volume
  out.bound = std::exp(-std::sqrt(static_cast<double>(n)) * t);
  return out;
}

}  // namespace isotk
