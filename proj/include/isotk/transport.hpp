#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "isotk/errors.hpp"
#include "isotk/linalg.hpp"
#include "isotk/measure.hpp"
#include "isotk/network_simplex.hpp"
#include "isotk/sinkhorn.hpp"

namespace isotk {

// F(t) = t - log(1+t): quadratic near zero, linear at infinity. The remainder
// profile entering the Cheeger-weighted transport cost.
inline double remainder_f(double t) {
  if (t < 0.0) throw InvalidInput("remainder_f: negative argument");
  return t - std::log1p(t);
}

// Transport cost c(x, y): either |x-y|^p or F(D_che |x-y|).
struct CostSpec {
  enum class Kind { EuclideanPower, CheegerF };
  Kind kind = Kind::EuclideanPower;
  double power = 1.0;
  double d_che = 1.0;

  static CostSpec euclidean(double p) {
    if (!(p >= 1.0)) throw InvalidInput("cost: power must be >= 1");
    CostSpec c;
    c.kind = Kind::EuclideanPower;
    c.power = p;
    return c;
  }

  static CostSpec cheeger(double d) {
    if (!(d > 0.0)) throw InvalidInput("cost: Cheeger constant must be positive");
    CostSpec c;
    c.kind = Kind::CheegerF;
    c.d_che = d;
    return c;
  }

  double operator()(const Vec& x, const Vec& y) const {
    const double d = dist(x, y);
    if (kind == Kind::EuclideanPower)
      return power == 1.0 ? d : (power == 2.0 ? d * d : std::pow(d, power));
    return remainder_f(d_che * d);
  }

  std::string describe() const {
    if (kind == Kind::EuclideanPower) return "euclidean_power(" + std::to_string(power) + ")";
    return "cheeger_f(" + std::to_string(d_che) + ")";
  }
};

struct TransportPlan {
  std::vector<std::tuple<int, int, double>> couplings;
  double primal_cost = 0.0;
  double marginal_defect = 0.0;
  std::string solver;  // "exact" or "entropic"
  double epsilon = 0.0;
  long iterations = 0;
};

inline double plan_marginal_defect(const TransportPlan& plan, const DiscreteMeasure& mu,
                                   const DiscreteMeasure& nu) {
  std::vector<double> rs(mu.size(), 0.0), cs(nu.size(), 0.0);
  for (const auto& [i, j, mass] : plan.couplings) {
    rs[i] += mass;
    cs[j] += mass;
  }
  double d = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) d = std::max(d, std::fabs(rs[i] - mu.weights[i]));
  for (std::size_t j = 0; j < nu.size(); ++j) d = std::max(d, std::fabs(cs[j] - nu.weights[j]));
  return d;
}

inline double recompute_plan_cost(const TransportPlan& plan, const DiscreteMeasure& mu,
                                  const DiscreteMeasure& nu, const CostSpec& cost) {
  double s = 0.0;
  for (const auto& [i, j, mass] : plan.couplings) s += mass * cost(mu.points[i], nu.points[j]);
  return s;
}

inline constexpr std::size_t kDefaultExactBudget = 250000;

// Exact optimal coupling by network simplex. `budget_pairs` caps the dense
// instance size.
inline TransportPlan solve_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 const CostSpec& cost,
                                 std::size_t budget_pairs = kDefaultExactBudget) {
  mu.validate();
  nu.validate();
  if (mu.dim() != nu.dim()) throw InvalidInput("solve_exact: dimension mismatch");
  if (mu.size() * nu.size() > budget_pairs)
    throw NumericError("solve_exact: instance exceeds the exact-solver budget; use entropic");
  auto c = [&](int i, int j) { return cost(mu.points[i], nu.points[j]); };
  ExactPlanResult r = solve_transport_lp(mu.weights, nu.weights, c, true);
  TransportPlan plan;
  plan.couplings = std::move(r.plan);
  plan.primal_cost = r.cost;
  plan.solver = "exact";
  plan.iterations = r.pivots;
  plan.marginal_defect = plan_marginal_defect(plan, mu, nu);
  if (plan.marginal_defect > 1e-10)
    throw NumericError("solve_exact: marginal defect above 1e-10");
  return plan;
}

inline TransportPlan solve_entropic(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const CostSpec& cost, double epsilon, long max_iter = 100000,
                                    double tol = 1e-9) {
  mu.validate();
  nu.validate();
  if (mu.dim() != nu.dim()) throw InvalidInput("solve_entropic: dimension mismatch");
  const int m = static_cast<int>(mu.size()), k = static_cast<int>(nu.size());
  std::vector<double> cmat(static_cast<std::size_t>(m) * k);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j)
      cmat[static_cast<std::size_t>(i) * k + j] = cost(mu.points[i], nu.points[j]);
  EntropicPlanResult r = sinkhorn(mu.weights, nu.weights, cmat, epsilon, max_iter, tol);
  TransportPlan plan;
  plan.couplings = std::move(r.plan);
  plan.primal_cost = r.cost;
  plan.solver = "entropic";
  plan.epsilon = epsilon;
  plan.iterations = r.iterations;
  plan.marginal_defect = plan_marginal_defect(plan, mu, nu);
  if (plan.marginal_defect > std::max(tol, 1e-12))
    throw NumericError("solve_entropic: marginal defect above tolerance after rounding");
  return plan;
}

struct SolverChoice {
  std::string kind = "exact";  // "exact" or "entropic"
  double epsilon = 1e-2;
  std::size_t budget_pairs = kDefaultExactBudget;
  long max_iter = 100000;
  double tol = 1e-9;
};

inline TransportPlan solve(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const CostSpec& cost, const SolverChoice& choice) {
  if (choice.kind == "exact") return solve_exact(mu, nu, cost, choice.budget_pairs);
  if (choice.kind == "entropic")
    return solve_entropic(mu, nu, cost, choice.epsilon, choice.max_iter, choice.tol);
  throw InvalidInput("solver kind must be 'exact' or 'entropic'");
}

// W_c(mu, nu) under the chosen solver.
inline double transport_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                             const CostSpec& cost, const SolverChoice& choice = {}) {
  return solve(mu, nu, cost, choice).primal_cost;
}

// Kantorovich lower bound  int phi dmu - int phi dnu <= W_1(mu, nu) for
// 1-Lipschitz phi. The Lipschitz property is checked on support point pairs.
inline double dual_lower_bound(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                               const std::function<double(const Vec&)>& phi) {
  mu.validate();
  nu.validate();
  std::vector<const DiscreteMeasure*> ms = {&mu, &nu};
  std::vector<Vec> pts;
  for (const auto* m : ms)
    for (const auto& p : m->points) pts.push_back(p);
  const std::size_t np = pts.size();
  const std::size_t stride = np > 1500 ? np / 1500 + 1 : 1;
  for (std::size_t i = 0; i < np; i += stride)
    for (std::size_t j = i + 1; j < np; j += stride) {
      const double dd = dist(pts[i], pts[j]);
      if (std::fabs(phi(pts[i]) - phi(pts[j])) > dd * (1.0 + 1e-9) + 1e-12)
        throw InvalidInput("dual_lower_bound: phi is not 1-Lipschitz on the supports");
    }
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += mu.weights[i] * phi(mu.points[i]);
  for (std::size_t j = 0; j < nu.size(); ++j) s -= nu.weights[j] * phi(nu.points[j]);
  return s;
}

// Barycentric projection of a quadratic-cost plan: the discrete stand-in for
// the Brenier map.
inline std::vector<std::pair<Vec, Vec>> barycentric_map(const TransportPlan& plan,
                                                        const DiscreteMeasure& mu,
                                                        const DiscreteMeasure& nu) {
  const int n = mu.dim();
  std::vector<Vec> img(mu.size(), Vec(n, 0.0));
  std::vector<double> mass(mu.size(), 0.0);
  for (const auto& [i, j, w] : plan.couplings) {
    img[i] = add(img[i], scale(nu.points[j], w));
    mass[i] += w;
  }
  std::vector<std::pair<Vec, Vec>> out;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mass[i] > 0.0) out.emplace_back(mu.points[i], scale(img[i], 1.0 / mass[i]));
  return out;
}

// min over translations v of W_c(tau_v mu, nu): coarse grid (always containing
// v = 0) followed by local refinement passes.
inline std::pair<Vec, double> wasserstein_translation_min(
    const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostSpec& cost,
    const std::vector<std::pair<double, double>>& search_box, const SolverChoice& choice = {},
    int grid_per_axis = 5, int refinements = 2) {
  const int n = mu.dim();
  if (static_cast<int>(search_box.size()) != n)
    throw InvalidInput("translation_min: search box dimension mismatch");

  auto eval = [&](const Vec& v) { return transport_cost(translate(mu, v), nu, cost, choice); };

  Vec best_v(n, 0.0);
  double best = eval(best_v);
  Vec lo(n), hi(n);
  for (int d = 0; d < n; ++d) {
    lo[d] = search_box[d].first;
    hi[d] = search_box[d].second;
  }
  for (int pass = 0; pass <= refinements; ++pass) {
    std::vector<int> id(n, 0);
    Vec v(n);
    for (;;) {
      for (int d = 0; d < n; ++d)
        v[d] = lo[d] + (hi[d] - lo[d]) * id[d] / (grid_per_axis - 1.0);
      const double val = eval(v);
      if (val < best) {
        best = val;
        best_v = v;
      }
      int d = 0;
      while (d < n && ++id[d] == grid_per_axis) id[d++] = 0;
      if (d == n) break;
    }
    for (int d = 0; d < n; ++d) {
      const double step = (hi[d] - lo[d]) / (grid_per_axis - 1.0);
      lo[d] = best_v[d] - step;
      hi[d] = best_v[d] + step;
    }
  }
  return {best_v, best};
}

inline void write_plan_csv(const TransportPlan& plan, std::FILE* f) {
  std::fprintf(f, "i,j,mass\n");
  for (const auto& [i, j, mass] : plan.couplings) std::fprintf(f, "%d,%d,%.17g\n", i, j, mass);
}

}  // namespace isotk
