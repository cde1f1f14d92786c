#pragma once

#include <cmath>
#include <tuple>
#include <vector>

#include "isotk/errors.hpp"

namespace isotk {

struct EntropicPlanResult {
  std::vector<std::tuple<int, int, double>> plan;
  double cost = 0.0;
  double marginal_defect = 0.0;
  long iterations = 0;
  double epsilon = 0.0;
};

// Log-domain Sinkhorn with epsilon scaling. The returned plan is rounded to
// the exact marginals (row/column rescale plus a rank-one correction), so its
// primal cost is the cost of a feasible plan and can only sit above the LP
// optimum.
inline EntropicPlanResult sinkhorn(const std::vector<double>& a, const std::vector<double>& b,
                                   const std::vector<double>& cost_matrix, double epsilon,
                                   long max_iter = 100000, double tol = 1e-9) {
  const int m = static_cast<int>(a.size());
  const int k = static_cast<int>(b.size());
  if (cost_matrix.size() != static_cast<std::size_t>(m) * k)
    throw InvalidInput("sinkhorn: cost matrix size mismatch");
  if (!(epsilon > 0.0)) throw InvalidInput("sinkhorn: epsilon must be positive");

  double cmax = 0.0;
  for (double c : cost_matrix) cmax = std::max(cmax, std::fabs(c));

  std::vector<double> f(m, 0.0), g(k, 0.0), log_a(m), log_b(k);
  for (int i = 0; i < m; ++i) log_a[i] = std::log(a[i]);
  for (int j = 0; j < k; ++j) log_b[j] = std::log(b[j]);

  auto c_at = [&](int i, int j) { return cost_matrix[static_cast<std::size_t>(i) * k + j]; };

  long iters = 0;
  std::vector<double> eps_levels;
  for (double e = std::max(epsilon, 0.25 * cmax); e > epsilon * 1.0001; e *= 0.25)
    eps_levels.push_back(e);
  eps_levels.push_back(epsilon);

  std::vector<double> row(k), col(m);
  double defect = 1e300;
  for (std::size_t lev = 0; lev < eps_levels.size(); ++lev) {
    const double eps = eps_levels[lev];
    const double level_tol = (lev + 1 == eps_levels.size()) ? tol : std::max(tol, 1e-4);
    for (;;) {
      // f-update: rows hit their marginals exactly
      for (int i = 0; i < m; ++i) {
        double mx = -1e300;
        for (int j = 0; j < k; ++j) mx = std::max(mx, (g[j] - c_at(i, j)) / eps);
        double s = 0.0;
        for (int j = 0; j < k; ++j) s += std::exp((g[j] - c_at(i, j)) / eps - mx);
        f[i] = eps * (log_a[i] - mx - std::log(s));
      }
      // g-update, then measure the row defect of the implied plan
      for (int j = 0; j < k; ++j) {
        double mx = -1e300;
        for (int i = 0; i < m; ++i) mx = std::max(mx, (f[i] - c_at(i, j)) / eps);
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += std::exp((f[i] - c_at(i, j)) / eps - mx);
        g[j] = eps * (log_b[j] - mx - std::log(s));
      }
      defect = 0.0;
      for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (int j = 0; j < k; ++j) s += std::exp((f[i] + g[j] - c_at(i, j)) / eps);
        defect = std::max(defect, std::fabs(s - a[i]));
      }
      ++iters;
      if (defect <= level_tol) break;
      if (iters >= max_iter)
        throw NumericError("sinkhorn: no convergence in max_iter (marginal defect " +
                           std::to_string(defect) + ")");
    }
  }

  // dense plan at the target epsilon, rounded onto the marginal polytope
  std::vector<double> p(static_cast<std::size_t>(m) * k);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j)
      p[static_cast<std::size_t>(i) * k + j] = std::exp((f[i] + g[j] - c_at(i, j)) / epsilon);

  auto row_sums = [&](std::vector<double>& r) {
    r.assign(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) r[i] += p[static_cast<std::size_t>(i) * k + j];
  };
  auto col_sums = [&](std::vector<double>& c) {
    c.assign(k, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) c[j] += p[static_cast<std::size_t>(i) * k + j];
  };
  std::vector<double> rs, cs;
  row_sums(rs);
  for (int i = 0; i < m; ++i) {
    const double r = rs[i] > 0.0 ? std::min(1.0, a[i] / rs[i]) : 0.0;
    for (int j = 0; j < k; ++j) p[static_cast<std::size_t>(i) * k + j] *= r;
  }
  col_sums(cs);
  for (int j = 0; j < k; ++j) {
    const double r = cs[j] > 0.0 ? std::min(1.0, b[j] / cs[j]) : 0.0;
    for (int i = 0; i < m; ++i) p[static_cast<std::size_t>(i) * k + j] *= r;
  }
  row_sums(rs);
  col_sums(cs);
  std::vector<double> ea(m), eb(k);
  double ea_sum = 0.0;
  for (int i = 0; i < m; ++i) {
    ea[i] = a[i] - rs[i];
    ea_sum += std::fabs(ea[i]);
  }
  for (int j = 0; j < k; ++j) eb[j] = b[j] - cs[j];
  if (ea_sum > 0.0)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j)
        p[static_cast<std::size_t>(i) * k + j] += ea[i] * eb[j] / ea_sum;

  EntropicPlanResult out;
  out.iterations = iters;
  out.epsilon = epsilon;
  row_sums(rs);
  col_sums(cs);
  for (int i = 0; i < m; ++i) out.marginal_defect = std::max(out.marginal_defect, std::fabs(rs[i] - a[i]));
  for (int j = 0; j < k; ++j) out.marginal_defect = std::max(out.marginal_defect, std::fabs(cs[j] - b[j]));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) {
      const double mass = p[static_cast<std::size_t>(i) * k + j];
      if (mass > 1e-17) {
        out.plan.emplace_back(i, j, mass);
        out.cost += mass * c_at(i, j);
      }
    }
  return out;
}

}  // namespace isotk
