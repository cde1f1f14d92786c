#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <queue>
#include <vector>

#include "isotk/errors.hpp"
#include "isotk/linalg.hpp"

namespace isotk {

// Numerical integral together with its achieved accuracy. `converged` is
// false when the requested tolerance could not be certified (slow tails,
// cell budget exhausted); the value is still the best available estimate.
struct Integral {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = true;
  double cutoff_radius = 0.0;  // radial path only: where integration stopped
};

struct QuadratureSpec {
  std::vector<std::pair<double, double>> box;  // optional explicit domain
  double rel_tol = 1e-6;
  int max_cells = 200000;
};

namespace quadrule {

// Gauss-Legendre nodes/weights on [-1,1], cached per order.
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int m) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex cache_mutex;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<double> x(m), w(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[m - 1 - i] = t;
    const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
    w[i] = wi;
    w[m - 1 - i] = wi;
  }
  return cache.emplace(m, std::make_pair(std::move(x), std::move(w))).first->second;
}

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 constants).
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

inline void gk15(const std::function<double(double)>& f, double a, double b, double& value,
                 double& error) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  const double fc = f(c);
  resk += kWgk[7] * fc;
  resg += kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double fsum = f(c - x) + f(c + x);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  value = resk * h;
  error = std::fabs((resk - resg) * h);
}

}  // namespace quadrule

// Adaptive 1-D quadrature on a finite interval.
inline Integral integrate_1d(const std::function<double(double)>& f, double a, double b,
                             double rel_tol = 1e-10, int max_intervals = 20000) {
  struct Piece {
    double a, b, value, error;
  };
  auto eval = [&](double lo, double hi) {
    Piece p{lo, hi, 0.0, 0.0};
    quadrule::gk15(f, lo, hi, p.value, p.error);
    return p;
  };
  auto cmp = [](const Piece& x, const Piece& y) { return x.error < y.error; };
  std::priority_queue<Piece, std::vector<Piece>, decltype(cmp)> heap(cmp);
  heap.push(eval(a, b));
  double total = heap.top().value, total_err = heap.top().error;
  int count = 1;
  while (total_err > rel_tol * std::max(std::fabs(total), 1e-300) && count < max_intervals) {
    Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Piece l = eval(worst.a, mid), r = eval(mid, worst.b);
    total += l.value + r.value - worst.value;
    total_err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // Recompute sums from the heap for a clean rounding story.
  std::vector<Piece> pieces;
  while (!heap.empty()) {
    pieces.push_back(heap.top());
    heap.pop();
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  Integral out;
  for (const auto& p : pieces) {
    out.value += p.value;
    out.abs_error += p.error;
  }
  out.converged = out.abs_error <= rel_tol * std::max(std::fabs(out.value), 1e-300) * 4.0 ||
                  out.abs_error <= 1e-14;
  out.cutoff_radius = b;
  return out;
}

// Improper radial integral  int_0^inf r^{n-1} g(r) dr  by geometric shells.
//
// Shell sums that keep decreasing are followed until the tail drops below the
// tolerance. If they level off (a log-divergent tail), integration stops at
// `slow_tail_cutoff` and the result is flagged `converged = false`. Shell sums
// that grow raise NumericError: the integral is genuinely divergent.
inline Integral integrate_radial(const std::function<double(double)>& g, int n,
                                 double rel_tol = 1e-6, double inner_radius = 1.0,
                                 double slow_tail_cutoff = 1e7, int max_shells = 400) {
  auto weighted = [&](double r) { return std::pow(r, n - 1) * g(r); };
  Integral head = integrate_1d(weighted, 0.0, inner_radius, rel_tol * 0.1);
  double total = head.value, err = head.abs_error;
  double lo = inner_radius;
  double prev_shell = -1.0;
  int flat_count = 0, growing_count = 0;
  Integral out;
  for (int k = 0; k < max_shells; ++k) {
    const double hi = lo * 2.0;
    Integral shell = integrate_1d(weighted, lo, hi, rel_tol * 0.1);
    total += shell.value;
    err += shell.abs_error;
    const double mag = std::fabs(shell.value);
    if (mag <= rel_tol * std::max(std::fabs(total), 1e-300)) {
      out.value = total;
      out.abs_error = err + mag;
      out.converged = true;
      out.cutoff_radius = hi;
      return out;
    }
    if (prev_shell >= 0.0) {
      growing_count = (mag > 1.3 * prev_shell) ? growing_count + 1 : 0;
      if (growing_count >= 3 && k > 5)
        throw NumericError("integrate_radial: divergent tail (growing shell contributions)");
      flat_count = (mag > 0.75 * prev_shell) ? flat_count + 1 : 0;
    }
    if (flat_count >= 4 && hi >= slow_tail_cutoff) {
      out.value = total;
      out.abs_error = err + mag;  // the tail is not summable; report last shell
      out.converged = false;
      out.cutoff_radius = hi;
      return out;
    }
    prev_shell = mag;
    lo = hi;
    if (!std::isfinite(total)) throw NumericError("integrate_radial: overflow");
  }
  out.value = total;
  out.abs_error = err;
  out.converged = false;
  out.cutoff_radius = lo;
  return out;
}

// Adaptive tensor-product cubature over an axis-aligned box in R^n (n <= 3 in
// practice). Cell rule: Gauss 5^n, with the Gauss 3^n difference as the error
// estimate. Deterministic: the refinement order depends only on the input.
inline Integral integrate_box(const std::function<double(const Vec&)>& f,
                              const std::vector<std::pair<double, double>>& box,
                              double rel_tol = 1e-6, int max_cells = 200000) {
  const int n = static_cast<int>(box.size());
  const auto& g5 = quadrule::gauss_legendre(5);
  const auto& g3 = quadrule::gauss_legendre(3);

  auto cell_rule = [&](const Vec& lo, const Vec& hi, double& v5, double& v3) {
    std::vector<int> id(n, 0);
    Vec x(n);
    v5 = 0.0;
    for (;;) {
      double w = 1.0;
      for (int d = 0; d < n; ++d) {
        const double h = 0.5 * (hi[d] - lo[d]);
        x[d] = 0.5 * (lo[d] + hi[d]) + h * g5.first[id[d]];
        w *= h * g5.second[id[d]];
      }
      v5 += w * f(x);
      int d = 0;
      while (d < n && ++id[d] == 5) id[d++] = 0;
      if (d == n) break;
    }
    id.assign(n, 0);
    v3 = 0.0;
    for (;;) {
      double w = 1.0;
      for (int d = 0; d < n; ++d) {
        const double h = 0.5 * (hi[d] - lo[d]);
        x[d] = 0.5 * (lo[d] + hi[d]) + h * g3.first[id[d]];
        w *= h * g3.second[id[d]];
      }
      v3 += w * f(x);
      int d = 0;
      while (d < n && ++id[d] == 3) id[d++] = 0;
      if (d == n) break;
    }
  };

  struct Cell {
    Vec lo, hi;
    double value, error;
    std::uint64_t seq;
  };
  auto cmp = [](const Cell& a, const Cell& b) {
    if (a.error != b.error) return a.error < b.error;
    return a.seq > b.seq;
  };
  std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> heap(cmp);
  std::uint64_t seq = 0;

  auto push_cell = [&](Vec lo, Vec hi) {
    Cell c{std::move(lo), std::move(hi), 0.0, 0.0, seq++};
    double v5, v3;
    cell_rule(c.lo, c.hi, v5, v3);
    c.value = v5;
    c.error = std::fabs(v5 - v3);
    heap.push(c);
    return std::make_pair(v5, std::fabs(v5 - v3));
  };

  Vec lo(n), hi(n);
  for (int d = 0; d < n; ++d) {
    lo[d] = box[d].first;
    hi[d] = box[d].second;
  }
  auto [total, total_err] = push_cell(lo, hi);
  int cells = 1;
  while (total_err > rel_tol * std::max(std::fabs(total), 1e-300) && cells < max_cells) {
    Cell worst = heap.top();
    heap.pop();
    int axis = 0;
    double widest = worst.hi[0] - worst.lo[0];
    for (int d = 1; d < n; ++d)
      if (worst.hi[d] - worst.lo[d] > widest) {
        widest = worst.hi[d] - worst.lo[d];
        axis = d;
      }
    const double mid = 0.5 * (worst.lo[axis] + worst.hi[axis]);
    total -= worst.value;
    total_err -= worst.error;
    Vec l_hi = worst.hi, r_lo = worst.lo;
    l_hi[axis] = mid;
    r_lo[axis] = mid;
    auto [v1, e1] = push_cell(worst.lo, l_hi);
    auto [v2, e2] = push_cell(r_lo, worst.hi);
    total += v1 + v2;
    total_err += e1 + e2;
    ++cells;
  }
  Integral out;
  out.value = total;
  out.abs_error = total_err;
  out.converged = total_err <= rel_tol * std::max(std::fabs(total), 1e-300) * 4.0;
  return out;
}

}  // namespace isotk
