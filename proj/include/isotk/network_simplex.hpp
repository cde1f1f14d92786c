#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <tuple>
#include <vector>

#include "isotk/errors.hpp"

namespace isotk {

// Optimal dense transportation plan between weight vectors a (sources) and
// b (sinks), sum(a) == sum(b).
struct ExactPlanResult {
  std::vector<std::tuple<int, int, double>> plan;  // (source, sink, mass)
  double cost = 0.0;
  std::vector<double> potential_source;  // duals: u_i + v_j <= c_ij, tight on the plan
  std::vector<double> potential_sink;
  long pivots = 0;
};

// Bipartite network simplex on the complete graph, LEMON-style artificial
// root initialization, block pricing with lowest-index tie-breaking, and the
// strongly feasible leaving-arc rule (last blocking arc from the apex), which
// rules out cycling on the fully degenerate equal-weight instances that grid
// measures produce.
class TransportationSimplex {
 public:
  TransportationSimplex(std::vector<double> a, std::vector<double> b,
                        std::function<double(int, int)> cost, bool cache_costs = true)
      : a_(std::move(a)), b_(std::move(b)), m_(static_cast<int>(a_.size())),
        k_(static_cast<int>(b_.size())), cost_fn_(std::move(cost)) {
    if (m_ == 0 || k_ == 0) throw InvalidInput("network simplex: empty marginals");
    double sa = 0.0, sb = 0.0;
    for (double w : a_) sa += w;
    for (double w : b_) sb += w;
    if (std::fabs(sa - sb) > 1e-9) throw InvalidInput("network simplex: unbalanced marginals");
    if (cache_costs) {
      cache_.resize(static_cast<std::size_t>(m_) * k_);
      max_cost_ = 0.0;
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < k_; ++j) {
          const double c = cost_fn_(i, j);
          cache_[static_cast<std::size_t>(i) * k_ + j] = c;
          max_cost_ = std::max(max_cost_, std::fabs(c));
        }
      cached_ = true;
    } else {
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < k_; ++j) max_cost_ = std::max(max_cost_, std::fabs(cost_fn_(i, j)));
    }
  }

  ExactPlanResult solve() {
    init_tree();
    const double eps_opt = 1e-11 * (1.0 + max_cost_);
    const std::size_t arcs = static_cast<std::size_t>(m_) * k_;
    const std::size_t block =
        std::max<std::size_t>(256, static_cast<std::size_t>(std::sqrt(double(arcs))));
    std::size_t next = 0;
    long pivots = 0;
    const long degenerate_cap = 200L * (m_ + k_) + 100000L;
    long degenerate_run = 0;

    for (;;) {
      // entering arc: best reduced cost within the first block that has one
      int enter_i = -1, enter_j = -1;
      double best = -eps_opt;
      std::size_t scanned = 0;
      while (scanned < arcs) {
        const std::size_t stop = std::min(block, arcs - scanned);
        for (std::size_t t = 0; t < stop; ++t) {
          const std::size_t e = next + t < arcs ? next + t : next + t - arcs;
          const int i = static_cast<int>(e / k_);
          const int j = static_cast<int>(e % k_);
          const double rc = cost_at(i, j) - pot_[i] + pot_[m_ + j];
          if (rc < best) {
            best = rc;
            enter_i = i;
            enter_j = j;
          }
        }
        scanned += stop;
        next = next + stop < arcs ? next + stop : next + stop - arcs;
        if (enter_i >= 0) break;
      }
      if (enter_i < 0) break;  // optimal

      if (pivot(enter_i, enter_j, best)) {
        degenerate_run = 0;
      } else if (++degenerate_run > degenerate_cap) {
        throw NumericError("network simplex: pivot stall (degeneracy guard tripped)");
      }
      ++pivots;
    }

    ExactPlanResult out;
    out.pivots = pivots;
    out.potential_source.assign(pot_.begin(), pot_.begin() + m_);
    out.potential_sink.resize(k_);
    for (int j = 0; j < k_; ++j) out.potential_sink[j] = -pot_[m_ + j];
    const double feas_tol = 1e-9;
    for (int u = 0; u < m_ + k_; ++u) {
      if (par_[u] == root_) {
        if (flow_[u] > feas_tol)
          throw NumericError("network simplex: artificial arc kept positive flow");
        continue;
      }
      if (flow_[u] <= 0.0) continue;
      const int i = u < m_ ? u : par_[u];
      const int j = u < m_ ? par_[u] - m_ : u - m_;
      out.plan.emplace_back(i, j, flow_[u]);
      out.cost += flow_[u] * cost_at(i, j);
    }
    return out;
  }

 private:
  std::vector<double> a_, b_;
  int m_, k_;
  std::function<double(int, int)> cost_fn_;
  std::vector<double> cache_;
  bool cached_ = false;
  double max_cost_ = 0.0;

  int root_ = 0;
  std::vector<int> par_, depth_, pos_in_parent_;
  std::vector<double> flow_, pot_;
  std::vector<std::vector<int>> children_;

  double cost_at(int i, int j) const {
    return cached_ ? cache_[static_cast<std::size_t>(i) * k_ + j] : cost_fn_(i, j);
  }

  // +1 if the physical arc between u and its parent leaves u.
  int dir_up(int u) const { return u < m_ ? +1 : -1; }

  void attach_child(int p, int u) {
    pos_in_parent_[u] = static_cast<int>(children_[p].size());
    children_[p].push_back(u);
  }

  void detach_child(int p, int u) {
    const int pos = pos_in_parent_[u];
    const int last = children_[p].back();
    children_[p][pos] = last;
    pos_in_parent_[last] = pos;
    children_[p].pop_back();
  }

  void init_tree() {
    root_ = m_ + k_;
    const int v = m_ + k_ + 1;
    par_.assign(v, -1);
    depth_.assign(v, 0);
    flow_.assign(v, 0.0);
    pot_.assign(v, 0.0);
    children_.assign(v, {});
    pos_in_parent_.assign(v, -1);
    const double big = 2.0 * max_cost_ + 1.0;
    for (int i = 0; i < m_; ++i) {
      par_[i] = root_;
      depth_[i] = 1;
      flow_[i] = a_[i];
      pot_[i] = big;  // basic artificial arc i -> root with cost `big`
      attach_child(root_, i);
    }
    for (int j = 0; j < k_; ++j) {
      const int u = m_ + j;
      par_[u] = root_;
      depth_[u] = 1;
      flow_[u] = b_[j];
      pot_[u] = -big;  // basic artificial arc root -> j
      attach_child(root_, u);
    }
  }

  // One simplex pivot with entering arc (i*, j*). Returns false if degenerate.
  bool pivot(int ei, int ej, double rc_enter) {
    const int x_src = ei, x_snk = m_ + ej;

    // climb both endpoints to the apex
    int u = x_src, w = x_snk;
    while (depth_[u] > depth_[w]) u = par_[u];
    while (depth_[w] > depth_[u]) w = par_[w];
    while (u != w) {
      u = par_[u];
      w = par_[w];
    }
    const int apex = u;

    // ratio test: on the i*-side arcs with dir_up = +1 lose flow, on the
    // j*-side arcs with dir_up = -1 lose flow
    double theta = 1e300;
    for (int q = x_src; q != apex; q = par_[q])
      if (dir_up(q) == +1) theta = std::min(theta, flow_[q]);
    for (int q = x_snk; q != apex; q = par_[q])
      if (dir_up(q) == -1) theta = std::min(theta, flow_[q]);

    const double tie = theta * (1.0 + 1e-12) + 1e-300;
    // leaving arc: last blocking arc along the cycle orientation starting at
    // the apex, i.e. deepest on the i*-side unless the j*-side blocks at all,
    // in which case the shallowest blocking arc on the j*-side
    int leave = -1;
    for (int q = x_src; q != apex; q = par_[q])
      if (dir_up(q) == +1 && flow_[q] <= tie && leave < 0) leave = q;  // deepest first
    for (int q = x_snk; q != apex; q = par_[q])
      if (dir_up(q) == -1 && flow_[q] <= tie) leave = q;  // keep shallowest = last seen
    if (leave < 0) throw NumericError("network simplex: unbounded pivot");

    // apply the flow change around the cycle
    for (int q = x_src; q != apex; q = par_[q]) flow_[q] -= dir_up(q) * theta;
    for (int q = x_snk; q != apex; q = par_[q]) flow_[q] += dir_up(q) * theta;

    // which side of the cycle is being cut off?
    bool leave_on_source_side = false;
    for (int q = x_src; q != apex; q = par_[q])
      if (q == leave) {
        leave_on_source_side = true;
        break;
      }
    const int sub_root = leave_on_source_side ? x_src : x_snk;   // new root of cut subtree
    const int graft_to = leave_on_source_side ? x_snk : x_src;   // stays in the main tree

    // reverse the parent chain sub_root -> ... -> leave
    int prev = graft_to;
    double carry_flow = theta;
    int q2 = sub_root;
    while (true) {
      const int nextq = par_[q2];
      const double fq = flow_[q2];
      detach_child(nextq, q2);
      par_[q2] = prev;
      flow_[q2] = carry_flow;
      attach_child(prev, q2);
      if (q2 == leave) break;
      prev = q2;
      carry_flow = fq;
      q2 = nextq;
    }

    // potentials shift by a constant on the re-hung subtree
    const double delta = leave_on_source_side ? rc_enter : -rc_enter;
    // depth + potential sweep over the subtree now rooted at sub_root
    std::vector<int> stack = {sub_root};
    while (!stack.empty()) {
      const int q = stack.back();
      stack.pop_back();
      depth_[q] = depth_[par_[q]] + 1;
      pot_[q] += delta;
      for (int ch : children_[q]) stack.push_back(ch);
    }
    return theta > 0.0;
  }
};

inline ExactPlanResult solve_transport_lp(const std::vector<double>& a,
                                          const std::vector<double>& b,
                                          const std::function<double(int, int)>& cost,
                                          bool cache_costs = true) {
  TransportationSimplex s(a, b, cost, cache_costs);
  return s.solve();
}

}  // namespace isotk
