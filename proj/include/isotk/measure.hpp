#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "isotk/body.hpp"
#include "isotk/errors.hpp"
#include "isotk/linalg.hpp"

namespace isotk {

// Weighted point cloud carrying a discretized body measure.
struct DiscreteMeasure {
  std::vector<Vec> points;
  std::vector<double> weights;
  std::string source_tag;

  int dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }
  std::size_t size() const { return points.size(); }

  void validate() const {
    if (points.size() != weights.size() || points.empty())
      throw InvalidInput("measure: inconsistent points/weights");
    double s = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw InvalidInput("measure: negative weight");
      s += w;
    }
    if (std::fabs(s - 1.0) > 1e-12) throw InvalidInput("measure: weights must sum to 1");
  }

  void renormalize() {
    double s = 0.0;
    for (double w : weights) s += w;
    if (!(s > 0.0)) throw InvalidInput("measure: zero total mass");
    for (double& w : weights) w /= s;
  }
};

// Regular-grid discretization of lambda_E: `resolution` cells per axis over
// the bounding box, cell centers inside the body kept, boundary-cell weights
// corrected by one subdivision pass.
inline DiscreteMeasure discretize_body(const ConvexBody& body, int resolution,
                                       bool refine_boundary = true) {
  if (resolution < 1) throw InvalidInput("discretize_body: resolution must be positive");
  const int n = body.dim();
  const auto [lo, hi] = bounding_box(body);
  Vec h(n);
  for (int d = 0; d < n; ++d) h[d] = (hi[d] - lo[d]) / resolution;
  auto member = membership(body, 1e-12);

  DiscreteMeasure out;
  out.source_tag = "grid:" + std::to_string(resolution);
  std::vector<int> id(n, 0);
  Vec center(n), corner(n);
  const int sub = 4;  // refinement samples per axis on boundary cells
  for (;;) {
    for (int d = 0; d < n; ++d) center[d] = lo[d] + (id[d] + 0.5) * h[d];
    if (member(center)) {
      double w = 1.0;
      if (refine_boundary) {
        bool boundary = false;
        for (int mask = 0; mask < (1 << n) && !boundary; ++mask) {
          for (int d = 0; d < n; ++d)
            corner[d] = lo[d] + (id[d] + ((mask >> d) & 1)) * h[d];
          if (!member(corner)) boundary = true;
        }
        if (boundary) {
          long in = 0, tot = 0;
          std::vector<int> sid(n, 0);
          Vec p(n);
          for (;;) {
            for (int d = 0; d < n; ++d)
              p[d] = lo[d] + (id[d] + (sid[d] + 0.5) / sub) * h[d];
            ++tot;
            if (member(p)) ++in;
            int d = 0;
            while (d < n && ++sid[d] == sub) sid[d++] = 0;
            if (d == n) break;
          }
          w = static_cast<double>(in) / tot;
        }
      }
      if (w > 0.0) {
        out.points.push_back(center);
        out.weights.push_back(w);
      }
    }
    int d = 0;
    while (d < n && ++id[d] == resolution) id[d++] = 0;
    if (d == n) break;
  }
  if (out.points.empty())
    throw InvalidInput("discretize_body: no cell centers inside the body; raise the resolution");
  out.renormalize();
  return out;
}

inline DiscreteMeasure translate(const DiscreteMeasure& m, const Vec& v) {
  DiscreteMeasure out = m;
  for (auto& p : out.points) p = add(p, v);
  return out;
}

// Push-forward through x -> Ax + b.
inline DiscreteMeasure apply_map(const DiscreteMeasure& m, const Mat& a, const Vec& b) {
  DiscreteMeasure out = m;
  for (auto& p : out.points) p = add(a.apply(p), b);
  return out;
}

inline Vec mean_point(const DiscreteMeasure& m) {
  Vec s(m.dim(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) s = add(s, scale(m.points[i], m.weights[i]));
  return s;
}

inline void write_measure_csv(const DiscreteMeasure& m, std::FILE* f) {
  const int n = m.dim();
  for (int d = 0; d < n; ++d) std::fprintf(f, "x%d,", d);
  std::fprintf(f, "weight\n");
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (int d = 0; d < n; ++d) std::fprintf(f, "%.17g,", m.points[i][d]);
    std::fprintf(f, "%.17g\n", m.weights[i]);
  }
}

}  // namespace isotk
