#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "isotk/errors.hpp"
#include "isotk/linalg.hpp"

namespace isotk {

// Convex hull of a planar point set, counter-clockwise vertex indices.
// Collinear points on the boundary are dropped.
inline std::vector<int> hull_2d(const std::vector<Vec>& pts) {
  const int m = static_cast<int>(pts.size());
  if (m < 3) throw InvalidInput("hull_2d: need at least 3 points");
  std::vector<int> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
    return pts[a][1] < pts[b][1];
  });
  auto cross = [&](int o, int a, int b) {
    return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) -
           (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]);
  };
  std::vector<int> h(2 * m);
  int k = 0;
  for (int ii = 0; ii < m; ++ii) {
    const int i = idx[ii];
    while (k >= 2 && cross(h[k - 2], h[k - 1], i) <= 0) --k;
    h[k++] = i;
  }
  const int lower = k + 1;
  for (int ii = m - 2; ii >= 0; --ii) {
    const int i = idx[ii];
    while (k >= lower && cross(h[k - 2], h[k - 1], i) <= 0) --k;
    h[k++] = i;
  }
  h.resize(k - 1);
  if (static_cast<int>(h.size()) < 3)
    throw InvalidInput("hull_2d: points are collinear (degenerate polytope)");
  return h;
}

struct HullFace {
  std::array<int, 3> v;  // vertex indices, outward orientation
  Vec normal;            // unit outward normal
  double offset = 0.0;   // plane: normal . x = offset
};

namespace detail {

inline Vec cross3(const Vec& a, const Vec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline HullFace make_face(const std::vector<Vec>& pts, int a, int b, int c, const Vec& inside) {
  HullFace f;
  f.v = {a, b, c};
  Vec n = cross3(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
  const double len = norm2(n);
  if (len > 0.0) n = scale(n, 1.0 / len);
  if (dot(n, sub(inside, pts[a])) > 0.0) {
    std::swap(f.v[1], f.v[2]);
    n = scale(n, -1.0);
  }
  f.normal = n;
  f.offset = dot(n, pts[a]);
  return f;
}

}  // namespace detail

// Incremental convex hull in R^3. Returns outward-oriented triangles; coplanar
// polygonal faces come out triangulated, which is harmless for volumes,
// centroids and facet sums.
inline std::vector<HullFace> hull_3d(const std::vector<Vec>& pts) {
  const int m = static_cast<int>(pts.size());
  if (m < 4) throw InvalidInput("hull_3d: need at least 4 points");

  double span = 0.0;
  for (const auto& p : pts)
    for (double c : p) span = std::max(span, std::fabs(c));
  const double eps = 1e-10 * std::max(1.0, span);

  // Initial simplex: spread-out quadruple.
  int i0 = 0;
  for (int i = 1; i < m; ++i)
    if (pts[i] < pts[i0]) i0 = i;
  int i1 = -1;
  double best = eps;
  for (int i = 0; i < m; ++i) {
    const double d = dist(pts[i], pts[i0]);
    if (d > best) {
      best = d;
      i1 = i;
    }
  }
  if (i1 < 0) throw InvalidInput("hull_3d: degenerate point set (single point)");
  Vec e1 = sub(pts[i1], pts[i0]);
  int i2 = -1;
  best = eps;
  for (int i = 0; i < m; ++i) {
    Vec d = sub(pts[i], pts[i0]);
    Vec c = detail::cross3(e1, d);
    const double a = norm2(c) / norm2(e1);
    if (a > best) {
      best = a;
      i2 = i;
    }
  }
  if (i2 < 0) throw InvalidInput("hull_3d: points are collinear (degenerate polytope)");
  Vec n0 = detail::cross3(e1, sub(pts[i2], pts[i0]));
  n0 = scale(n0, 1.0 / norm2(n0));
  int i3 = -1;
  best = eps;
  for (int i = 0; i < m; ++i) {
    const double d = std::fabs(dot(n0, sub(pts[i], pts[i0])));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (i3 < 0) throw InvalidInput("hull_3d: points are coplanar (degenerate polytope)");

  Vec inside(3, 0.0);
  for (int i : {i0, i1, i2, i3}) inside = add(inside, scale(pts[i], 0.25));

  std::vector<HullFace> faces;
  faces.push_back(detail::make_face(pts, i0, i1, i2, inside));
  faces.push_back(detail::make_face(pts, i0, i1, i3, inside));
  faces.push_back(detail::make_face(pts, i0, i2, i3, inside));
  faces.push_back(detail::make_face(pts, i1, i2, i3, inside));

  for (int p = 0; p < m; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    // Faces visible from pts[p].
    std::vector<char> vis(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (dot(faces[f].normal, pts[p]) - faces[f].offset > eps) {
        vis[f] = 1;
        any = true;
      }
    }
    if (!any) continue;  // inside or on the current hull

    // Horizon: directed edges of visible faces whose reverse edge is not visible.
    std::vector<std::array<int, 2>> edges;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!vis[f]) continue;
      const auto& t = faces[f].v;
      edges.push_back({t[0], t[1]});
      edges.push_back({t[1], t[2]});
      edges.push_back({t[2], t[0]});
    }
    std::vector<std::array<int, 2>> horizon;
    for (const auto& e : edges) {
      bool matched = false;
      for (const auto& r : edges) {
        if (r[0] == e[1] && r[1] == e[0]) {
          matched = true;
          break;
        }
      }
      if (!matched) horizon.push_back(e);
    }

    std::vector<HullFace> next;
    next.reserve(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (!vis[f]) next.push_back(faces[f]);
    for (const auto& e : horizon) next.push_back(detail::make_face(pts, e[0], e[1], p, inside));
    faces.swap(next);
  }
  return faces;
}

}  // namespace isotk
