#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "isotk/errors.hpp"
#include "isotk/hull.hpp"
#include "isotk/linalg.hpp"

namespace isotk {

enum class BodyType { Box, Ball, Polytope, Affine };

// A convex body with nonempty interior in R^n, n >= 2. Boxes and balls are
// centered at the origin; translations and general linear images are carried
// by the Affine variant. Value semantics throughout.
struct ConvexBody {
  BodyType type = BodyType::Box;

  Vec half_sides;             // Box
  double radius = 0.0;        // Ball
  int ball_dim = 0;           // Ball
  std::vector<Vec> vertices;  // Polytope
  Mat matrix;                 // Affine
  Vec shift;                  // Affine
  std::shared_ptr<const ConvexBody> base;  // Affine

  static ConvexBody box(Vec half) {
    if (half.size() < 2) throw InvalidInput("box: dimension must be >= 2");
    for (double h : half)
      if (!(h > 0.0)) throw InvalidInput("box: half sides must be positive");
    ConvexBody b;
    b.type = BodyType::Box;
    b.half_sides = std::move(half);
    return b;
  }

  static ConvexBody ball(double r, int n) {
    if (!(r > 0.0)) throw InvalidInput("ball: radius must be positive");
    if (n < 2) throw InvalidInput("ball: dimension must be >= 2");
    ConvexBody b;
    b.type = BodyType::Ball;
    b.radius = r;
    b.ball_dim = n;
    return b;
  }

  static ConvexBody polytope(std::vector<Vec> verts) {
    if (verts.empty()) throw InvalidInput("polytope: empty vertex list");
    const std::size_t n = verts[0].size();
    if (n < 2) throw InvalidInput("polytope: dimension must be >= 2");
    for (const auto& v : verts)
      if (v.size() != n) throw InvalidInput("polytope: inconsistent vertex dimensions");
    if (verts.size() < n + 1) throw InvalidInput("polytope: too few vertices to span R^n");
    ConvexBody b;
    b.type = BodyType::Polytope;
    b.vertices = std::move(verts);
    return b;
  }

  static ConvexBody affine(Mat a, Vec b_shift, ConvexBody base_body) {
    const int n = base_body.dim();
    if (a.n != n || static_cast<int>(b_shift.size()) != n)
      throw InvalidInput("affine: dimension mismatch");
    if (determinant(a) == 0.0) throw InvalidInput("affine: singular linear map");
    ConvexBody b;
    b.type = BodyType::Affine;
    b.matrix = std::move(a);
    b.shift = std::move(b_shift);
    b.base = std::make_shared<const ConvexBody>(std::move(base_body));
    return b;
  }

  int dim() const {
    switch (type) {
      case BodyType::Box: return static_cast<int>(half_sides.size());
      case BodyType::Ball: return ball_dim;
      case BodyType::Polytope: return static_cast<int>(vertices[0].size());
      case BodyType::Affine: return base->dim();
    }
    return 0;
  }
};

// A flat boundary piece: (n-1)-area, unit outer normal, and a point on it.
struct Facet {
  double area = 0.0;
  Vec outer_normal;
  Vec representative_point;
};

// h_E(z) = sup_{y in E} y.z
inline double support(const ConvexBody& body, const Vec& z) {
  if (static_cast<int>(z.size()) != body.dim())
    throw InvalidInput("support: direction dimension mismatch");
  switch (body.type) {
    case BodyType::Box: {
      double s = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) s += body.half_sides[i] * std::fabs(z[i]);
      return s;
    }
    case BodyType::Ball:
      return body.radius * norm2(z);
    case BodyType::Polytope: {
      double best = dot(body.vertices[0], z);
      for (std::size_t i = 1; i < body.vertices.size(); ++i)
        best = std::max(best, dot(body.vertices[i], z));
      return best;
    }
    case BodyType::Affine:
      // h_{AE+b}(z) = h_E(A^T z) + b.z
      return support(*body.base, body.matrix.apply_transpose(z)) + dot(body.shift, z);
  }
  return 0.0;
}

// Axis-aligned bounding box [lo, hi], computed from the support function.
inline std::pair<Vec, Vec> bounding_box(const ConvexBody& body) {
  const int n = body.dim();
  Vec lo(n), hi(n), e(n, 0.0);
  for (int i = 0; i < n; ++i) {
    e.assign(n, 0.0);
    e[i] = 1.0;
    hi[i] = support(body, e);
    e[i] = -1.0;
    lo[i] = -support(body, e);
  }
  return {lo, hi};
}

namespace detail {

// Vertices of the box {|x_i| <= h_i}.
inline std::vector<Vec> box_corners(const Vec& half) {
  const int n = static_cast<int>(half.size());
  std::vector<Vec> out;
  out.reserve(std::size_t(1) << n);
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = (mask >> i & 1) ? half[i] : -half[i];
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace detail

// Vertex representation of polytopal bodies (boxes, polytopes, affine images
// of those). Balls are not polytopal and are rejected.
inline std::vector<Vec> materialize_vertices(const ConvexBody& body) {
  switch (body.type) {
    case BodyType::Box: return detail::box_corners(body.half_sides);
    case BodyType::Polytope: return body.vertices;
    case BodyType::Ball:
      throw InvalidInput("materialize_vertices: ball is not polytopal");
    case BodyType::Affine: {
      std::vector<Vec> vs = materialize_vertices(*body.base);
      for (auto& v : vs) v = add(body.matrix.apply(v), body.shift);
      return vs;
    }
  }
  return {};
}

inline std::vector<Facet> facets(const ConvexBody& body);

inline double volume(const ConvexBody& body) {
  const int n = body.dim();
  switch (body.type) {
    case BodyType::Box: {
      double v = 1.0;
      for (double h : body.half_sides) v *= 2.0 * h;
      return v;
    }
    case BodyType::Ball:
      return unit_ball_volume(n) * std::pow(body.radius, n);
    case BodyType::Polytope: {
      if (n == 2) {
        const auto h = hull_2d(body.vertices);
        double a2 = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) {
          const Vec& p = body.vertices[h[i]];
          const Vec& q = body.vertices[h[(i + 1) % h.size()]];
          a2 += p[0] * q[1] - q[0] * p[1];
        }
        const double a = 0.5 * a2;
        if (!(a > 0.0)) throw InvalidInput("volume: degenerate polytope");
        return a;
      }
      if (n == 3) {
        const auto fs = hull_3d(body.vertices);
        double v6 = 0.0;
        for (const auto& f : fs) {
          const Vec& a = body.vertices[f.v[0]];
          const Vec& b = body.vertices[f.v[1]];
          const Vec& c = body.vertices[f.v[2]];
          v6 += dot(a, detail::cross3(b, c));
        }
        const double v = v6 / 6.0;
        if (!(v > 0.0)) throw InvalidInput("volume: degenerate polytope");
        return v;
      }
      throw InvalidInput("volume: polytopes supported for n <= 3 only");
    }
    case BodyType::Affine:
      return std::fabs(determinant(body.matrix)) * volume(*body.base);
  }
  return 0.0;
}

inline Vec centroid(const ConvexBody& body) {
  const int n = body.dim();
  switch (body.type) {
    case BodyType::Box:
    case BodyType::Ball:
      return Vec(n, 0.0);
    case BodyType::Polytope: {
      if (n == 2) {
        const auto h = hull_2d(body.vertices);
        double a2 = 0.0;
        Vec c(2, 0.0);
        for (std::size_t i = 0; i < h.size(); ++i) {
          const Vec& p = body.vertices[h[i]];
          const Vec& q = body.vertices[h[(i + 1) % h.size()]];
          const double w = p[0] * q[1] - q[0] * p[1];
          a2 += w;
          c[0] += w * (p[0] + q[0]);
          c[1] += w * (p[1] + q[1]);
        }
        if (a2 == 0.0) throw InvalidInput("centroid: degenerate polytope");
        return {c[0] / (3.0 * a2), c[1] / (3.0 * a2)};
      }
      if (n == 3) {
        // Signed tetrahedra against the origin.
        const auto fs = hull_3d(body.vertices);
        double vol6 = 0.0;
        Vec c(3, 0.0);
        for (const auto& f : fs) {
          const Vec& a = body.vertices[f.v[0]];
          const Vec& b = body.vertices[f.v[1]];
          const Vec& d = body.vertices[f.v[2]];
          const double w = dot(a, detail::cross3(b, d));
          vol6 += w;
          for (int i = 0; i < 3; ++i) c[i] += w * (a[i] + b[i] + d[i]) / 4.0;
        }
        if (vol6 == 0.0) throw InvalidInput("centroid: degenerate polytope");
        return scale(c, 1.0 / vol6);
      }
      throw InvalidInput("centroid: polytopes supported for n <= 3 only");
    }
    case BodyType::Affine:
      return add(body.matrix.apply(centroid(*body.base)), body.shift);
  }
  return Vec(n, 0.0);
}

// Image A*body + b. Polytopes map exactly; pure dilations keep the variant;
// everything else wraps in an Affine node (composed, so chains stay flat).
inline ConvexBody affine_map(const ConvexBody& body, const Mat& a, const Vec& b) {
  const int n = body.dim();
  if (a.n != n || static_cast<int>(b.size()) != n)
    throw InvalidInput("affine_map: dimension mismatch");
  if (determinant(a) == 0.0) throw InvalidInput("affine_map: singular matrix");

  bool is_dilation = true;
  const double s = a(0, 0);
  for (int i = 0; i < n && is_dilation; ++i)
    for (int j = 0; j < n; ++j)
      if (a(i, j) != (i == j ? s : 0.0)) {
        is_dilation = false;
        break;
      }
  const bool zero_shift = std::all_of(b.begin(), b.end(), [](double x) { return x == 0.0; });

  if (is_dilation && s == 1.0 && zero_shift) return body;

  switch (body.type) {
    case BodyType::Box:
      if (is_dilation && s > 0.0 && zero_shift) {
        ConvexBody out = body;
        for (auto& h : out.half_sides) h *= s;
        return out;
      }
      break;
    case BodyType::Ball:
      if (is_dilation && s > 0.0 && zero_shift) return ConvexBody::ball(s * body.radius, n);
      break;
    case BodyType::Polytope: {
      ConvexBody out = body;
      for (auto& v : out.vertices) v = add(a.apply(v), b);
      return out;
    }
    case BodyType::Affine: {
      Mat comp(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = 0.0;
          for (int k = 0; k < n; ++k) v += a(i, k) * body.matrix(k, j);
          comp(i, j) = v;
        }
      return ConvexBody::affine(comp, add(a.apply(body.shift), b), *body.base);
    }
  }
  return ConvexBody::affine(a, b, body);
}

// Homothety to volume one: E / |E|^{1/n}.
inline ConvexBody normalize(const ConvexBody& body) {
  const int n = body.dim();
  const double t = std::pow(volume(body), -1.0 / n);
  Mat a = Mat::identity(n);
  for (int i = 0; i < n; ++i) a(i, i) = t;
  return affine_map(body, a, Vec(n, 0.0));
}

inline std::vector<Facet> facets(const ConvexBody& body) {
  const int n = body.dim();
  switch (body.type) {
    case BodyType::Box: {
      std::vector<Facet> out;
      out.reserve(2 * n);
      double full = 1.0;
      for (double h : body.half_sides) full *= 2.0 * h;
      for (int i = 0; i < n; ++i) {
        const double area = full / (2.0 * body.half_sides[i]);
        for (double sign : {1.0, -1.0}) {
          Facet f;
          f.area = area;
          f.outer_normal = Vec(n, 0.0);
          f.outer_normal[i] = sign;
          f.representative_point = Vec(n, 0.0);
          f.representative_point[i] = sign * body.half_sides[i];
          out.push_back(std::move(f));
        }
      }
      return out;
    }
    case BodyType::Ball:
      throw InvalidInput(
          "facets: ball has no flat facets; use the spherical quadrature path "
          "(anisotropic_perimeter handles balls directly)");
    case BodyType::Polytope: {
      if (n == 2) {
        const auto h = hull_2d(body.vertices);
        std::vector<Facet> out;
        out.reserve(h.size());
        for (std::size_t i = 0; i < h.size(); ++i) {
          const Vec& p = body.vertices[h[i]];
          const Vec& q = body.vertices[h[(i + 1) % h.size()]];
          const Vec d = sub(q, p);
          const double len = norm2(d);
          Facet f;
          f.area = len;
          f.outer_normal = {d[1] / len, -d[0] / len};
          f.representative_point = scale(add(p, q), 0.5);
          out.push_back(std::move(f));
        }
        return out;
      }
      if (n == 3) {
        const auto fs = hull_3d(body.vertices);
        std::vector<Facet> out;
        out.reserve(fs.size());
        for (const auto& tf : fs) {
          const Vec& a = body.vertices[tf.v[0]];
          const Vec& b = body.vertices[tf.v[1]];
          const Vec& c = body.vertices[tf.v[2]];
          Facet f;
          f.area = 0.5 * norm2(detail::cross3(sub(b, a), sub(c, a)));
          f.outer_normal = tf.normal;
          f.representative_point = scale(add(add(a, b), c), 1.0 / 3.0);
          out.push_back(std::move(f));
        }
        return out;
      }
      throw InvalidInput("facets: polytopes supported for n <= 3 only");
    }
    case BodyType::Affine: {
      if (n > 3)
        throw InvalidInput("facets: affine images support facets for n <= 3 only");
      return facets(ConvexBody::polytope(materialize_vertices(body)));
    }
  }
  return {};
}

// Membership predicate with precomputed face data (cheap to call many times).
inline std::function<bool(const Vec&)> membership(const ConvexBody& body, double tol = 1e-12) {
  switch (body.type) {
    case BodyType::Box: {
      Vec h = body.half_sides;
      return [h, tol](const Vec& x) {
        for (std::size_t i = 0; i < h.size(); ++i)
          if (std::fabs(x[i]) > h[i] + tol) return false;
        return true;
      };
    }
    case BodyType::Ball: {
      const double r = body.radius;
      return [r, tol](const Vec& x) { return norm2(x) <= r + tol; };
    }
    case BodyType::Polytope: {
      auto fs = facets(body);
      return [fs, tol](const Vec& x) {
        for (const auto& f : fs)
          if (dot(f.outer_normal, x) - dot(f.outer_normal, f.representative_point) > tol)
            return false;
        return true;
      };
    }
    case BodyType::Affine: {
      const Mat inv = inverse(body.matrix);
      const Vec sh = body.shift;
      auto inner = membership(*body.base, tol);
      return [inv, sh, inner](const Vec& x) { return inner(inv.apply(sub(x, sh))); };
    }
  }
  return [](const Vec&) { return false; };
}

inline bool contains(const ConvexBody& body, const Vec& x, double tol = 1e-12) {
  return membership(body, tol)(x);
}

}  // namespace isotk
