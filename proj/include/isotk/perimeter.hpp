#pragma once

#include <cmath>
#include <vector>

#include "isotk/body.hpp"
#include "isotk/errors.hpp"
#include "isotk/quadrature.hpp"

namespace isotk {

// Sign convention for the boundary integrand: Outward evaluates h_K(nu) and
// matches the Minkowski content of |E + eps K|; Inward evaluates h_K(-nu).
// The two agree for origin-symmetric K.
enum class NormalSign { Outward, Inward };

namespace detail {

// Points quasi-uniformly covering the unit sphere S^{n-1}, n = 2 or 3.
inline std::vector<Vec> sphere_points(int n, int resolution) {
  std::vector<Vec> pts;
  if (n == 2) {
    pts.reserve(resolution);
    for (int i = 0; i < resolution; ++i) {
      const double t = 2.0 * M_PI * i / resolution;
      pts.push_back({std::cos(t), std::sin(t)});
    }
    return pts;
  }
  if (n == 3) {
    const int nu = resolution, nphi = 2 * resolution;
    for (int i = 0; i < nu; ++i) {
      const double u = -1.0 + (2.0 * i + 1.0) / nu;  // cos(theta) midpoints
      const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
      for (int j = 0; j < nphi; ++j) {
        const double phi = 2.0 * M_PI * j / nphi;
        pts.push_back({s * std::cos(phi), s * std::sin(phi), u});
      }
    }
    return pts;
  }
  throw InvalidInput("sphere_points: n <= 3 only");
}

}  // namespace detail

// p_K(E) = int_{dE} h_K(nu) dH^{n-1}. Exact facet sums for polytopal E,
// spherical quadrature when E is a ball.
inline double anisotropic_perimeter(const ConvexBody& e_body, const ConvexBody& k_body,
                                    NormalSign sign = NormalSign::Outward) {
  const int n = e_body.dim();
  if (k_body.dim() != n) throw InvalidInput("anisotropic_perimeter: dimension mismatch");
  const double sg = (sign == NormalSign::Outward) ? 1.0 : -1.0;

  if (e_body.type == BodyType::Ball) {
    const double r = e_body.radius;
    if (n == 2) {
      const int m = 8192;
      double s = 0.0;
      for (int i = 0; i < m; ++i) {
        const double t = 2.0 * M_PI * (i + 0.5) / m;
        s += support(k_body, {sg * std::cos(t), sg * std::sin(t)});
      }
      return s * (2.0 * M_PI / m) * r;
    }
    if (n == 3) {
      // Midpoint in cos(theta) x phi integrates the sphere measure exactly.
      const int mu = 256, mphi = 512;
      double s = 0.0;
      for (int i = 0; i < mu; ++i) {
        const double u = -1.0 + (2.0 * i + 1.0) / mu;
        const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
        for (int j = 0; j < mphi; ++j) {
          const double phi = 2.0 * M_PI * (j + 0.5) / mphi;
          s += support(k_body, {sg * su * std::cos(phi), sg * su * std::sin(phi), sg * u});
        }
      }
      return s * (2.0 / mu) * (2.0 * M_PI / mphi) * r * r;
    }
    throw InvalidInput("anisotropic_perimeter: ball boundary quadrature needs n <= 3");
  }

  double total = 0.0;
  for (const auto& f : facets(e_body)) total += f.area * support(k_body, scale(f.outer_normal, sg));
  return total;
}

namespace detail {

// |E + eps K| for one epsilon. Exact for box+box and ball+ball; otherwise the
// convex hull of pairwise vertex sums (balls replaced by inscribed polytopes).
inline double sum_body_volume(const ConvexBody& e_body, const ConvexBody& k_body, double eps) {
  const int n = e_body.dim();
  if (e_body.type == BodyType::Box && k_body.type == BodyType::Box) {
    Vec h = e_body.half_sides;
    for (int i = 0; i < n; ++i) h[i] += eps * k_body.half_sides[i];
    return volume(ConvexBody::box(h));
  }
  if (e_body.type == BodyType::Ball && k_body.type == BodyType::Ball)
    return volume(ConvexBody::ball(e_body.radius + eps * k_body.radius, n));
  if (n > 3)
    throw InvalidInput("minkowski_content: mixed variants need n <= 3");

  auto verts_of = [&](const ConvexBody& b) -> std::vector<Vec> {
    if (b.type == BodyType::Ball) {
      auto dirs = sphere_points(n, n == 2 ? 720 : 24);
      for (auto& d : dirs) d = scale(d, b.radius);
      return dirs;
    }
    return materialize_vertices(b);
  };
  const auto ev = verts_of(e_body);
  const auto kv = verts_of(k_body);
  std::vector<Vec> sums;
  sums.reserve(ev.size() * kv.size());
  for (const auto& p : ev)
    for (const auto& q : kv) sums.push_back(add(p, scale(q, eps)));
  // Hull volume; reuses the polytope volume path.
  return volume(ConvexBody::polytope(std::move(sums)));
}

}  // namespace detail

// Finite-difference estimates (|E + eps K| - |E|) / eps along the schedule.
inline std::vector<double> minkowski_estimates(const ConvexBody& e_body, const ConvexBody& k_body,
                                               const std::vector<double>& eps_schedule) {
  if (eps_schedule.empty()) throw InvalidInput("minkowski_content: empty schedule");
  for (std::size_t i = 0; i + 1 < eps_schedule.size(); ++i)
    if (!(eps_schedule[i] > eps_schedule[i + 1]))
      throw InvalidInput("minkowski_content: schedule must decrease");
  if (!(eps_schedule.back() > 0.0)) throw InvalidInput("minkowski_content: schedule must be positive");
  const double ve = volume(e_body);
  std::vector<double> out;
  out.reserve(eps_schedule.size());
  for (double eps : eps_schedule)
    out.push_back((detail::sum_body_volume(e_body, k_body, eps) - ve) / eps);
  return out;
}

inline std::vector<double> default_eps_schedule() {
  return {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
}

// Richardson extrapolation of the finite-difference perimeter to eps -> 0.
inline double minkowski_content(const ConvexBody& e_body, const ConvexBody& k_body,
                                std::vector<double> eps_schedule = {}) {
  if (eps_schedule.empty()) eps_schedule = default_eps_schedule();
  const auto est = minkowski_estimates(e_body, k_body, eps_schedule);
  if (est.size() == 1) return est[0];
  const double e1 = eps_schedule[est.size() - 2], e2 = eps_schedule[est.size() - 1];
  return (e1 * est.back() - e2 * est[est.size() - 2]) / (e1 - e2);
}

}  // namespace isotk
