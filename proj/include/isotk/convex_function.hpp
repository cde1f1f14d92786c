#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "isotk/body.hpp"
#include "isotk/errors.hpp"
#include "isotk/linalg.hpp"

namespace isotk {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class FnType { Indicatrix, Quadratic, PowerNorm, GridSampled };

// Nonnegative convex potential V on R^n, possibly +inf valued.
struct ConvexFunction {
  FnType type = FnType::Quadratic;
  int n = 0;

  std::shared_ptr<const ConvexBody> body;  // Indicatrix
  double scale = 1.0;                      // Quadratic / PowerNorm
  double exponent = 2.0;                   // PowerNorm

  // GridSampled: values on a regular lattice, +inf outside its box.
  Vec grid_origin;
  Vec grid_spacing;
  std::vector<int> grid_shape;
  std::vector<double> grid_values;

  static ConvexFunction indicatrix(ConvexBody k) {
    ConvexFunction v;
    v.type = FnType::Indicatrix;
    v.n = k.dim();
    v.body = std::make_shared<const ConvexBody>(std::move(k));
    return v;
  }

  static ConvexFunction quadratic(double s, int dim) {
    if (!(s > 0.0)) throw InvalidInput("quadratic: scale must be positive");
    if (dim < 2) throw InvalidInput("quadratic: dimension must be >= 2");
    ConvexFunction v;
    v.type = FnType::Quadratic;
    v.scale = s;
    v.n = dim;
    return v;
  }

  static ConvexFunction power_norm(double p, double s, int dim) {
    if (!(p > 1.0)) throw InvalidInput("power_norm: exponent must exceed 1");
    if (!(s > 0.0)) throw InvalidInput("power_norm: scale must be positive");
    if (dim < 2) throw InvalidInput("power_norm: dimension must be >= 2");
    ConvexFunction v;
    v.type = FnType::PowerNorm;
    v.exponent = p;
    v.scale = s;
    v.n = dim;
    return v;
  }

  static ConvexFunction grid_sampled(Vec origin, Vec spacing, std::vector<int> shape,
                                     std::vector<double> values) {
    const int dim = static_cast<int>(shape.size());
    if (dim < 2) throw InvalidInput("grid_sampled: dimension must be >= 2");
    if (origin.size() != shape.size() || spacing.size() != shape.size())
      throw InvalidInput("grid_sampled: inconsistent lattice spec");
    std::size_t count = 1;
    for (int s : shape) {
      if (s < 3) throw InvalidInput("grid_sampled: each axis needs >= 3 samples");
      count *= static_cast<std::size_t>(s);
    }
    if (values.size() != count) throw InvalidInput("grid_sampled: value count mismatch");
    ConvexFunction v;
    v.type = FnType::GridSampled;
    v.n = dim;
    v.grid_origin = std::move(origin);
    v.grid_spacing = std::move(spacing);
    v.grid_shape = std::move(shape);
    v.grid_values = std::move(values);
    v.check_lattice();
    return v;
  }

  bool radial() const { return type == FnType::Quadratic || type == FnType::PowerNorm; }
  bool finite_everywhere() const { return type == FnType::Quadratic || type == FnType::PowerNorm; }

  // Value of a radial V at radius r.
  double radial_value(double r) const {
    switch (type) {
      case FnType::Quadratic: return scale * r * r;
      case FnType::PowerNorm: return scale * std::pow(r, exponent);
      default: throw InvalidInput("radial_value: potential is not radial");
    }
  }

  // Radius where a radial V reaches the value v.
  double radial_inverse(double v) const {
    switch (type) {
      case FnType::Quadratic: return std::sqrt(v / scale);
      case FnType::PowerNorm: return std::pow(v / scale, 1.0 / exponent);
      default: throw InvalidInput("radial_inverse: potential is not radial");
    }
  }

 private:
  std::size_t grid_index(const std::vector<int>& id) const {
    std::size_t k = 0;
    for (int d = 0; d < n; ++d) k = k * grid_shape[d] + id[d];
    return k;
  }

  void check_lattice() const {
    for (double v : grid_values)
      if (!(v >= 0.0)) throw InvalidInput("grid_sampled: V must be nonnegative");
    // Midpoint convexity along each lattice axis.
    std::vector<int> id(n, 0);
    for (;;) {
      for (int d = 0; d < n; ++d) {
        if (id[d] + 2 >= grid_shape[d]) continue;
        auto lo = id, mid = id, hi = id;
        mid[d] += 1;
        hi[d] += 2;
        const double a = grid_values[grid_index(lo)];
        const double m = grid_values[grid_index(mid)];
        const double b = grid_values[grid_index(hi)];
        if (m > 0.5 * (a + b) + 1e-9 * (1.0 + std::fabs(a) + std::fabs(b)))
          throw InvalidInput("grid_sampled: midpoint convexity violated on the lattice");
      }
      int d = 0;
      while (d < n && ++id[d] == grid_shape[d]) id[d++] = 0;
      if (d == n) break;
    }
  }

  friend double eval_v(const ConvexFunction&, const Vec&);
};

// V(x), possibly +inf.
inline double eval_v(const ConvexFunction& v, const Vec& x) {
  if (static_cast<int>(x.size()) != v.n) throw InvalidInput("eval_v: dimension mismatch");
  switch (v.type) {
    case FnType::Indicatrix:
      return contains(*v.body, x) ? 0.0 : kInf;
    case FnType::Quadratic:
      return v.scale * dot(x, x);
    case FnType::PowerNorm:
      return v.scale * std::pow(norm2(x), v.exponent);
    case FnType::GridSampled: {
      // Multilinear interpolation on the lattice, +inf outside its box.
      std::vector<int> base(v.n);
      Vec frac(v.n);
      for (int d = 0; d < v.n; ++d) {
        const double t = (x[d] - v.grid_origin[d]) / v.grid_spacing[d];
        if (t < 0.0 || t > v.grid_shape[d] - 1) return kInf;
        int b = static_cast<int>(std::floor(t));
        if (b >= v.grid_shape[d] - 1) b = v.grid_shape[d] - 2;
        base[d] = b;
        frac[d] = t - b;
      }
      double acc = 0.0;
      for (int corner = 0; corner < (1 << v.n); ++corner) {
        double w = 1.0;
        std::vector<int> id(v.n);
        for (int d = 0; d < v.n; ++d) {
          const bool up = corner >> d & 1;
          w *= up ? frac[d] : 1.0 - frac[d];
          id[d] = base[d] + (up ? 1 : 0);
        }
        acc += w * v.grid_values[v.grid_index(id)];
      }
      return acc;
    }
  }
  return 0.0;
}

// Gradient of V where it is finite. Analytic for the smooth variants,
// central differences on the lattice interpolant for GridSampled.
inline Vec grad_v(const ConvexFunction& v, const Vec& x) {
  switch (v.type) {
    case FnType::Indicatrix:
      return Vec(v.n, 0.0);  // V == 0 on the interior of K
    case FnType::Quadratic:
      return scale(x, 2.0 * v.scale);
    case FnType::PowerNorm: {
      const double r = norm2(x);
      if (r == 0.0) return Vec(v.n, 0.0);
      return scale(x, v.scale * v.exponent * std::pow(r, v.exponent - 2.0));
    }
    case FnType::GridSampled: {
      Vec g(v.n);
      for (int d = 0; d < v.n; ++d) {
        const double h = 1e-5 * (1.0 + std::fabs(x[d]));
        Vec xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        const double fp = eval_v(v, xp), fm = eval_v(v, xm);
        if (!std::isfinite(fp) || !std::isfinite(fm))
          throw NumericError("grad_v: lattice boundary reached");
        g[d] = (fp - fm) / (2.0 * h);
      }
      return g;
    }
  }
  return Vec(v.n, 0.0);
}

struct ConjugateValue {
  double value = 0.0;
  bool boundary_attained = false;  // GridSampled: sup hit the lattice edge
};

// Legendre transform V*(y) = sup_x x.y - V(x).
inline ConjugateValue conjugate_checked(const ConvexFunction& v, const Vec& y) {
  if (static_cast<int>(y.size()) != v.n) throw InvalidInput("conjugate: dimension mismatch");
  ConjugateValue out;
  switch (v.type) {
    case FnType::Indicatrix:
      out.value = support(*v.body, y);
      return out;
    case FnType::Quadratic:
      out.value = dot(y, y) / (4.0 * v.scale);
      return out;
    case FnType::PowerNorm: {
      // sup_r r|y| - s r^p, attained at r = (|y|/(sp))^{1/(p-1)}.
      const double p = v.exponent, s = v.scale, ny = norm2(y);
      if (ny == 0.0) return out;
      out.value = (p - 1.0) / p * ny * std::pow(ny / (s * p), 1.0 / (p - 1.0));
      return out;
    }
    case FnType::GridSampled: {
      double best = -kInf;
      bool on_edge = false;
      std::vector<int> id(v.n, 0);
      Vec x(v.n);
      for (;;) {
        std::size_t k = 0;
        bool edge = false;
        for (int d = 0; d < v.n; ++d) {
          x[d] = v.grid_origin[d] + id[d] * v.grid_spacing[d];
          k = k * v.grid_shape[d] + id[d];
          edge |= (id[d] == 0 || id[d] == v.grid_shape[d] - 1);
        }
        const double cand = dot(x, y) - v.grid_values[k];
        if (cand > best) {
          best = cand;
          on_edge = edge;
        }
        int d = 0;
        while (d < v.n && ++id[d] == v.grid_shape[d]) id[d++] = 0;
        if (d == v.n) break;
      }
      out.value = best;
      out.boundary_attained = on_edge;
      return out;
    }
  }
  return out;
}

inline double conjugate(const ConvexFunction& v, const Vec& y) {
  return conjugate_checked(v, y).value;
}

// Fenchel-Young gap V(x) + V*(y) - x.y, zero when y = grad V(x).
inline double young_gap(const ConvexFunction& v, const Vec& x, const Vec& y) {
  const double vx = eval_v(v, x);
  if (!std::isfinite(vx)) throw InvalidInput("young_gap: V(x) must be finite");
  return vx + conjugate(v, y) - dot(x, y);
}

}  // namespace isotk
