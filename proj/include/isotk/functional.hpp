#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "isotk/body.hpp"
#include "isotk/convex_function.hpp"
#include "isotk/errors.hpp"
#include "isotk/quadrature.hpp"
#include "isotk/scalar_field.hpp"

namespace isotk {

// Density values below kDensityFloor * peak are treated as outside the
// effective support of mu_V when a tail refuses to converge.
inline constexpr double kDensityFloor = 1e-14;

inline double lebesgue_conjugate(int n) { return static_cast<double>(n) / (n - 1.0); }

// Surface measure of the unit sphere S^{n-1}.
inline double sphere_area(int n) { return n * unit_ball_volume(n); }

// Radius beyond which the mu_V density falls under kDensityFloor.
inline double density_cutoff_radius(const ConvexFunction& v, int n) {
  const double level = (n - 1.0) * (std::pow(10.0, 14.0 / n) - 1.0);
  switch (v.type) {
    case FnType::Quadratic:
    case FnType::PowerNorm:
      return v.radial_inverse(level);
    case FnType::Indicatrix: {
      const auto bb = bounding_box(*v.body);
      double r = 0.0;
      for (std::size_t d = 0; d < bb.first.size(); ++d)
        r = std::max(r, std::max(std::fabs(bb.first[d]), std::fabs(bb.second[d])));
      return r;
    }
    case FnType::GridSampled: {
      double r = 0.0;
      for (int d = 0; d < v.n; ++d) {
        const double hi = v.grid_origin[d] + (v.grid_shape[d] - 1) * v.grid_spacing[d];
        r = std::max(r, std::max(std::fabs(v.grid_origin[d]), std::fabs(hi)));
      }
      return r;
    }
  }
  return 1.0;
}

// (1 + V(x)/(n-1))^{-n}, the unnormalized mu_V density. Returns 0 where V is
// +inf or the density underflows.
inline double mu_v_unnormalized(const ConvexFunction& v, int n, const Vec& x) {
  const double val = eval_v(v, x);
  if (!std::isfinite(val)) return 0.0;
  return std::pow(1.0 + val / (n - 1.0), -static_cast<double>(n));
}

// Z_V = int (1 + V/(n-1))^{-n} dx. Exact for indicatrices, radial quadrature
// for radial V, box cubature on the lattice for sampled V.
inline Integral partition_z(const ConvexFunction& v, int n, const QuadratureSpec& quad = {}) {
  if (v.n != n) throw InvalidInput("partition_z: dimension mismatch between V and n");
  Integral out;
  switch (v.type) {
    case FnType::Indicatrix:
      out.value = volume(*v.body);
      out.abs_error = 0.0;
      out.converged = true;
      return out;
    case FnType::Quadratic:
    case FnType::PowerNorm: {
      auto g = [&](double r) {
        return std::pow(1.0 + v.radial_value(r) / (n - 1.0), -static_cast<double>(n));
      };
      Integral radial = integrate_radial(g, n, quad.rel_tol, 1.0, density_cutoff_radius(v, n));
      if (!radial.converged)
        throw NumericError("partition_z: Z_V infinite or quadrature domain too small");
      radial.value *= sphere_area(n);
      radial.abs_error *= sphere_area(n);
      return radial;
    }
    case FnType::GridSampled: {
      std::vector<std::pair<double, double>> box(n);
      for (int d = 0; d < n; ++d)
        box[d] = {v.grid_origin[d], v.grid_origin[d] + (v.grid_shape[d] - 1) * v.grid_spacing[d]};
      auto f = [&](const Vec& x) { return mu_v_unnormalized(v, n, x); };
      Integral z = integrate_box(f, box, quad.rel_tol, quad.max_cells);
      if (!(z.value > 0.0)) throw NumericError("partition_z: vanishing Z_V on the lattice");
      return z;
    }
  }
  return out;
}

// mu_V density at a point given a precomputed Z.
inline double mu_v_density(const ConvexFunction& v, int n, double z, const Vec& x) {
  return mu_v_unnormalized(v, n, x) / z;
}

// Z_V together with the first V-moment of mu_V. The moment integral can be
// log-divergent (quadratic V at n = 2 sits exactly on the boundary); in that
// case the value is truncated at the effective-support cutoff and flagged.
struct MuMoments {
  int n = 0;
  double z = 0.0;
  double z_abs_error = 0.0;
  double v_integral = 0.0;  // int V (1+V/(n-1))^{-n} dx, unnormalized
  double v_abs_error = 0.0;
  bool v_converged = true;
  double v_cutoff = 0.0;

  double v_mu_moment() const { return v_integral / z; }            // int V dmu_V
  double bracket_moment() const {                                  // int (1+V/(n-1)) dmu_V
    return 1.0 + v_integral / ((n - 1.0) * z);
  }
};

inline MuMoments mu_v_moments(const ConvexFunction& v, int n, const QuadratureSpec& quad = {}) {
  MuMoments m;
  m.n = n;
  const Integral z = partition_z(v, n, quad);
  m.z = z.value;
  m.z_abs_error = z.abs_error;
  switch (v.type) {
    case FnType::Indicatrix:
      // V = 0 mu_V almost everywhere.
      m.v_integral = 0.0;
      m.v_converged = true;
      return m;
    case FnType::Quadratic:
    case FnType::PowerNorm: {
      auto g = [&](double r) {
        const double val = v.radial_value(r);
        const double dens = std::pow(1.0 + val / (n - 1.0), -static_cast<double>(n));
        if (!(dens > 0.0)) return 0.0;
        return val * dens;
      };
      Integral mom = integrate_radial(g, n, quad.rel_tol, 1.0, density_cutoff_radius(v, n));
      m.v_integral = mom.value * sphere_area(n);
      m.v_abs_error = mom.abs_error * sphere_area(n);
      m.v_converged = mom.converged;
      m.v_cutoff = mom.cutoff_radius;
      return m;
    }
    case FnType::GridSampled: {
      std::vector<std::pair<double, double>> box(n);
      for (int d = 0; d < n; ++d)
        box[d] = {v.grid_origin[d], v.grid_origin[d] + (v.grid_shape[d] - 1) * v.grid_spacing[d]};
      auto f = [&](const Vec& x) {
        const double val = eval_v(v, x);
        if (!std::isfinite(val)) return 0.0;
        const double dens = std::pow(1.0 + val / (n - 1.0), -static_cast<double>(n));
        return val * dens;
      };
      Integral mom = integrate_box(f, box, quad.rel_tol, quad.max_cells);
      m.v_integral = mom.value;
      m.v_abs_error = mom.abs_error;
      m.v_converged = mom.converged;
      return m;
    }
  }
  return m;
}

// The Theorem 1 equality profile f(x) = (1 + V(x-a)/(n-1))^{-(n-1)}.
inline ScalarField extremal_profile(const ConvexFunction& v, int n, const Vec& a) {
  if (v.type == FnType::Indicatrix)
    throw InvalidInput(
        "extremal_profile: indicatrix potentials give the non-Lipschitz indicator profile");
  if (static_cast<int>(a.size()) != n) throw InvalidInput("extremal_profile: bad shift");
  ScalarField f;
  f.n = n;
  ConvexFunction vv = v;
  f.value = [vv, n, a](const Vec& x) {
    const double val = eval_v(vv, sub(x, a));
    if (!std::isfinite(val)) return 0.0;
    return std::pow(1.0 + val / (n - 1.0), -(n - 1.0));
  };
  f.gradient = [vv, n, a](const Vec& x) {
    const Vec y = sub(x, a);
    const double val = eval_v(vv, y);
    if (!std::isfinite(val)) return Vec(x.size(), 0.0);
    const double w = -std::pow(1.0 + val / (n - 1.0), -static_cast<double>(n));
    return scale(grad_v(vv, y), w);
  };
  const double rc = density_cutoff_radius(v, n);
  f.domain.resize(n);
  for (int d = 0; d < n; ++d) f.domain[d] = {a[d] - rc, a[d] + rc};
  if (v.radial()) {
    f.radial = true;
    f.center = a;
    f.radial_extent = rc;
  }
  return f;
}

namespace detail {

// `integrand_rotation_invariant` must only be set when fn(x) depends on x
// solely through |x - f.center|; the 1-D path is taken in that case.
inline Integral integrate_field(const ScalarField& f, const std::function<double(const Vec&)>& fn,
                                int n, const QuadratureSpec& quad,
                                bool integrand_rotation_invariant) {
  if (f.radial && integrand_rotation_invariant) {
    auto g = [&fn, &f](double r) {
      Vec p = f.center;
      p[0] += r;
      return fn(p);
    };
    Integral radial =
        integrate_radial(g, n, quad.rel_tol, 1.0, std::max(1.0, f.radial_extent));
    radial.value *= sphere_area(n);
    radial.abs_error *= sphere_area(n);
    return radial;
  }
  const auto& box = quad.box.empty() ? f.domain : quad.box;
  if (box.empty()) throw InvalidInput("integrate_field: no integration domain");
  return integrate_box(fn, box, quad.rel_tol, quad.max_cells);
}

}  // namespace detail

// int f^{n'} dx over the field's effective support.
inline Integral integral_f_nprime(const ScalarField& f, int n, const QuadratureSpec& quad = {}) {
  const double np = lebesgue_conjugate(n);
  return detail::integrate_field(
      f, [&](const Vec& x) { return std::pow(std::max(field_value(f, x), 0.0), np); }, n, quad,
      /*integrand_rotation_invariant=*/true);
}

// The Young term  int V*(-grad f / f^{n'}) f^{n'} dx.
//
// Where f^{n'} underflows the integrand takes its limit value 0; points where
// the gradient is still sizeable there are counted in `vanishing_hits` so
// reports can flag a non-negligible vanishing set. For indicatrix potentials
// the 1-homogeneity of h_K collapses the integrand to h_K(-grad f), which has
// no vanishing-set issue at all.
struct YoungTerm {
  Integral integral;
  long vanishing_hits = 0;
};

inline YoungTerm young_term(const ConvexFunction& v, const ScalarField& f, int n,
                            const QuadratureSpec& quad = {}) {
  if (v.n != n || f.n != n) throw InvalidInput("young_term: dimension mismatch");
  YoungTerm out;
  const double np = lebesgue_conjugate(n);

  if (v.type == FnType::Indicatrix) {
    const ConvexBody k = *v.body;
    // h_K(-grad f) is rotation-invariant about the field center only when K
    // is a centered ball.
    const bool rot = (k.type == BodyType::Ball);
    auto fn = [&](const Vec& x) {
      const Vec g = field_gradient(f, x);
      return support(k, scale(g, -1.0));
    };
    out.integral = detail::integrate_field(f, fn, n, quad, rot);
    return out;
  }

  auto* hits = &out.vanishing_hits;
  auto fn = [&v, &f, np, hits](const Vec& x) {
    const double fx = field_value(f, x);
    const double fp = std::pow(std::max(fx, 0.0), np);
    const Vec g = field_gradient(f, x);
    if (fp < 1e-200) {
      if (norm2(g) > 1e-12) ++(*hits);
      return 0.0;
    }
    const double cj = conjugate(v, scale(g, -1.0 / fp));
    const double val = cj * fp;
    return std::isfinite(val) ? val : 0.0;
  };
  out.integral = detail::integrate_field(f, fn, n, quad, v.radial());
  return out;
}

// Everything Theorem 1 needs, computed once: the two sides share Z_V, the
// V-moment and int f^{n'}.
struct Thm1Breakdown {
  int n = 0;
  MuMoments moments;
  Integral young;
  Integral f_nprime;
  long vanishing_hits = 0;

  double p_v() const { return young.value + moments.v_mu_moment() * f_nprime.value; }
  double bracket() const {
    return n * std::pow(moments.z, 1.0 / n) * moments.bracket_moment();
  }
  double f_norm() const { return std::pow(f_nprime.value, 1.0 / lebesgue_conjugate(n)); }
  double rhs() const { return bracket() * f_norm(); }
  double deficit() const { return p_v() - rhs(); }
};

inline Thm1Breakdown thm1_breakdown(const ConvexFunction& v, const ScalarField& f, int n,
                                    const QuadratureSpec& quad = {}) {
  Thm1Breakdown b;
  b.n = n;
  b.moments = mu_v_moments(v, n, quad);
  const YoungTerm y = young_term(v, f, n, quad);
  b.young = y.integral;
  b.vanishing_hits = y.vanishing_hits;
  b.f_nprime = integral_f_nprime(f, n, quad);
  return b;
}

// p_V(f) = int V*(-grad f / f^{n'}) f^{n'} + (int V dmu_V)(int f^{n'}).
inline double p_v_functional(const ConvexFunction& v, const ScalarField& f, int n,
                             const QuadratureSpec& quad = {}) {
  return thm1_breakdown(v, f, n, quad).p_v();
}

// [n Z_V^{1/n} int (1 + V/(n-1)) dmu_V] * ||f||_{n'}.
inline double thm1_rhs(const ConvexFunction& v, int n, const ScalarField& f,
                       const QuadratureSpec& quad = {}) {
  Thm1Breakdown b;
  b.n = n;
  b.moments = mu_v_moments(v, n, quad);
  b.f_nprime = integral_f_nprime(f, n, quad);
  return b.rhs();
}

}  // namespace isotk
