#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "isotk/errors.hpp"
#include "isotk/linalg.hpp"

namespace isotk {

// Nonnegative locally Lipschitz test function f with its effective support.
// `gradient` may be empty, in which case scale-aware central differences are
// used. Radial fields carry their center and support radius so integrals can
// take the 1-D fast path.
struct ScalarField {
  int n = 0;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::vector<std::pair<double, double>> domain;  // box holding the effective support

  bool radial = false;
  Vec center;
  double radial_extent = 0.0;
};

inline double field_value(const ScalarField& f, const Vec& x) { return f.value(x); }

inline Vec field_gradient(const ScalarField& f, const Vec& x) {
  if (f.gradient) return f.gradient(x);
  Vec g(f.n);
  for (int d = 0; d < f.n; ++d) {
    const double h = 1e-5 * (1.0 + std::fabs(x[d]));
    Vec xp = x, xm = x;
    xp[d] += h;
    xm[d] -= h;
    g[d] = (f.value(xp) - f.value(xm)) / (2.0 * h);
  }
  return g;
}

// Sum of isotropic Gaussian bumps sum_i a_i exp(-|x-c_i|^2 / (2 s_i^2)),
// with analytic gradient. The domain box covers all centers out to 8 sigma.
inline ScalarField gaussian_mixture(std::vector<Vec> centers, std::vector<double> sigmas,
                                    std::vector<double> amplitudes) {
  if (centers.empty() || centers.size() != sigmas.size() || centers.size() != amplitudes.size())
    throw InvalidInput("gaussian_mixture: inconsistent component lists");
  const int n = static_cast<int>(centers[0].size());
  ScalarField f;
  f.n = n;
  f.value = [centers, sigmas, amplitudes](const Vec& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      double q = 0.0;
      for (std::size_t d = 0; d < x.size(); ++d) {
        const double dcomp = x[d] - centers[i][d];
        q += dcomp * dcomp;
      }
      s += amplitudes[i] * std::exp(-q / (2.0 * sigmas[i] * sigmas[i]));
    }
    return s;
  };
  f.gradient = [centers, sigmas, amplitudes](const Vec& x) {
    Vec g(x.size(), 0.0);
    for (std::size_t i = 0; i < centers.size(); ++i) {
      double q = 0.0;
      for (std::size_t d = 0; d < x.size(); ++d) {
        const double dcomp = x[d] - centers[i][d];
        q += dcomp * dcomp;
      }
      const double s2 = sigmas[i] * sigmas[i];
      const double w = amplitudes[i] * std::exp(-q / (2.0 * s2)) / s2;
      for (std::size_t d = 0; d < x.size(); ++d) g[d] -= w * (x[d] - centers[i][d]);
    }
    return g;
  };
  f.domain.resize(n);
  for (int d = 0; d < n; ++d) {
    double lo = centers[0][d], hi = centers[0][d];
    for (std::size_t i = 0; i < centers.size(); ++i) {
      lo = std::min(lo, centers[i][d] - 8.0 * sigmas[i]);
      hi = std::max(hi, centers[i][d] + 8.0 * sigmas[i]);
    }
    f.domain[d] = {lo, hi};
  }
  if (centers.size() == 1) {
    f.radial = true;
    f.center = centers[0];
    f.radial_extent = 8.0 * sigmas[0];
  }
  return f;
}

}  // namespace isotk
