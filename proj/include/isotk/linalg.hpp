#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "isotk/errors.hpp"

namespace isotk {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec scale(const Vec& a, double t) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = t * a[i];
  return r;
}

inline double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Dense square matrix, row-major.
struct Mat {
  int n = 0;
  std::vector<double> a;

  Mat() = default;
  explicit Mat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  static Mat identity(int dim) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  Vec apply(const Vec& x) const {
    Vec y(n, 0.0);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  Vec apply_transpose(const Vec& x) const {
    Vec y(n, 0.0);
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += (*this)(i, j) * x[i];
      y[j] = s;
    }
    return y;
  }
};

// LU with partial pivoting; returns determinant and leaves lu/perm usable for solves.
struct Lu {
  Mat lu;
  std::vector<int> perm;
  double det = 0.0;

  explicit Lu(const Mat& m) : lu(m), perm(m.n) {
    const int n = m.n;
    for (int i = 0; i < n; ++i) perm[i] = i;
    det = 1.0;
    for (int col = 0; col < n; ++col) {
      int piv = col;
      double best = std::fabs(lu(col, col));
      for (int r = col + 1; r < n; ++r) {
        const double v = std::fabs(lu(r, col));
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (best == 0.0) {
        det = 0.0;
        return;
      }
      if (piv != col) {
        for (int j = 0; j < n; ++j) std::swap(lu(piv, j), lu(col, j));
        std::swap(perm[piv], perm[col]);
        det = -det;
      }
      det *= lu(col, col);
      for (int r = col + 1; r < n; ++r) {
        const double f = lu(r, col) / lu(col, col);
        lu(r, col) = f;
        for (int j = col + 1; j < n; ++j) lu(r, j) -= f * lu(col, j);
      }
    }
  }

  Vec solve(const Vec& b) const {
    if (det == 0.0) throw InvalidInput("singular matrix in solve");
    const int n = lu.n;
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
      x[i] /= lu(i, i);
    }
    return x;
  }
};

inline double determinant(const Mat& m) { return Lu(m).det; }

inline Mat inverse(const Mat& m) {
  Lu lu(m);
  if (lu.det == 0.0) throw InvalidInput("matrix not invertible");
  const int n = m.n;
  Mat inv(n);
  Vec e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e.assign(n, 0.0);
    e[j] = 1.0;
    Vec col = lu.solve(e);
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

// Volume of the unit ball in dimension n.
inline double unit_ball_volume(int n) {
  // omega_n = pi^{n/2} / Gamma(n/2 + 1)
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace isotk
