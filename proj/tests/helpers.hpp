#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

// Brute-force oracles shared by the test binaries.

namespace testing_oracles {

// Dense scan plus golden-section refinement of a univariate function.
inline std::pair<double, double> grid_min(const std::function<double(double)>& f,
                                          double lo, double hi, int n_points,
                                          bool refine = true) {
  double best_t = lo, best_v = f(lo);
  for (int i = 1; i < n_points; ++i) {
    const double t = lo + (hi - lo) * i / (n_points - 1.0);
    const double v = f(t);
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  }
  if (refine) {
    const double h = (hi - lo) / (n_points - 1.0);
    double a = std::max(lo, best_t - h), b = std::min(hi, best_t + h);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    for (int it = 0; it < 80; ++it) {
      if (f(c) < f(d)) {
        b = d;
      } else {
        a = c;
      }
      c = b - gr * (b - a);
      d = a + gr * (b - a);
    }
    const double t = 0.5 * (a + b);
    const double v = f(t);
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  }
  return {best_t, best_v};
}

// min over the delta-ball of g'd + 1/2 d'Hd by polar search (n = 2).
inline double polar_quad_min(const Eigen::VectorXd& g, const Eigen::MatrixXd& H,
                             double delta, int n_dirs = 3000, int n_radii = 400) {
  double best = 0.0;
  for (int i = 0; i < n_dirs; ++i) {
    const double th = 2.0 * M_PI * i / n_dirs;
    Eigen::VectorXd u(2);
    u << std::cos(th), std::sin(th);
    const double a = g.dot(u);
    const double b = 0.5 * u.dot(H * u);
    // quadratic in r on [0, delta]: min at endpoint or -a/(2b)
    for (double r : {delta, (b > 0.0) ? std::clamp(-a / (2.0 * b), 0.0, delta) : delta}) {
      const double v = a * r + b * r * r;
      best = std::min(best, v);
    }
    (void)n_radii;
  }
  return best;
}

// max_{|v|=1} |S(v,...,v)| over a spherical grid (dim 2 or 3).
inline double sphere_grid_max(const std::function<double(const Eigen::VectorXd&)>& form,
                              int dim, int n = 400) {
  double best = 0.0;
  if (dim == 2) {
    for (int i = 0; i < n; ++i) {
      const double th = M_PI * i / n;  // antipodal symmetry up to sign
      Eigen::VectorXd v(2);
      v << std::cos(th), std::sin(th);
      best = std::max(best, std::abs(form(v)));
    }
  } else {
    for (int i = 0; i <= n / 2; ++i) {
      const double ph = M_PI * i / (n / 2);
      for (int j = 0; j < n; ++j) {
        const double th = 2.0 * M_PI * j / n;
        Eigen::VectorXd v(3);
        v << std::sin(ph) * std::cos(th), std::sin(ph) * std::sin(th), std::cos(ph);
        best = std::max(best, std::abs(form(v)));
      }
    }
  }
  return best;
}

// Central finite-difference gradient and Hessian of a scalar field.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                                  const Eigen::VectorXd& x, double h = 1e-4) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[i] += h; xpp[j] += h;
      xpm[i] += h; xpm[j] -= h;
      xmp[i] -= h; xmp[j] += h;
      xmm[i] -= h; xmm[j] -= h;
      H(i, j) = H(j, i) = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h * h);
    }
  return H;
}

// Directional derivative of order k along u by central differences.
inline double fd_directional(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                             int k, double h = 1e-2) {
  auto g = [&](double t) { return f(x + t * u); };
  switch (k) {
    case 1: return (g(h) - g(-h)) / (2.0 * h);
    case 2: return (g(h) - 2.0 * g(0.0) + g(-h)) / (h * h);
    case 3: return (g(2 * h) - 2.0 * g(h) + 2.0 * g(-h) - g(-2 * h)) / (2.0 * h * h * h);
    case 4:
      return (g(2 * h) - 4.0 * g(h) + 6.0 * g(0.0) - 4.0 * g(-h) + g(-2 * h)) /
             (h * h * h * h);
    default: throw std::invalid_argument("fd_directional: order out of range");
  }
}

inline Eigen::VectorXd random_unit(std::mt19937& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  return v.normalized();
}

}  // namespace testing_oracles
