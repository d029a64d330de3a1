#include "arp/optimality.hpp"

#include "arp/polyroots.hpp"
#include "arp/trust_region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arp {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

double chi(int q, double delta) {
  if (q < 1) throw std::domain_error("chi: q must be >= 1");
  double acc = 0.0;
  double fact = 1.0;
  double pow_d = 1.0;
  for (int l = 1; l <= q; ++l) {
    fact *= l;
    pow_d *= delta;
    acc += pow_d / fact;
  }
  return acc;
}

std::pair<double, double> phi_univariate_coeffs(const std::vector<double>& taylor_coeffs,
                                                double delta, double lo, double hi) {
  const double a = std::max(lo, -delta);
  const double b = std::min(hi, delta);
  if (a > b) throw std::invalid_argument("phi_univariate: empty feasible range");

  std::vector<double> poly(taylor_coeffs.size() + 1, 0.0);
  for (std::size_t l = 0; l < taylor_coeffs.size(); ++l) poly[l + 1] = taylor_coeffs[l];

  std::vector<double> candidates;
  if (std::isfinite(a)) candidates.push_back(a);
  if (std::isfinite(b)) candidates.push_back(b);
  if (a <= 0.0 && 0.0 <= b) candidates.push_back(0.0);
  for (double r : real_roots(poly_derivative(poly)))
    if (r > a && r < b) candidates.push_back(r);

  double best_val = std::numeric_limits<double>::infinity();
  double best_d = 0.0;
  double scale = 1.0;
  for (double d : candidates) scale = std::max(scale, std::abs(poly_eval(poly, d)));
  for (double d : candidates) {
    const double v = poly_eval(poly, d);
    // Ties resolved toward the largest step so directional symmetry
    // (even-degree leading terms) breaks deterministically.
    if (v < best_val - 1e-14 * scale ||
        (v <= best_val + 1e-14 * scale && d > best_d)) {
      best_val = std::min(best_val, v);
      best_d = d;
    }
  }
  return {std::max(0.0, -best_val), best_d};
}

std::pair<double, double> phi_univariate(const TaylorModel& T, int j, double delta,
                                         const FeasibleRegion& region, double x) {
  if (T.dim() != 1) throw std::invalid_argument("phi_univariate: model must be 1-D");
  if (j < 0 || j > T.degree()) throw std::domain_error("phi_univariate: j out of range");
  if (j == 0) return {0.0, 0.0};

  std::vector<double> coeffs(j);
  for (int l = 1; l <= j; ++l) coeffs[l - 1] = T.derivs[l - 1].raw()[0] / factorial(l);

  Eigen::VectorXd xv(1);
  xv[0] = x;
  auto [lo, hi] = region.step_range(xv);
  return phi_univariate_coeffs(coeffs, delta, lo, hi);
}

PhiResult phi_order1_with_arg(const Eigen::VectorXd& grad, double delta,
                              const FeasibleRegion& region, const Eigen::VectorXd& x) {
  PhiResult out;
  out.argmin_d = Eigen::VectorXd::Zero(grad.size());

  switch (region.kind()) {
    case FeasibleRegion::Kind::WholeSpace: {
      const double gn = grad.norm();
      out.phi = gn * delta;
      if (gn > 0.0) out.argmin_d = -(delta / gn) * grad;
      return out;
    }
    case FeasibleRegion::Kind::Ray:
    case FeasibleRegion::Kind::Interval: {
      const Eigen::VectorXd u = region.line_direction();
      const double slope = grad.dot(u);
      auto [lo, hi] = region.step_range(x);
      const double a = std::max(lo, -delta);
      const double b = std::min(hi, delta);
      const double t = (slope > 0.0) ? a : (slope < 0.0 ? b : 0.0);
      out.phi = std::max(0.0, -slope * t);
      out.argmin_d = t * u;
      return out;
    }
    case FeasibleRegion::Kind::Box: {
      const Eigen::VectorXd l = region.box_lower() - x;
      const Eigen::VectorXd u = region.box_upper() - x;
      auto clipped = [&](double mu) {
        Eigen::VectorXd d = -mu * grad;
        return d.cwiseMax(l).cwiseMin(u).eval();
      };
      // Box vertex selected by the gradient sign; exact when inside the ball.
      Eigen::VectorXd vertex(grad.size());
      for (int i = 0; i < grad.size(); ++i)
        vertex[i] = grad[i] > 0.0 ? l[i] : (grad[i] < 0.0 ? u[i] : 0.0);
      Eigen::VectorXd d = vertex;
      if (vertex.norm() > delta) {
        double mu_hi = 1.0;
        while (clipped(mu_hi).norm() < delta) mu_hi *= 2.0;
        double mu_lo = 0.0;
        for (int it = 0; it < 200; ++it) {
          const double mu = 0.5 * (mu_lo + mu_hi);
          (clipped(mu).norm() < delta ? mu_lo : mu_hi) = mu;
        }
        d = clipped(0.5 * (mu_lo + mu_hi));
        if (d.norm() > 0.0) d *= delta / d.norm();
        d = d.cwiseMax(l).cwiseMin(u);
      }
      out.phi = std::max(0.0, -grad.dot(d));
      out.argmin_d = d;
      return out;
    }
  }
  throw std::logic_error("phi_order1: unknown region kind");
}

double phi_order1(const Eigen::VectorXd& grad, double delta,
                  const FeasibleRegion& region, const Eigen::VectorXd& x) {
  return phi_order1_with_arg(grad, delta, region, x).phi;
}

PhiResult phi_order2(const Eigen::VectorXd& grad, const SymmetricTensor& hess,
                     double delta, const FeasibleRegion& region,
                     const Eigen::VectorXd& x) {
  PhiResult out;
  if (region.is_line_like()) {
    const Eigen::VectorXd u = region.line_direction();
    const Eigen::MatrixXd H = hess.as_matrix();
    std::vector<double> coeffs = {grad.dot(u), 0.5 * u.dot(H * u)};
    auto [lo, hi] = region.step_range(x);
    auto [phi, t] = phi_univariate_coeffs(coeffs, delta, lo, hi);
    out.phi = phi;
    out.argmin_d = t * u;
    return out;
  }

  if (region.kind() == FeasibleRegion::Kind::Box) {
    // Interior-only fallback: the ball must not touch the box.
    const Eigen::VectorXd l = region.box_lower() - x;
    const Eigen::VectorXd u = region.box_upper() - x;
    for (int i = 0; i < x.size(); ++i)
      if (l[i] > -delta || u[i] < delta)
        throw std::invalid_argument(
            "phi_order2: box region requires x interior at distance >= delta");
  } else if (region.kind() != FeasibleRegion::Kind::WholeSpace) {
    throw std::invalid_argument("phi_order2: unsupported region");
  }

  const TrustRegionResult tr = solve_trust_region(grad, hess.as_matrix(), delta);
  out.phi = std::max(0.0, -tr.value);
  out.argmin_d = tr.d;
  return out;
}

bool check_termination(double phi, double epsilon, int q, double delta) {
  const double threshold = epsilon * chi(q, delta);
  // Relative guard: constructions meeting the threshold with equality must
  // not fail on the last floating-point ulp.
  return phi <= threshold + 1e-10 * threshold + 1e-15;
}

std::pair<double, double> near_minimizer_certificate(double epsilon, double delta,
                                                     int q, double beta, double L,
                                                     double f_x) {
  if (delta <= 0.0 || delta > 1.0)
    throw std::domain_error("near_minimizer_certificate: delta out of (0,1]");
  if (L < 0.0) throw std::domain_error("near_minimizer_certificate: L < 0");
  double radius = delta;
  if (L > 0.0) {
    const double expo = 1.0 / (q + beta - 1.0);
    radius = std::min(delta, std::pow(factorial(q + 1) * epsilon / L, expo));
  }
  const double lower = f_x - 2.0 * epsilon * chi(q, delta);
  return {radius, lower};
}

}  // namespace arp
