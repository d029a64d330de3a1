#include "arp/subproblem.hpp"

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

// sigma/(p+beta)! scaling of the regularization term.
double reg_coeff(double sigma, int p, double beta) {
  return sigma / generalized_factorial(p, beta);
}

// j-th derivative of t -> sigma/(p+beta)! |t|^{p+beta} away from 0.
double reg_derivative_1d(double sigma, int p, double beta, int j, double t) {
  if (j == 0) return reg_coeff(sigma, p, beta) * std::pow(std::abs(t), p + beta);
  const double mag =
      sigma / generalized_factorial(p - j, beta) * std::pow(std::abs(t), p - j + beta);
  const double sign = (t >= 0.0) ? 1.0 : ((j % 2 == 0) ? 1.0 : -1.0);
  return sign * mag;
}

struct Candidate {
  double t;
  double value;
};

void pick_best(std::vector<Candidate>& cands, double& best_t, double& best_v) {
  double scale = 1.0;
  for (const auto& c : cands) scale = std::max(scale, std::abs(c.value));
  best_v = std::numeric_limits<double>::infinity();
  best_t = 0.0;
  bool first = true;
  for (const auto& c : cands) {
    if (first || c.value < best_v - 1e-14 * scale ||
        (c.value <= best_v + 1e-14 * scale && c.t > best_t)) {
      best_v = std::min(best_v, c.value);
      best_t = (first || c.value <= best_v + 1e-14 * scale) ? c.t : best_t;
      first = false;
    }
  }
}

}  // namespace

double RegularizedModel::value(const Eigen::VectorXd& s) const {
  return taylor.eval(s) + reg_coeff(sigma, p, beta) * std::pow(s.norm(), p + beta);
}

Eigen::VectorXd RegularizedModel::gradient(const Eigen::VectorXd& s) const {
  Eigen::VectorXd g = taylor.derivative(s, 1).as_vector();
  const double sn = s.norm();
  if (sn > 0.0)
    g += reg_coeff(sigma, p, beta) * (p + beta) * std::pow(sn, p + beta - 2.0) * s;
  return g;
}

Eigen::MatrixXd RegularizedModel::hessian(const Eigen::VectorXd& s) const {
  Eigen::MatrixXd H = taylor.derivative(s, 2).as_matrix();
  const double sn = s.norm();
  if (sn > 0.0) {
    const double r = p + beta;
    const double c = reg_coeff(sigma, p, beta) * r;
    H += c * std::pow(sn, r - 2.0) * Eigen::MatrixXd::Identity(s.size(), s.size());
    H += c * (r - 2.0) * std::pow(sn, r - 4.0) * (s * s.transpose());
  }
  return H;
}

std::vector<double> restrict_taylor(const TaylorModel& T, const Eigen::VectorXd& u) {
  std::vector<double> coeffs(T.degree());
  for (int l = 1; l <= T.degree(); ++l)
    coeffs[l - 1] = T.derivs[l - 1].apply_power(u) / factorial(l);
  return coeffs;
}

UniMinResult minimize_univariate_decrease(const std::vector<double>& taylor_coeffs,
                                          double sigma, int p, double beta,
                                          double lo, double hi) {
  if (lo > 0.0 || hi < 0.0)
    throw std::invalid_argument("minimize_univariate_decrease: 0 must be feasible");
  const double r = reg_coeff(sigma, p, beta);

  std::vector<Candidate> cands;
  auto decrease_fn = [&](double t) {
    double acc = 0.0;
    for (int l = static_cast<int>(taylor_coeffs.size()); l >= 1; --l)
      acc = acc * t + taylor_coeffs[l - 1];
    acc *= t;
    return acc + r * std::pow(std::abs(t), p + beta);
  };
  cands.push_back({0.0, 0.0});

  if (beta == 1.0) {
    // Two polynomial half-line pieces split at 0.
    for (int side = 0; side < 2; ++side) {
      const double a = (side == 0) ? std::max(lo, 0.0) : lo;
      const double b = (side == 0) ? hi : std::min(hi, 0.0);
      if (a >= b) continue;
      std::vector<double> poly(p + 2, 0.0);
      for (int l = 1; l <= p; ++l) poly[l] = taylor_coeffs[l - 1];
      poly[p + 1] = (side == 0) ? r : r * (((p + 1) % 2 == 0) ? 1.0 : -1.0);
      if (std::isfinite(a)) cands.push_back({a, poly_eval(poly, a)});
      if (std::isfinite(b)) cands.push_back({b, poly_eval(poly, b)});
      for (double root : real_roots(poly_derivative(poly)))
        if (root > a && root < b) cands.push_back({root, poly_eval(poly, root)});
    }
  } else {
    // Non-polynomial regularization: derivative sign changes on a
    // logarithmic seed grid, refined by bisection.
    auto deriv_fn = [&](double t) {
      double acc = 0.0;
      for (int l = static_cast<int>(taylor_coeffs.size()); l >= 1; --l)
        acc = acc * t + l * taylor_coeffs[l - 1];
      return acc + reg_derivative_1d(sigma, p, beta, 1, t);
    };
    // Beyond R the regularization derivative dominates every Taylor term,
    // so all stationary points lie in (0, R].
    double coef_sum = 0.0;
    for (int l = 1; l <= static_cast<int>(taylor_coeffs.size()); ++l)
      coef_sum += l * std::abs(taylor_coeffs[l - 1]);
    const double R = std::max(
        1.0, std::pow(coef_sum * generalized_factorial(p - 1, beta) / sigma +
                          1.0,
                      1.0 / beta));
    for (int side = 0; side < 2; ++side) {
      const double dir = (side == 0) ? 1.0 : -1.0;
      const double limit = (side == 0) ? hi : -lo;
      if (limit <= 0.0) continue;
      const double reach = std::min(limit, 2.0 * R);
      // 1/8-decade grid over 14 decades below the reach: sign changes of the
      // derivative bracket stationary points, refined by bisection.
      std::vector<double> grid;
      for (int k = 112; k >= 0; --k) grid.push_back(reach * std::pow(10.0, -k / 8.0));
      double prev_t = 0.0;
      double prev_d = dir * deriv_fn(dir * 1e-300);
      for (double gmag : grid) {
        const double t = dir * gmag;
        const double d = dir * deriv_fn(t);
        if (prev_d < 0.0 && d >= 0.0) {
          double a = prev_t, b = gmag;
          for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + b); ++it) {
            const double mid = 0.5 * (a + b);
            (dir * deriv_fn(dir * mid) < 0.0 ? a : b) = mid;
          }
          const double root = dir * 0.5 * (a + b);
          cands.push_back({root, decrease_fn(root)});
        }
        prev_t = gmag;
        prev_d = d;
      }
      if (std::isfinite(limit)) {
        const double t = dir * limit;
        cands.push_back({t, decrease_fn(t)});
      }
    }
  }

  double best_t = 0.0, best_v = 0.0;
  pick_best(cands, best_t, best_v);

  UniMinResult out;
  out.t = best_t;
  out.decrease = std::max(0.0, -best_v);
  // Strict descent per the acceptance rule; ties with the origin report
  // no descent even when a distinct minimizer attains the same value.
  out.descent = best_v < 0.0;
  if (!out.descent) {
    out.t = 0.0;
    out.decrease = 0.0;
  }
  return out;
}

StepResult minimize_model_univariate(const RegularizedModel& m,
                                     const FeasibleRegion& region) {
  if (m.taylor.dim() != 1)
    throw std::invalid_argument("minimize_model_univariate: model must be 1-D");
  auto [lo, hi] = region.step_range(m.taylor.base_point);
  const std::vector<double> coeffs = restrict_taylor(m.taylor, Eigen::VectorXd::Ones(1));
  const UniMinResult r = minimize_univariate_decrease(coeffs, m.sigma, m.p, m.beta, lo, hi);

  StepResult out;
  out.s = Eigen::VectorXd::Constant(1, r.t);
  out.model_decrease = r.decrease;
  out.reason = r.descent ? StopReason::LongStep : StopReason::NoDescentExists;
  return out;
}

StepResult minimize_model_cubic(const RegularizedModel& m) {
  if (m.p != 2 || m.beta != 1.0)
    throw std::invalid_argument("minimize_model_cubic: requires p = 2, beta = 1");
  const Eigen::VectorXd g = m.taylor.derivs[0].as_vector();
  const Eigen::MatrixXd H = m.taylor.derivs[1].as_matrix();
  const CubicRegResult c = minimize_cubic_regularized(g, H, m.sigma);

  StepResult out;
  out.s = c.s;
  out.model_decrease = std::max(0.0, -c.value);
  out.reason = (c.value < 0.0) ? StopReason::LongStep : StopReason::NoDescentExists;
  if (out.reason == StopReason::NoDescentExists) {
    out.s.setZero();
    out.model_decrease = 0.0;
  }
  return out;
}

double model_phi_line(const std::vector<double>& taylor_coeffs, double sigma,
                      int p, double beta, double t, int q, double delta,
                      double lo, double hi) {
  // Degree-q Taylor coefficients of the restricted model at t.
  std::vector<double> at_t(q);
  for (int j = 1; j <= q; ++j) {
    double acc = 0.0;
    for (int l = j; l <= p; ++l)
      acc += taylor_coeffs[l - 1] * factorial(l) / factorial(l - j) *
             std::pow(t, l - j);
    if (t != 0.0 || p - j + beta > 0.0)
      acc += reg_derivative_1d(sigma, p, beta, j, t);
    at_t[j - 1] = acc / factorial(j);
  }
  return phi_univariate_coeffs(at_t, delta, lo - t, hi - t).first;
}

double model_phi(const RegularizedModel& m, const Eigen::VectorXd& s, int q,
                 double delta, const FeasibleRegion& region,
                 const Eigen::VectorXd& x) {
  if (region.is_line_like()) {
    const Eigen::VectorXd u = region.line_direction();
    auto [lo, hi] = region.step_range(x);
    const double t = u.dot(s);
    return model_phi_line(restrict_taylor(m.taylor, u), m.sigma, m.p, m.beta, t, q,
                          delta, lo, hi);
  }
  const Eigen::VectorXd xs = x + s;
  if (q == 1) return phi_order1(m.gradient(s), delta, region, xs);
  if (q == 2)
    return phi_order2(m.gradient(s), SymmetricTensor::from_matrix(m.hessian(s)),
                      delta, region, xs)
        .phi;
  throw std::invalid_argument("model_phi: q >= 3 requires a line-like region");
}

StepResult check_step_conditions(StepResult step, const RegularizedModel& m, int q,
                                 double epsilon, double varpi, double theta,
                                 const FeasibleRegion& region,
                                 const Eigen::VectorXd& x) {
  if (step.reason == StopReason::NoDescentExists) return step;
  if (step.model_decrease <= 0.0)
    throw std::invalid_argument("check_step_conditions: step has no descent");

  const double sn = step.s.norm();
  const double pqb = m.p - q + m.beta;
  if (sn >= varpi * std::pow(epsilon, 1.0 / pqb)) {
    step.reason = StopReason::LongStep;
    step.delta_k = 1.0;  // free choice once the long-step test holds
    return step;
  }

  const double bound_base = theta * std::pow(sn, pqb) / generalized_factorial(m.p - q, m.beta);
  for (int e = 0; e <= 20; ++e) {
    const double delta = std::pow(0.5, e);
    const double phi = model_phi(m, step.s, q, delta, region, x);
    if (phi <= bound_base * chi(q, delta)) {
      step.reason = StopReason::InnerOptimality;
      step.delta_k = delta;
      return step;
    }
  }
  throw NumericalError(
      "check_step_conditions: no admissible delta on the grid down to 2^-20");
}

bool check_inner_tr_condition(const RegularizedModel& m, const Eigen::VectorXd& s,
                              double theta, int p) {
  const TrustRegionResult tr =
      solve_trust_region(m.gradient(s), m.hessian(s), 1.0);
  const double rhs = -1.5 * theta * std::pow(s.norm(), p - 1.0) / factorial(p - 1);
  return tr.value >= rhs;
}

}  // namespace arp
