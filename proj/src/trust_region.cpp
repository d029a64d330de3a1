#include "arp/trust_region.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace arp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// |d(lambda)| with d_i = -b_i / (eigs_i + lambda); +inf when a denominator
// vanishes against a nonzero b_i.
double shifted_norm(const Eigen::VectorXd& eigs, const Eigen::VectorXd& b,
                    double lambda, double degeneracy_tol) {
  double acc = 0.0;
  for (int i = 0; i < eigs.size(); ++i) {
    const double den = eigs[i] + lambda;
    if (std::abs(den) <= degeneracy_tol) {
      if (std::abs(b[i]) > degeneracy_tol) return kInf;
      continue;
    }
    const double di = b[i] / den;
    acc += di * di;
  }
  return std::sqrt(acc);
}

Eigen::VectorXd shifted_solution(const Eigen::VectorXd& eigs, const Eigen::VectorXd& b,
                                 double lambda, double degeneracy_tol) {
  Eigen::VectorXd y(eigs.size());
  for (int i = 0; i < eigs.size(); ++i) {
    const double den = eigs[i] + lambda;
    y[i] = (std::abs(den) <= degeneracy_tol) ? 0.0 : -b[i] / den;
  }
  return y;
}

// Sign convention: largest-magnitude component positive, so hard-case
// completions are deterministic.
void fix_sign(Eigen::VectorXd& v) {
  int imax = 0;
  for (int i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0.0) v = -v;
}

double quad_value(const Eigen::VectorXd& g, const Eigen::MatrixXd& H,
                  const Eigen::VectorXd& d) {
  return g.dot(d) + 0.5 * d.dot(H * d);
}

}  // namespace

TrustRegionResult solve_trust_region(const Eigen::VectorXd& g,
                                     const Eigen::MatrixXd& H, double radius,
                                     double tol, int max_iter) {
  const int n = static_cast<int>(g.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const Eigen::VectorXd eigs = es.eigenvalues();
  const Eigen::MatrixXd Q = es.eigenvectors();
  const Eigen::VectorXd b = Q.transpose() * g;
  const double lam_min = eigs[0];
  const double scale = std::max({1.0, eigs.cwiseAbs().maxCoeff(), g.norm()});
  const double degen = 1e-13 * scale;

  TrustRegionResult out;

  // Interior Newton step.
  if (lam_min > degen) {
    const Eigen::VectorXd y = shifted_solution(eigs, b, 0.0, degen);
    if (y.norm() <= radius * (1.0 + tol)) {
      out.d = Q * y;
      out.value = quad_value(g, H, out.d);
      out.lambda = 0.0;
      out.interior = true;
      return out;
    }
  }

  const double lam_lo = std::max(0.0, -lam_min);

  // Hard case: residual solution at lam_lo already fits inside the radius.
  if (shifted_norm(eigs, b, lam_lo, degen) <= radius) {
    Eigen::VectorXd y = shifted_solution(eigs, b, lam_lo, degen);
    const double rem = radius * radius - y.squaredNorm();
    if (lam_lo > 0.0 && rem > 0.0) {
      Eigen::VectorXd v = Q.col(0);
      fix_sign(v);
      out.d = Q * y + std::sqrt(rem) * v;
      out.hard_case = true;
    } else {
      out.d = Q * y;
    }
    out.lambda = lam_lo;
    out.value = quad_value(g, H, out.d);
    return out;
  }

  // Secular iteration on 1/|d(lambda)| = 1/radius, bracketed by bisection.
  double lo = lam_lo;
  double hi = lam_lo + b.norm() / radius + degen;  // |d(hi)| <= radius
  while (shifted_norm(eigs, b, hi, degen) > radius) hi *= 2.0;

  double lambda = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const double nrm = shifted_norm(eigs, b, lambda, degen);
    if (std::isfinite(nrm) && std::abs(nrm - radius) <= tol * radius) break;
    if (!std::isfinite(nrm) || nrm > radius)
      lo = lambda;
    else
      hi = lambda;

    double newton = -1.0;
    if (std::isfinite(nrm) && nrm > 0.0) {
      // phi(lambda) = 1/nrm - 1/radius, phi' = sum b_i^2/(l_i+lambda)^3 / nrm^3
      double dphi = 0.0;
      for (int i = 0; i < n; ++i) {
        const double den = eigs[i] + lambda;
        if (std::abs(den) <= degen) continue;
        dphi += b[i] * b[i] / (den * den * den);
      }
      dphi /= nrm * nrm * nrm;
      if (dphi > 0.0) newton = lambda - (1.0 / nrm - 1.0 / radius) / dphi;
    }
    lambda = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
    if (it == max_iter - 1)
      throw NumericalError("trust-region secular iteration did not converge");
  }

  out.d = Q * shifted_solution(eigs, b, lambda, degen);
  out.lambda = lambda;
  out.value = quad_value(g, H, out.d);
  return out;
}

CubicRegResult minimize_cubic_regularized(const Eigen::VectorXd& g,
                                          const Eigen::MatrixXd& H, double sigma,
                                          double tol, int max_iter) {
  if (sigma <= 0.0) throw std::invalid_argument("minimize_cubic_regularized: sigma <= 0");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const Eigen::VectorXd eigs = es.eigenvalues();
  const Eigen::MatrixXd Q = es.eigenvectors();
  const Eigen::VectorXd b = Q.transpose() * g;
  const double lam_min = eigs[0];
  const double scale = std::max({1.0, eigs.cwiseAbs().maxCoeff(), g.norm()});
  const double degen = 1e-13 * scale;

  const double lam_lo = std::max(0.0, -lam_min);
  // psi(lambda) = sigma |d(lambda)| / 2 - lambda, strictly decreasing.
  auto psi = [&](double lambda) {
    return 0.5 * sigma * shifted_norm(eigs, b, lambda, degen) - lambda;
  };

  CubicRegResult out;

  const double psi_lo = psi(lam_lo);
  if (psi_lo <= tol * (1.0 + lam_lo)) {
    // No root to the right of lam_lo: either s = 0 (psd, g in range) or the
    // hard case with |s| = 2 lam_lo / sigma.
    Eigen::VectorXd y = shifted_solution(eigs, b, lam_lo, degen);
    if (lam_lo > 0.0) {
      const double target = 2.0 * lam_lo / sigma;
      const double rem = target * target - y.squaredNorm();
      if (rem > 0.0) {
        Eigen::VectorXd v = Q.col(0);
        fix_sign(v);
        out.s = Q * y + std::sqrt(rem) * v;
        out.hard_case = true;
      } else {
        out.s = Q * y;
      }
      out.lambda = lam_lo;
    } else {
      out.s = Q * y;  // psd with sigma|s|/2 below tolerance
      out.lambda = 0.0;
    }
  } else {
    double lo = lam_lo;
    double hi = std::max(1.0, 2.0 * lam_lo);
    while (psi(hi) > 0.0) hi *= 2.0;
    double lambda = 0.5 * (lo + hi);
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
      const double val = psi(lambda);
      if (std::abs(val) <= tol * (1.0 + lambda)) {
        converged = true;
        break;
      }
      if (val > 0.0)
        lo = lambda;
      else
        hi = lambda;
      if (hi - lo <= 1e-15 * (1.0 + hi)) {
        converged = true;  // bracket collapsed to machine precision
        break;
      }

      // Newton on psi; d|d|/dlambda = -sum b_i^2/(l_i+lambda)^3 / |d|.
      const double nrm = shifted_norm(eigs, b, lambda, degen);
      double newton = -1.0;
      if (std::isfinite(nrm) && nrm > 0.0) {
        double dn = 0.0;
        for (int i = 0; i < eigs.size(); ++i) {
          const double den = eigs[i] + lambda;
          if (std::abs(den) <= degen) continue;
          dn += b[i] * b[i] / (den * den * den);
        }
        const double dpsi = -0.5 * sigma * dn / nrm - 1.0;
        if (dpsi < 0.0) newton = lambda - val / dpsi;
      }
      lambda = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
    }
    if (!converged)
      throw NumericalError("cubic-regularization secular iteration did not converge");
    out.s = Q * shifted_solution(eigs, b, lambda, degen);
    out.lambda = lambda;
  }

  out.value = g.dot(out.s) + 0.5 * out.s.dot(H * out.s) +
              sigma / 6.0 * std::pow(out.s.norm(), 3);
  return out;
}

}  // namespace arp
