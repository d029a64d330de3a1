#pragma once

#include <Eigen/Core>

#include "arp/region.hpp"
#include "arp/tensor.hpp"

#include <utility>

namespace arp {

/// chi_q(delta) = sum_{l=1}^q delta^l / l!.
double chi(int q, double delta);

struct PhiResult {
  double phi = 0.0;          // largest Taylor decrease within the feasible ball
  Eigen::VectorXd argmin_d;  // feasible d achieving it, |d| <= delta
};

/// First-order measure: |grad| * delta on the whole space; exact linear
/// minimization over the variant geometry otherwise.
double phi_order1(const Eigen::VectorXd& grad, double delta,
                  const FeasibleRegion& region, const Eigen::VectorXd& x);
PhiResult phi_order1_with_arg(const Eigen::VectorXd& grad, double delta,
                              const FeasibleRegion& region, const Eigen::VectorXd& x);

/// Second-order measure via an exact trust-region solve of radius delta.
/// Supported on the whole space (any n) and on line-like regions via the
/// univariate path.
PhiResult phi_order2(const Eigen::VectorXd& grad, const SymmetricTensor& hess,
                     double delta, const FeasibleRegion& region,
                     const Eigen::VectorXd& x);

/// Exact global minimization of the degree-j univariate Taylor polynomial
/// over the feasible |d| <= delta, via companion-matrix stationary points
/// plus interval endpoints.  Returns (phi, argmin d).
std::pair<double, double> phi_univariate(const TaylorModel& T, int j, double delta,
                                         const FeasibleRegion& region, double x);

/// Same minimization on raw Taylor coefficients c_l = deriv_l / l!
/// (l = 1..j) with an explicit feasible step range.
std::pair<double, double> phi_univariate_coeffs(const std::vector<double>& taylor_coeffs,
                                                double delta, double lo, double hi);

/// Termination test phi <= epsilon * chi_q(delta), with a tiny relative
/// guard so that data constructed to meet the threshold exactly is not
/// rejected by floating-point noise.
bool check_termination(double phi, double epsilon, int q, double delta);

/// (radius, lower_bound) of the guaranteed near-minimizer neighbourhood:
/// radius = min[delta, ((q+1)! eps / L)^{1/(q+beta-1)}],
/// lower_bound = f_x - 2 eps chi_q(delta).
std::pair<double, double> near_minimizer_certificate(double epsilon, double delta,
                                                     int q, double beta, double L,
                                                     double f_x);

struct OptimalityCertificate {
  double phi = 0.0;
  double delta = 1.0;
  double epsilon = 0.0;
  int q = 1;
  bool satisfied = false;
  Eigen::VectorXd argmin_d;
};

}  // namespace arp
