#pragma once

#include <Eigen/Core>

#include "arp/optimality.hpp"
#include "arp/region.hpp"
#include "arp/tensor.hpp"

#include <vector>

namespace arp {

/// Regularized Taylor model m(s) = T_p(x, s) + sigma/(p+beta)! |s|^{p+beta}.
struct RegularizedModel {
  TaylorModel taylor;
  double sigma = 1.0;
  int p = 2;
  double beta = 1.0;

  double value(const Eigen::VectorXd& s) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& s) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& s) const;
};

enum class StopReason { LongStep, InnerOptimality, NoDescentExists };

struct StepResult {
  Eigen::VectorXd s;
  double delta_k = 1.0;
  double model_decrease = 0.0;
  StopReason reason = StopReason::LongStep;
};

/// Taylor coefficients c_l = D_l[u]^l / l! of the model restricted to a line
/// through the base point (l = 1..p, constant term dropped).
std::vector<double> restrict_taylor(const TaylorModel& T, const Eigen::VectorXd& u);

struct UniMinResult {
  double t = 0.0;         // global minimizer of the restricted model
  double decrease = 0.0;  // m(0) - m(t), >= 0
  bool descent = false;   // strict decrease found
};

/// Exact global minimization of c_1 t + ... + c_p t^p +
/// sigma/(p+beta)! |t|^{p+beta} over t in [lo, hi].  For beta = 1 the two
/// half-line polynomial pieces are minimized via companion-matrix roots;
/// for beta < 1 by derivative sign changes on a multi-scale grid plus
/// bisection.  Ties against t = 0 report no descent; directional ties pick
/// the largest t.
UniMinResult minimize_univariate_decrease(const std::vector<double>& taylor_coeffs,
                                          double sigma, int p, double beta,
                                          double lo, double hi);

/// Exact global feasible minimizer for a univariate model.
StepResult minimize_model_univariate(const RegularizedModel& m,
                                     const FeasibleRegion& region);

/// Global minimizer of the cubic model (p = 2, beta = 1) on the whole space.
StepResult minimize_model_cubic(const RegularizedModel& m);

/// phi_{m,q}^delta at the point t of the line-restricted model.  lo/hi is
/// the feasible step range from the base point (range for t itself).
double model_phi_line(const std::vector<double>& taylor_coeffs, double sigma,
                      int p, double beta, double t, int q, double delta,
                      double lo, double hi);

/// phi_{m,q}^delta(s) for the full model, q <= 2 (whole space / box) or any
/// q on line-like regions.
double model_phi(const RegularizedModel& m, const Eigen::VectorXd& s, int q,
                 double delta, const FeasibleRegion& region,
                 const Eigen::VectorXd& x);

/// Step acceptance: the long-step test first, then the largest delta on the
/// geometric grid {1, 1/2, ..., 2^-20} satisfying the inner-optimality test.
/// Throws NumericalError when no admissible delta exists.
StepResult check_step_conditions(StepResult step, const RegularizedModel& m, int q,
                                 double epsilon, double varpi, double theta,
                                 const FeasibleRegion& region, const Eigen::VectorXd& x);

/// Relaxed q = 2 inner test: one unit-radius trust-region solve on the
/// order-2 Taylor of m at s; true iff its minimum value is at least
/// -(3 theta / 2) |s|^{p-1} / (p-1)!.
bool check_inner_tr_condition(const RegularizedModel& m, const Eigen::VectorXd& s,
                              double theta, int p);

}  // namespace arp
