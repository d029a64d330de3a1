#pragma once

#include <Eigen/Core>

#include "arp/optimality.hpp"
#include "arp/region.hpp"
#include "arp/subproblem.hpp"
#include "arp/tensor.hpp"

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace arp {

/// Supplies f and its derivative tensors, with per-order evaluation counters.
class Oracle {
public:
  virtual ~Oracle() = default;

  virtual int dim() const = 0;
  virtual int max_order() const = 0;

  double value(const Eigen::VectorXd& x) {
    ++f_evals_;
    return value_impl(x);
  }
  SymmetricTensor derivative(const Eigen::VectorXd& x, int order) {
    if (order < 1 || order > max_order())
      throw std::domain_error("Oracle: derivative order out of range");
    if (static_cast<std::size_t>(order) >= deriv_evals_.size())
      deriv_evals_.resize(order + 1, 0);
    ++deriv_evals_[order];
    return derivative_impl(x, order);
  }

  long f_evals() const { return f_evals_; }
  long deriv_evals(int order) const {
    return static_cast<std::size_t>(order) < deriv_evals_.size() ? deriv_evals_[order] : 0;
  }
  long total_deriv_evals() const {
    long acc = 0;
    for (long c : deriv_evals_) acc += c;
    return acc;
  }
  void reset_counters() {
    f_evals_ = 0;
    deriv_evals_.assign(deriv_evals_.size(), 0);
  }

protected:
  virtual double value_impl(const Eigen::VectorXd& x) = 0;
  virtual SymmetricTensor derivative_impl(const Eigen::VectorXd& x, int order) = 0;

private:
  long f_evals_ = 0;
  std::vector<long> deriv_evals_;
};

enum class SolverMode { Adaptive, Prescribed };
enum class SolverStatus { ConvergedStep1, ConvergedStep2, IterationCap };

struct SolverConfig {
  int p = 2;
  int q = 1;
  double beta = 1.0;
  double epsilon = 1e-3;
  double delta_init = 1.0;  // delta_{-1}
  double varpi = 1.0;
  double theta = 100.0;
  double eta1 = 0.05;
  double eta2 = 0.9;
  double gamma1 = 0.5;
  double gamma2 = 2.0;
  double gamma3 = 3.0;
  double sigma0 = 1.0;
  double sigma_min = 1e-8;
  long max_iterations = 100000;
  SolverMode mode = SolverMode::Adaptive;
  double prescribed_sigma = 0.0;  // fixed sigma_k in Prescribed mode

  /// Throws on violated parameter constraints or unsupported
  /// (p, q, region) capability combinations.
  void validate(const FeasibleRegion& region) const;

  /// Prescribed-mode preset used by the slow-instance reproduction:
  /// sigma_k = p!, exact global steps, delta_k = 1, eta1 below the
  /// prescribed-step acceptance ratio (p-q+1)/(p+1).
  static SolverConfig prescribed(int p, int q, double epsilon);
};

struct IterationRecord {
  long k = 0;
  Eigen::VectorXd x;
  double f = 0.0;
  double sigma = 0.0;
  Eigen::VectorXd s;
  double delta = 1.0;
  double rho = 0.0;
  bool successful = false;
  std::optional<double> phi;       // computed only when Step 1 ran
  double taylor_decrease = 0.0;
  double model_decrease = 0.0;
  long f_evals_after = 0;
  std::vector<long> deriv_evals_after;
};

struct SolverReport {
  SolverStatus status = SolverStatus::IterationCap;
  OptimalityCertificate certificate;
  Eigen::VectorXd x_final;
  double f_final = 0.0;
  std::vector<IterationRecord> trace;
  long successful_iterations = 0;
  long unsuccessful_iterations = 0;
  long f_evals = 0;
  std::vector<long> deriv_evals;  // by order
  long total_deriv_evals() const {
    long acc = 0;
    for (long c : deriv_evals) acc += c;
    return acc;
  }
};

/// rho_k = (f_k - f_trial) / taylor_decrease; the denominator is positive by
/// the model decrease bound.
double rho(double f_k, double f_trial, double taylor_decrease);

/// Deterministic policy inside the update intervals:
/// rho >= eta2 -> max(sigma_min, gamma1 sigma); middle branch -> sigma;
/// rho < eta1 -> gamma2 sigma.
double sigma_update(double sigma, double rho, const SolverConfig& config);

/// Runs Algorithm steps 0-4; `algorithm2` switches the q = 2 specialization
/// (delta fixed to 1, inner test via one unit trust-region solve).
SolverReport solve(Oracle& oracle, const Eigen::VectorXd& x0,
                   const FeasibleRegion& region, const SolverConfig& config,
                   bool algorithm2 = false);

struct AuditResult {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Post-hoc trace verification: iteration-count inequality, sigma bound
/// (when L is known), step lower bound, monotone f over successful
/// iterations, and the per-iteration guaranteed decrease.
AuditResult audit_run(const SolverReport& report, std::optional<double> L,
                      const SolverConfig& config);

/// Worst-case bound on the total iteration count; evaluations of f are at
/// most this plus one.
double theoretical_eval_bound(const SolverConfig& config, double f0, double f_low,
                              double L);

}  // namespace arp
