#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace arp {

/// Raised when an inner solver exceeds its iteration cap.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct TrustRegionResult {
  Eigen::VectorXd d;      // minimizer of g'd + 0.5 d'Hd over |d| <= radius
  double value = 0.0;     // model value at d
  double lambda = 0.0;    // multiplier: (H + lambda I) d = -g, lambda >= 0
  bool hard_case = false;
  bool interior = false;
};

/// Safeguarded secular-equation trust-region solve (More-Sorensen style)
/// based on a full eigendecomposition; handles the hard case by eigenvector
/// completion.  Boundary residual tolerance is relative.
TrustRegionResult solve_trust_region(const Eigen::VectorXd& g,
                                     const Eigen::MatrixXd& H, double radius,
                                     double tol = 1e-10, int max_iter = 200);

struct CubicRegResult {
  Eigen::VectorXd s;      // global minimizer of g's + 0.5 s'Hs + (sigma/6)|s|^3
  double value = 0.0;
  double lambda = 0.0;    // sigma |s| / 2
  bool hard_case = false;
};

/// Global minimizer of the cubic-regularized quadratic via Newton on the
/// secular equation sigma |s(lambda)| / 2 = lambda over
/// (max(0, -lambda_min(H)), inf), hard case by eigenvector completion.
CubicRegResult minimize_cubic_regularized(const Eigen::VectorXd& g,
                                          const Eigen::MatrixXd& H, double sigma,
                                          double tol = 1e-14, int max_iter = 200);

}  // namespace arp
