#pragma once

#include <Eigen/Core>

#include "arp/driver.hpp"
#include "arp/region.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace arp {

/// Multivariate polynomial as a sum of monomials; derivative tensors of any
/// order come out exactly by repeated monomial differentiation.
class PolynomialOracle final : public Oracle {
public:
  struct Term {
    double coeff;
    std::vector<int> exponents;  // one per coordinate
  };

  PolynomialOracle(int dim, std::vector<Term> terms, int max_order);

  int dim() const override { return dim_; }
  int max_order() const override { return max_order_; }

protected:
  double value_impl(const Eigen::VectorXd& x) override;
  SymmetricTensor derivative_impl(const Eigen::VectorXd& x, int order) override;

private:
  int dim_;
  int max_order_;
  std::vector<Term> terms_;
};

struct ProblemSpec {
  std::string name;
  std::string description;
  std::function<std::unique_ptr<Oracle>()> make_oracle;
  FeasibleRegion region;
  Eigen::VectorXd x0;
  int p_max = 2;
  /// Hoelder/Lipschitz constant of the order-p derivative, when known;
  /// indexed by p - 1.
  std::vector<std::optional<double>> L_by_p;
  std::optional<double> f_low;
};

/// Built-in analytic problems: 1-D quartic, convex quadratics, Rosenbrock
/// (full space and along a ray), Hancock-Peano.
const std::vector<ProblemSpec>& registry();

const ProblemSpec& find_problem(const std::string& name);

}  // namespace arp
