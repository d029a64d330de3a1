#include "arp/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace arp {

PolynomialOracle::PolynomialOracle(int dim, std::vector<Term> terms, int max_order)
    : dim_(dim), max_order_(max_order), terms_(std::move(terms)) {
  for (const auto& t : terms_)
    if (static_cast<int>(t.exponents.size()) != dim)
      throw std::invalid_argument("PolynomialOracle: exponent arity mismatch");
}

double PolynomialOracle::value_impl(const Eigen::VectorXd& x) {
  double acc = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff;
    for (int m = 0; m < dim_; ++m)
      for (int e = 0; e < t.exponents[m]; ++e) v *= x[m];
    acc += v;
  }
  return acc;
}

SymmetricTensor PolynomialOracle::derivative_impl(const Eigen::VectorXd& x, int order) {
  SymmetricTensor out(order, dim_);
  std::vector<int> idx = SymmetricTensor::first_index(order);
  std::vector<int> cnt(dim_);
  do {
    std::fill(cnt.begin(), cnt.end(), 0);
    for (int i : idx) ++cnt[i];
    double entry = 0.0;
    for (const auto& t : terms_) {
      double v = t.coeff;
      bool alive = true;
      for (int m = 0; m < dim_ && alive; ++m) {
        int e = t.exponents[m];
        for (int d = 0; d < cnt[m]; ++d) v *= e--;
        if (e < 0) alive = false;
        for (int d = 0; d < e; ++d) v *= x[m];
      }
      if (alive) entry += v;
    }
    out.set(idx, entry);
  } while (SymmetricTensor::next_index(idx, dim_));
  return out;
}

namespace {

using Term = PolynomialOracle::Term;

std::function<std::unique_ptr<Oracle>()> poly(int dim, std::vector<Term> terms,
                                              int max_order) {
  return [=]() { return std::make_unique<PolynomialOracle>(dim, terms, max_order); };
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<int>(v.size()));
  int i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

std::vector<ProblemSpec> make_registry() {
  std::vector<ProblemSpec> reg;

  // s^2 (s-1)^2: global minimizers at 0 and 1.
  reg.push_back({"quartic1d",
                 "univariate double-well s^2(s-1)^2",
                 poly(1, {{1, {4}}, {-2, {3}}, {1, {2}}}, 4),
                 FeasibleRegion::whole_space(1),
                 vec({0.4}),
                 4,
                 {std::nullopt, std::nullopt, 24.0, 0.0},
                 0.0});

  // (s^2 - 1)^2: symmetric wells at +-1.
  reg.push_back({"quartic1d-well",
                 "univariate double-well (s^2-1)^2",
                 poly(1, {{1, {4}}, {-2, {2}}, {1, {0}}}, 4),
                 FeasibleRegion::whole_space(1),
                 vec({0.3}),
                 4,
                 {std::nullopt, std::nullopt, 24.0, 0.0},
                 0.0});

  // 1/2 x'Ax - b'x with A = [[3,1],[1,2]], b = (1,-1); minimum -7/10.
  reg.push_back({"quadratic2",
                 "strictly convex quadratic in R^2",
                 poly(2,
                      {{1.5, {2, 0}}, {1.0, {1, 1}}, {1.0, {0, 2}},
                       {-1.0, {1, 0}}, {1.0, {0, 1}}},
                      2),
                 FeasibleRegion::whole_space(2),
                 vec({2.0, 2.0}),
                 2,
                 {std::nullopt, 0.0},
                 -0.7});

  // Separable convex quadratic in R^5, A = diag(1..5), b = 1.
  {
    std::vector<Term> terms;
    double f_low = 0.0;
    for (int i = 0; i < 5; ++i) {
      std::vector<int> sq(5, 0), lin(5, 0);
      sq[i] = 2;
      lin[i] = 1;
      terms.push_back({0.5 * (i + 1.0), sq});
      terms.push_back({-1.0, lin});
      f_low -= 0.5 / (i + 1.0);
    }
    reg.push_back({"quadratic5",
                   "separable convex quadratic in R^5",
                   poly(5, terms, 2),
                   FeasibleRegion::whole_space(5),
                   Eigen::VectorXd::Constant(5, 2.0),
                   2,
                   {std::nullopt, 0.0},
                   f_low});
  }

  // 100 (x2 - x1^2)^2 + (1 - x1)^2 with tensors to order 3.
  const std::vector<Term> rosen = {{100, {0, 2}}, {-200, {2, 1}}, {100, {4, 0}},
                                   {1, {0, 0}},   {-2, {1, 0}},   {1, {2, 0}}};
  reg.push_back({"rosenbrock",
                 "Rosenbrock valley in R^2 (order-3 tensors)",
                 poly(2, rosen, 3),
                 FeasibleRegion::whole_space(2),
                 vec({-1.2, 1.0}),
                 3,
                 {},
                 0.0});
  reg.push_back({"rosenbrock-ray",
                 "Rosenbrock restricted to a feasible ray",
                 poly(2, rosen, 3),
                 FeasibleRegion::ray(vec({-1.2, 1.0}), vec({0.6, 0.8})),
                 vec({-1.2, 1.0}),
                 3,
                 {std::nullopt, std::nullopt, 2400.0},
                 0.0});

  // (1/2 x1^2 - x2)(x1^2 - x2): origin minimizes every line, yet
  // f(t, 3/4 t^2) = -t^4/16 < 0.
  reg.push_back({"hancock-peano",
                 "Hancock-Peano bivariate quartic (order-4 tensors)",
                 poly(2, {{0.5, {4, 0}}, {-1.5, {2, 1}}, {1.0, {0, 2}}}, 4),
                 FeasibleRegion::whole_space(2),
                 vec({1.0, 2.0}),
                 4,
                 {std::nullopt, std::nullopt, 12.0, 0.0},
                 std::nullopt});

  return reg;
}

}  // namespace

const std::vector<ProblemSpec>& registry() {
  static const std::vector<ProblemSpec> reg = make_registry();
  return reg;
}

const ProblemSpec& find_problem(const std::string& name) {
  for (const auto& spec : registry())
    if (spec.name == name) return spec;
  throw std::invalid_argument("unknown problem: " + name);
}

}  // namespace arp
