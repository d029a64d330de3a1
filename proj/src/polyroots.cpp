#include "arp/polyroots.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace arp {

double poly_eval(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> poly_derivative(const std::vector<double>& coeffs) {
  if (coeffs.size() <= 1) return {};
  std::vector<double> d(coeffs.size() - 1);
  for (std::size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = coeffs[i] * static_cast<double>(i);
  return d;
}

std::vector<double> real_roots(const std::vector<double>& coeffs, double imag_tol) {
  double scale = 0.0;
  for (double c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return {};

  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs[deg]) <= 1e-14 * scale) --deg;
  if (deg <= 0) return {};
  if (deg == 1) return {-coeffs[0] / coeffs[1]};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[i] / coeffs[deg];

  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
  const auto vals = es.eigenvalues();

  const std::vector<double> dcoeffs = poly_derivative(coeffs);
  std::vector<double> roots;
  for (int i = 0; i < vals.size(); ++i) {
    if (std::abs(vals[i].imag()) > imag_tol * (1.0 + std::abs(vals[i].real()))) continue;
    double x = vals[i].real();
    for (int it = 0; it < 3; ++it) {
      const double f = poly_eval(coeffs, x);
      const double df = poly_eval(dcoeffs, x);
      if (df == 0.0) break;
      const double step = f / df;
      if (!std::isfinite(step)) break;
      x -= step;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace arp
