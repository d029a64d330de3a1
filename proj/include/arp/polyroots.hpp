#pragma once

#include <vector>

namespace arp {

/// Real roots of c[0] + c[1] x + ... + c[d] x^d via the companion matrix,
/// polished with a few Newton steps.  Near-zero leading coefficients are
/// trimmed relative to the largest coefficient magnitude.
std::vector<double> real_roots(const std::vector<double>& coeffs,
                               double imag_tol = 1e-8);

/// Horner evaluation of the polynomial and its derivatives.
double poly_eval(const std::vector<double>& coeffs, double x);
std::vector<double> poly_derivative(const std::vector<double>& coeffs);

}  // namespace arp
