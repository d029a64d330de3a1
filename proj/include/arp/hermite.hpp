#pragma once

#include <Eigen/Core>

#include "arp/driver.hpp"
#include "arp/region.hpp"

#include <iosfwd>
#include <memory>
#include <vector>

namespace arp {

/// One Hermite segment: pi(tau) = sum_i c_i tau^i on tau in [0, s],
/// attached at the global coordinate x.
struct HermiteSegment {
  double x = 0.0;
  double s = 1.0;
  std::vector<double> coeffs;  // c_0 .. c_{2p+1}

  int degree_p() const { return static_cast<int>(coeffs.size()) / 2 - 1; }
  /// order-th derivative of pi at tau (Horner).
  double eval(double tau, int order = 0) const;
};

/// Piecewise degree-(2p+1) polynomial with constant tails, C^p at
/// breakpoints.
struct PiecewisePolynomial {
  std::vector<HermiteSegment> segments;  // ordered by x
  double left_tail = 0.0;
  double right_tail = 0.0;

  double eval(double x, int order = 0) const;
};

/// The (p+1)x(p+1) matrix with a_{i,j} = (p+j+1)!/(p+j+1-i)!, i,j = 0..p.
/// Throws std::range_error for p > 10 (factorial overflow territory).
Eigen::MatrixXd build_Ap(int p);

/// Degree-(2p+1) interpolant matching derivatives 0..p at both ends of
/// [0, s]: c_i = f0[i]/i! for i <= p, upper coefficients from the A_p
/// system solved in scaled variables c_{p+1+m} s^m.  Throws NumericalError
/// when the end conditions fail to verify at 1e-7 relative.
HermiteSegment hermite_interpolate(const std::vector<double>& f0_derivs,
                                   const std::vector<double>& f1_derivs,
                                   double s, double x_left = 0.0);

/// L_p = (p+1)(2p+1)!/p! |A_p^{-1}|_inf kappa_f, valid when the segment's
/// defining data satisfies |f1^{(j)} - T_p^{(j)}(0,s)| <= kappa_f s^{p-j+1}
/// (throws std::domain_error naming the failing j otherwise).  Also samples
/// p-th-derivative difference quotients on ~1e4 pairs and asserts <= L_p.
double lipschitz_certificate(const HermiteSegment& segment, double kappa_f);

/// The slow-convergence objective: k_eps + 1 nodes of prescribed Taylor
/// data joined by Hermite segments, with prolongation segments to constant
/// tails on both sides.
struct SlowInstance {
  int p = 1;
  int q = 1;
  double epsilon = 0.5;
  long k_eps = 0;
  std::vector<double> nodes;                     // x_0 .. x_{k_eps}
  std::vector<std::vector<double>> node_derivs;  // f_k^{(0..p)} per node
  std::vector<double> steps;                     // s_0 .. s_{k_eps - 1}
  PiecewisePolynomial interpolant;
  double sigma = 1.0;  // prescribed p!

  double f_upper() const;  // 2 [2 q chi_q(1)]^{(p+1)/(p-q+1)}, cf. (5.18)
};

/// Constructs and fully verifies the slow instance for (p, q, epsilon):
/// node data, steps, Hermite segments, prolongation widths doubled until
/// the data bound holds, range/step/data/gluing invariants all asserted.
/// Throws std::runtime_error naming the violated relation otherwise.
SlowInstance build_slow_instance(int p, int q, double epsilon);

/// Oracle evaluating a piecewise interpolant and its derivatives 1..p;
/// evaluations at a segment's left endpoint (within 1e-9) use tau = 0 so
/// node data is reproduced exactly.
std::unique_ptr<Oracle> oracle_from_interpolant(const PiecewisePolynomial& f, int p);

struct EmbeddedProblem {
  std::unique_ptr<Oracle> oracle;
  FeasibleRegion region;
  Eigen::VectorXd x0;  // embedded image of the 1-D start x_0
};

/// Promotes the instance to R^n along a unit direction: f(x) = g(u'x),
/// derivative tensors g^{(j)}(u'x) u^{(x) j}.  Region is the whole space or
/// the ray {t u : t >= 0}.
EmbeddedProblem embed_instance(const SlowInstance& inst, int n,
                               const Eigen::VectorXd& direction,
                               FeasibleRegion::Kind region_kind);

/// Plain-text serialization, round-trip exact.
void write_instance(std::ostream& os, const SlowInstance& inst);
SlowInstance read_instance(std::istream& is);

}  // namespace arp
