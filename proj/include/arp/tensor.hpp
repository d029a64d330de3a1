#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace arp {

/// Generalized factorial (k+beta)! = prod_{l=1}^{k} (beta + l), empty product = 1.
/// With beta = 1 this reproduces the standard (k+1)!/1! pattern.
double generalized_factorial(int k, double beta);

/// Dense symmetric tensor of a given order over R^n.
///
/// Entries are stored once per canonical multi-index (indices sorted
/// non-decreasing, enumerated lexicographically).  Order 0 is a scalar,
/// order 1 a vector of length n, order 2 a symmetric n-by-n matrix.
class SymmetricTensor {
public:
  SymmetricTensor(int order, int dim);

  static SymmetricTensor scalar(double value);
  static SymmetricTensor from_vector(const Eigen::VectorXd& v);
  static SymmetricTensor from_matrix(const Eigen::MatrixXd& m);

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }

  /// Number of canonical entries for a given (order, dim).
  static std::size_t storage_size(int order, int dim);

  /// Entry access by multi-index (any ordering; sorted internally).
  double operator()(std::span<const int> idx) const;
  void set(std::span<const int> idx, double value);

  std::span<const double> raw() const { return entries_; }
  std::span<double> raw() { return entries_; }

  /// Full multilinear contraction S[v_1, ..., v_order].
  double apply(const std::vector<Eigen::VectorXd>& vectors) const;

  /// S[s]^order with a single repeated vector.
  double apply_power(const Eigen::VectorXd& s) const;

  /// Contract `times` slots with s, producing an order-(order-times) tensor.
  SymmetricTensor contract(const Eigen::VectorXd& s, int times) const;

  Eigen::VectorXd as_vector() const;  // order 1
  Eigen::MatrixXd as_matrix() const;  // order 2

  SymmetricTensor& operator+=(const SymmetricTensor& other);
  SymmetricTensor& operator*=(double a);

  /// Induced norm max_{|v|=1} |S[v]^order|.
  /// Order 1: Euclidean norm.  Order 2: spectral radius.  Order >= 3:
  /// multi-start shifted symmetric power iteration (32 seeded restarts).
  double norm(double tolerance = 1e-10, unsigned seed = 0) const;

  /// Canonical multi-index enumeration: first index and in-place successor.
  static std::vector<int> first_index(int order);
  static bool next_index(std::vector<int>& idx, int dim);

  /// Number of distinct permutations of a sorted multi-index.
  static double index_multiplicity(std::span<const int> sorted_idx);

  bool operator==(const SymmetricTensor& other) const = default;

private:
  std::size_t rank(std::span<const int> sorted_idx) const;

  int order_;
  int dim_;
  std::vector<double> entries_;
};

/// Plain-text tensor format: header "order n" then canonical entries,
/// one per line, full decimal precision.
void write_tensor(std::ostream& os, const SymmetricTensor& t);
SymmetricTensor read_tensor(std::istream& is);

/// Taylor polynomial T_p(x, s) = f0 + sum_{l=1}^p (1/l!) D_l[s]^l.
struct TaylorModel {
  Eigen::VectorXd base_point;
  double f0 = 0.0;
  std::vector<SymmetricTensor> derivs;  // derivs[l-1] has order l

  int degree() const { return static_cast<int>(derivs.size()); }
  int dim() const { return static_cast<int>(base_point.size()); }

  double eval(const Eigen::VectorXd& s) const;

  /// j-th derivative tensor of s -> T(s):
  /// sum_{l=j}^p (1/(l-j)!) D_l[s]^{l-j}, an order-j tensor.
  SymmetricTensor derivative(const Eigen::VectorXd& s, int j) const;

  void check_consistent() const;  // throws on order/dim mismatch
};

/// Norm of the j-th derivative of s -> |s|^{p+beta}:
///   j <= p:   (p+beta)!/(p-j+beta)! * s_norm^{p-j+beta}
///   j = p+1:  beta * (p+beta)! * s_norm^{beta-1}
/// The j = p+1 case with s_norm = 0 and beta < 1 returns +infinity.
double regpower_derivative_norm(int p, double beta, int j, double s_norm);

}  // namespace arp
