#include "arp/tensor.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace arp {

namespace {

// Binomial coefficients, exact in double for the small sizes used here.
double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

double generalized_factorial(int k, double beta) {
  if (k < 0) throw std::domain_error("generalized_factorial: k must be >= 0");
  if (beta <= 0.0 || beta > 1.0)
    throw std::domain_error("generalized_factorial: beta must be in (0,1]");
  double r = 1.0;
  for (int l = 1; l <= k; ++l) r *= beta + l;
  return r;
}

SymmetricTensor::SymmetricTensor(int order, int dim) : order_(order), dim_(dim) {
  if (order < 0) throw std::invalid_argument("SymmetricTensor: negative order");
  if (dim <= 0) throw std::invalid_argument("SymmetricTensor: dim must be positive");
  entries_.assign(storage_size(order, dim), 0.0);
}

std::size_t SymmetricTensor::storage_size(int order, int dim) {
  return static_cast<std::size_t>(binom(dim + order - 1, order));
}

SymmetricTensor SymmetricTensor::scalar(double value) {
  SymmetricTensor t(0, 1);
  t.entries_[0] = value;
  return t;
}

SymmetricTensor SymmetricTensor::from_vector(const Eigen::VectorXd& v) {
  SymmetricTensor t(1, static_cast<int>(v.size()));
  for (int i = 0; i < v.size(); ++i) t.entries_[i] = v[i];
  return t;
}

SymmetricTensor SymmetricTensor::from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("from_matrix: not square");
  if (!m.isApprox(m.transpose(), 1e-12))
    throw std::invalid_argument("from_matrix: not symmetric");
  SymmetricTensor t(2, static_cast<int>(m.rows()));
  std::vector<int> idx = {0, 0};
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i; j < m.cols(); ++j) {
      idx[0] = i;
      idx[1] = j;
      t.set(idx, 0.5 * (m(i, j) + m(j, i)));
    }
  return t;
}

std::size_t SymmetricTensor::rank(std::span<const int> sorted_idx) const {
  // Lexicographic rank among sorted multi-indices over {0..dim-1}.
  std::size_t r = 0;
  int lo = 0;
  const int l = static_cast<int>(sorted_idx.size());
  for (int pos = 0; pos < l; ++pos) {
    const int remaining = l - pos - 1;
    for (int w = lo; w < sorted_idx[pos]; ++w)
      r += storage_size(remaining, dim_ - w);
    lo = sorted_idx[pos];
  }
  return r;
}

double SymmetricTensor::operator()(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != order_)
    throw std::invalid_argument("SymmetricTensor: index length mismatch");
  std::vector<int> s(idx.begin(), idx.end());
  for (int i : s)
    if (i < 0 || i >= dim_) throw std::out_of_range("SymmetricTensor: index out of range");
  std::sort(s.begin(), s.end());
  return entries_[rank(s)];
}

void SymmetricTensor::set(std::span<const int> idx, double value) {
  if (static_cast<int>(idx.size()) != order_)
    throw std::invalid_argument("SymmetricTensor: index length mismatch");
  std::vector<int> s(idx.begin(), idx.end());
  for (int i : s)
    if (i < 0 || i >= dim_) throw std::out_of_range("SymmetricTensor: index out of range");
  std::sort(s.begin(), s.end());
  entries_[rank(s)] = value;
}

std::vector<int> SymmetricTensor::first_index(int order) {
  return std::vector<int>(order, 0);
}

bool SymmetricTensor::next_index(std::vector<int>& idx, int dim) {
  // Successor among sorted multi-indices: increment rightmost position that
  // can grow, then reset everything to its right to the same value.
  for (int pos = static_cast<int>(idx.size()) - 1; pos >= 0; --pos) {
    if (idx[pos] < dim - 1) {
      ++idx[pos];
      for (std::size_t j = pos + 1; j < idx.size(); ++j) idx[j] = idx[pos];
      return true;
    }
  }
  return false;
}

double SymmetricTensor::index_multiplicity(std::span<const int> sorted_idx) {
  double mult = factorial(static_cast<int>(sorted_idx.size()));
  int run = 1;
  for (std::size_t i = 1; i <= sorted_idx.size(); ++i) {
    if (i < sorted_idx.size() && sorted_idx[i] == sorted_idx[i - 1]) {
      ++run;
    } else {
      mult /= factorial(run);
      run = 1;
    }
  }
  return mult;
}

double SymmetricTensor::apply(const std::vector<Eigen::VectorXd>& vectors) const {
  if (static_cast<int>(vectors.size()) != order_)
    throw std::invalid_argument("tensor apply: wrong number of vectors");
  for (const auto& v : vectors)
    if (v.size() != dim_) throw std::invalid_argument("tensor apply: vector dim mismatch");
  if (order_ == 0) return entries_[0];

  // Loop over all full index tuples; dims targeted are small (n<=10, p<=4).
  std::vector<int> tuple(order_, 0);
  std::vector<int> sorted(order_);
  double acc = 0.0;
  while (true) {
    double prod = 1.0;
    for (int i = 0; i < order_; ++i) prod *= vectors[i][tuple[i]];
    if (prod != 0.0) {
      sorted.assign(tuple.begin(), tuple.end());
      std::sort(sorted.begin(), sorted.end());
      acc += entries_[rank(sorted)] * prod;
    }
    int pos = order_ - 1;
    while (pos >= 0 && tuple[pos] == dim_ - 1) tuple[pos--] = 0;
    if (pos < 0) break;
    ++tuple[pos];
  }
  return acc;
}

double SymmetricTensor::apply_power(const Eigen::VectorXd& s) const {
  if (s.size() != dim_) throw std::invalid_argument("apply_power: dim mismatch");
  if (order_ == 0) return entries_[0];
  // Repeated argument: sum over canonical indices with multiplicity.
  double acc = 0.0;
  std::vector<int> idx = first_index(order_);
  std::size_t r = 0;
  do {
    double prod = 1.0;
    for (int i : idx) prod *= s[i];
    acc += entries_[r] * index_multiplicity(idx) * prod;
    ++r;
  } while (next_index(idx, dim_));
  return acc;
}

SymmetricTensor SymmetricTensor::contract(const Eigen::VectorXd& s, int times) const {
  if (times < 0 || times > order_)
    throw std::invalid_argument("contract: times out of range");
  if (s.size() != dim_) throw std::invalid_argument("contract: dim mismatch");
  if (times == 0) return *this;

  const int out_order = order_ - times;
  SymmetricTensor out(out_order, dim_);
  std::vector<int> alpha = first_index(out_order);
  std::vector<int> full(order_);
  std::size_t out_r = 0;
  do {
    // Sum over the contracted slots with multiplicity on the repeated vector.
    double acc = 0.0;
    std::vector<int> beta = first_index(times);
    do {
      double prod = index_multiplicity(beta);
      for (int i : beta) prod *= s[i];
      std::merge(alpha.begin(), alpha.end(), beta.begin(), beta.end(), full.begin());
      acc += entries_[rank(full)] * prod;
    } while (next_index(beta, dim_));
    out.entries_[out_r++] = acc;
  } while (next_index(alpha, dim_));
  return out;
}

Eigen::VectorXd SymmetricTensor::as_vector() const {
  if (order_ != 1) throw std::domain_error("as_vector: order != 1");
  Eigen::VectorXd v(dim_);
  for (int i = 0; i < dim_; ++i) v[i] = entries_[i];
  return v;
}

Eigen::MatrixXd SymmetricTensor::as_matrix() const {
  if (order_ != 2) throw std::domain_error("as_matrix: order != 2");
  Eigen::MatrixXd m(dim_, dim_);
  std::vector<int> idx(2);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      idx[0] = i;
      idx[1] = j;
      m(i, j) = (*this)(idx);
    }
  return m;
}

SymmetricTensor& SymmetricTensor::operator+=(const SymmetricTensor& other) {
  if (other.order_ != order_ || other.dim_ != dim_)
    throw std::invalid_argument("tensor +=: shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

SymmetricTensor& SymmetricTensor::operator*=(double a) {
  for (double& e : entries_) e *= a;
  return *this;
}

double SymmetricTensor::norm(double tolerance, unsigned seed) const {
  if (order_ == 0) throw std::domain_error("tensor norm: order 0 has no induced norm");
  if (order_ == 1) return as_vector().norm();
  if (order_ == 2) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(as_matrix());
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }

  // Shifted symmetric power iteration, maximizing sign * S[v]^order over the
  // unit sphere for both signs, 32 seeded restarts each.
  double shift = 0.0;
  {
    std::vector<int> idx = first_index(order_);
    std::size_t r = 0;
    do {
      shift += index_multiplicity(idx) * entries_[r] * entries_[r];
      ++r;
    } while (next_index(idx, dim_));
    shift = order_ * std::sqrt(shift) + 1.0;
  }

  std::mt19937 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  double best = 0.0;
  constexpr int kRestarts = 32;
  for (int restart = 0; restart < 2 * kRestarts; ++restart) {
    const double sign = (restart < kRestarts) ? 1.0 : -1.0;
    Eigen::VectorXd v(dim_);
    for (int i = 0; i < dim_; ++i) v[i] = nd(gen);
    v.normalize();
    double lam = sign * apply_power(v);
    for (int it = 0; it < 500; ++it) {
      Eigen::VectorXd g = contract(v, order_ - 1).as_vector();
      Eigen::VectorXd w = sign * g + shift * v;
      const double wn = w.norm();
      if (wn == 0.0) break;
      v = w / wn;
      const double lam_new = sign * apply_power(v);
      if (std::abs(lam_new - lam) <= tolerance * (1.0 + std::abs(lam_new))) {
        lam = lam_new;
        break;
      }
      lam = lam_new;
    }
    best = std::max(best, std::abs(apply_power(v)));
  }
  return best;
}

void write_tensor(std::ostream& os, const SymmetricTensor& t) {
  os << t.order() << ' ' << t.dim() << '\n';
  os.precision(17);
  for (double e : t.raw()) os << e << '\n';
}

SymmetricTensor read_tensor(std::istream& is) {
  int order = 0, dim = 0;
  if (!(is >> order >> dim)) throw std::runtime_error("read_tensor: bad header");
  SymmetricTensor t(order, dim);
  for (double& e : t.raw())
    if (!(is >> e)) throw std::runtime_error("read_tensor: truncated entries");
  return t;
}

double TaylorModel::eval(const Eigen::VectorXd& s) const {
  if (s.size() != base_point.size())
    throw std::invalid_argument("taylor eval: dim mismatch");
  double acc = f0;
  double fact = 1.0;
  for (int l = 1; l <= degree(); ++l) {
    fact *= l;
    acc += derivs[l - 1].apply_power(s) / fact;
  }
  return acc;
}

SymmetricTensor TaylorModel::derivative(const Eigen::VectorXd& s, int j) const {
  if (j < 1 || j > degree())
    throw std::domain_error("taylor derivative: j out of range");
  if (s.size() != base_point.size())
    throw std::invalid_argument("taylor derivative: dim mismatch");
  SymmetricTensor out(j, dim());
  for (int l = j; l <= degree(); ++l) {
    SymmetricTensor term = derivs[l - 1].contract(s, l - j);
    term *= 1.0 / factorial(l - j);
    out += term;
  }
  return out;
}

void TaylorModel::check_consistent() const {
  for (int l = 1; l <= degree(); ++l) {
    if (derivs[l - 1].order() != l || derivs[l - 1].dim() != dim())
      throw std::invalid_argument("TaylorModel: derivative tensor shape mismatch");
  }
}

double regpower_derivative_norm(int p, double beta, int j, double s_norm) {
  if (j < 0 || j > p + 1)
    throw std::domain_error("regpower_derivative_norm: j out of range");
  if (s_norm < 0.0)
    throw std::domain_error("regpower_derivative_norm: negative norm");
  if (j == p + 1) {
    if (s_norm == 0.0 && beta < 1.0)
      return std::numeric_limits<double>::infinity();
    return beta * generalized_factorial(p, beta) * std::pow(s_norm, beta - 1.0);
  }
  const double ratio = generalized_factorial(p, beta) / generalized_factorial(p - j, beta);
  return ratio * std::pow(s_norm, p - j + beta);
}

}  // namespace arp
