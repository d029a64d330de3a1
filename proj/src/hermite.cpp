#include "arp/hermite.hpp"

#include "arp/optimality.hpp"
#include "arp/trust_region.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace arp {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// tau = 0 detection radius around segment left endpoints.
double snap_tol(double x) { return 1e-9 * (1.0 + std::abs(x)); }

// Derivatives 0..p of the Taylor polynomial with data f^{(0..p)} at offset s.
std::vector<double> taylor_derivs(const std::vector<double>& data, double s) {
  const int p = static_cast<int>(data.size()) - 1;
  std::vector<double> out(p + 1, 0.0);
  for (int j = 0; j <= p; ++j)
    for (int l = j; l <= p; ++l)
      out[j] += data[l] / factorial(l - j) * std::pow(s, l - j);
  return out;
}

}  // namespace

double HermiteSegment::eval(double tau, int order) const {
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (order > deg) return 0.0;
  double acc = 0.0;
  for (int i = deg; i >= order; --i)
    acc = acc * tau + coeffs[i] * factorial(i) / factorial(i - order);
  return acc;
}

double PiecewisePolynomial::eval(double x, int order) const {
  if (segments.empty())
    throw std::logic_error("PiecewisePolynomial: no segments");
  if (x <= segments.front().x - snap_tol(x))
    return order == 0 ? left_tail : 0.0;
  const HermiteSegment& last = segments.back();
  if (x >= last.x + last.s + snap_tol(x))
    return order == 0 ? right_tail : 0.0;

  // Last segment whose left endpoint is <= x (with snap).
  std::size_t lo = 0, hi = segments.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (segments[mid].x <= x + snap_tol(x))
      lo = mid;
    else
      hi = mid;
  }
  const HermiteSegment& seg = segments[lo];
  const double tau = (std::abs(x - seg.x) <= snap_tol(x)) ? 0.0 : x - seg.x;
  return seg.eval(std::clamp(tau, 0.0, seg.s), order);
}

Eigen::MatrixXd build_Ap(int p) {
  if (p < 1) throw std::domain_error("build_Ap: p must be >= 1");
  if (p > 10) throw std::range_error("build_Ap: p > 10 exceeds the factorial range cap");
  Eigen::MatrixXd A(p + 1, p + 1);
  for (int i = 0; i <= p; ++i)
    for (int j = 0; j <= p; ++j)
      A(i, j) = factorial(p + j + 1) / factorial(p + j + 1 - i);
  return A;
}

HermiteSegment hermite_interpolate(const std::vector<double>& f0_derivs,
                                   const std::vector<double>& f1_derivs,
                                   double s, double x_left) {
  if (s <= 0.0) throw std::invalid_argument("hermite_interpolate: s must be positive");
  if (f0_derivs.size() != f1_derivs.size() || f0_derivs.empty())
    throw std::invalid_argument("hermite_interpolate: data sizes must match");
  const int p = static_cast<int>(f0_derivs.size()) - 1;

  HermiteSegment seg;
  seg.x = x_left;
  seg.s = s;
  seg.coeffs.assign(2 * p + 2, 0.0);
  for (int i = 0; i <= p; ++i) seg.coeffs[i] = f0_derivs[i] / factorial(i);

  if (p >= 1) {
    // A_p y = b in the scaled unknowns y_m = c_{p+1+m} s^m; keeps the
    // conditioning independent of the segment width.  Extended precision
    // holds the verified residual well under 1e-7 even for narrow segments.
    using LongMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    using LongVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    LongMat A(p + 1, p + 1);
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= p; ++j)
        A(i, j) = static_cast<long double>(factorial(p + j + 1)) /
                  static_cast<long double>(factorial(p + j + 1 - i));
    LongVec b(p + 1);
    const long double sl = s;
    for (int i = 0; i <= p; ++i) {
      long double T = 0.0L;
      for (int l = i; l <= p; ++l)
        T += static_cast<long double>(f0_derivs[l]) /
             static_cast<long double>(factorial(l - i)) * powl(sl, l - i);
      b[i] = (static_cast<long double>(f1_derivs[i]) - T) / powl(sl, p + 1 - i);
    }
    Eigen::FullPivLU<LongMat> lu(A);
    if (!lu.isInvertible())
      throw NumericalError("hermite_interpolate: A_p factorization failed");
    const LongVec y = lu.solve(b);
    for (int m = 0; m <= p; ++m)
      seg.coeffs[p + 1 + m] = static_cast<double>(y[m] / powl(sl, m));
  } else {
    // p = 0: linear match of the two values.
    seg.coeffs.assign(2, 0.0);
    seg.coeffs[0] = f0_derivs[0];
    seg.coeffs[1] = (f1_derivs[0] - f0_derivs[0]) / s;
  }

  // Verify the end conditions.
  double scale = 1.0;
  for (int i = 0; i <= p; ++i)
    scale = std::max({scale, std::abs(f0_derivs[i]), std::abs(f1_derivs[i])});
  for (int i = 0; i <= p; ++i) {
    const double r0 = std::abs(seg.eval(0.0, i) - f0_derivs[i]);
    const double r1 = std::abs(seg.eval(s, i) - f1_derivs[i]);
    if (r0 > 1e-7 * scale || r1 > 1e-7 * scale) {
      std::ostringstream msg;
      msg << "hermite_interpolate: end-condition residual " << std::max(r0, r1)
          << " at order " << i << " exceeds 1e-7 relative (s = " << s << ")";
      throw NumericalError(msg.str());
    }
  }
  return seg;
}

double lipschitz_certificate(const HermiteSegment& segment, double kappa_f) {
  const int p = segment.degree_p();
  const double s = segment.s;

  std::vector<double> f0(p + 1), f1(p + 1);
  for (int i = 0; i <= p; ++i) {
    f0[i] = segment.eval(0.0, i);
    f1[i] = segment.eval(s, i);
  }
  const std::vector<double> T = taylor_derivs(f0, s);
  for (int j = 0; j <= p; ++j) {
    const double gap = std::abs(f1[j] - T[j]);
    const double bound = kappa_f * std::pow(s, p - j + 1);
    if (gap > bound * (1.0 + 1e-9) + 1e-12) {
      std::ostringstream msg;
      msg << "lipschitz_certificate: data bound fails at j = " << j << " (" << gap
          << " > " << bound << ")";
      throw std::domain_error(msg.str());
    }
  }

  const Eigen::MatrixXd Ainv = build_Ap(std::max(p, 1)).inverse();
  const double Lp = (p + 1.0) * factorial(2 * p + 1) / factorial(p) *
                    Ainv.cwiseAbs().rowwise().sum().maxCoeff() * kappa_f;

  // ~1e4 difference quotients of pi^{(p)} on a deterministic grid.
  constexpr int kGrid = 142;
  std::vector<double> vals(kGrid);
  for (int i = 0; i < kGrid; ++i)
    vals[i] = segment.eval(s * i / (kGrid - 1.0), p);
  for (int i = 0; i < kGrid; ++i)
    for (int j = i + 1; j < kGrid; ++j) {
      const double dt = s * (j - i) / (kGrid - 1.0);
      if (std::abs(vals[j] - vals[i]) > Lp * dt * (1.0 + 1e-9) + 1e-12)
        throw std::domain_error(
            "lipschitz_certificate: sampled difference quotient exceeds L_p");
    }
  return Lp;
}

double SlowInstance::f_upper() const {
  return 2.0 * std::pow(2.0 * q * chi(q, 1.0), (p + 1.0) / (p - q + 1.0));
}

SlowInstance build_slow_instance(int p, int q, double epsilon) {
  if (q < 1 || q > p) throw std::invalid_argument("build_slow_instance: needs 1 <= q <= p");
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("build_slow_instance: epsilon must be in (0,1]");

  SlowInstance inst;
  inst.p = p;
  inst.q = q;
  inst.epsilon = epsilon;
  inst.sigma = factorial(p);

  const double expo = (p + 1.0) / (p - q + 1.0);
  const double keps_real = std::pow(epsilon, -expo);
  // Snap near-integer powers so e.g. 0.25^{-2} yields exactly 16.
  const double rounded = std::round(keps_real);
  inst.k_eps = (std::abs(keps_real - rounded) <= 1e-9 * std::max(1.0, keps_real))
                   ? static_cast<long>(rounded)
                   : static_cast<long>(std::ceil(keps_real));
  const long K = inst.k_eps;

  const double chi1 = chi(q, 1.0);
  const double zeta = (p - q + 1.0) / (q * (p + 1.0));
  const double kappa_f = factorial(q - 1);
  auto fail = [](const std::string& what) {
    throw std::runtime_error("build_slow_instance: violated " + what);
  };

  inst.nodes.resize(K + 1);
  inst.node_derivs.assign(K + 1, std::vector<double>(p + 1, 0.0));
  inst.steps.resize(K);

  double f_val = 2.0 * std::pow(2.0 * q * chi1, expo);
  double x = 0.0;
  for (long k = 0; k <= K; ++k) {
    const double omega = epsilon * static_cast<double>(K - k) / K;
    inst.nodes[k] = x;
    inst.node_derivs[k][0] = f_val;
    inst.node_derivs[k][q] = -(epsilon + omega) * factorial(q) * chi1;
    if (f_val < -1e-12 || f_val > inst.f_upper() * (1.0 + 1e-12))
      fail("the range bound (f_k outside [0, f_upper])");
    if (k == K) break;
    const double base = q * (epsilon + omega) * chi1;
    const double s_k = std::pow(base, 1.0 / (p - q + 1.0));
    if (!(s_k > std::pow(epsilon, 1.0 / (p - q + 1.0))))
      fail("the strict step-length bound");
    inst.steps[k] = s_k;
    x += s_k;
    f_val -= zeta * std::pow(base, expo);
  }

  // Interior Hermite segments plus the data bound per consecutive pair.
  for (long k = 0; k < K; ++k) {
    const double s_k = inst.steps[k];
    const std::vector<double> T = taylor_derivs(inst.node_derivs[k], s_k);
    for (int j = 0; j <= p; ++j) {
      const double gap = std::abs(inst.node_derivs[k + 1][j] - T[j]);
      if (gap > kappa_f * std::pow(s_k, p - j + 1) * (1.0 + 1e-9) + 1e-12)
        fail("the data bound");
    }
    const double gap0 = std::abs(inst.node_derivs[k + 1][0] - T[0]);
    const double want = std::pow(s_k, p + 1) / (p + 1.0);
    if (std::abs(gap0 - want) > 1e-9 * (1.0 + want))
      fail("the exact value-gap identity s^{p+1}/(p+1)");
    inst.interpolant.segments.push_back(hermite_interpolate(
        inst.node_derivs[k], inst.node_derivs[k + 1], s_k, inst.nodes[k]));
  }

  // Prolongations: widths double from 1 until the data bound holds for the
  // boundary segment.
  auto prolong_width = [&](const std::vector<double>& from,
                           const std::vector<double>& to) {
    double s = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
      const std::vector<double> T = taylor_derivs(from, s);
      bool ok = true;
      for (int j = 0; j <= p; ++j)
        if (std::abs(to[j] - T[j]) > kappa_f * std::pow(s, p - j + 1)) ok = false;
      if (ok) return s;
      s *= 2.0;
    }
    fail("the prolongation data bound (width search diverged)");
    return s;
  };

  std::vector<double> flat_left(p + 1, 0.0), flat_right(p + 1, 0.0);
  flat_left[0] = inst.node_derivs.front()[0];
  flat_right[0] = inst.node_derivs.back()[0];

  const double s_left = prolong_width(flat_left, inst.node_derivs.front());
  inst.interpolant.segments.insert(
      inst.interpolant.segments.begin(),
      hermite_interpolate(flat_left, inst.node_derivs.front(), s_left,
                          inst.nodes.front() - s_left));
  const double s_right = prolong_width(inst.node_derivs.back(), flat_right);
  inst.interpolant.segments.push_back(hermite_interpolate(
      inst.node_derivs.back(), flat_right, s_right, inst.nodes.back()));
  inst.interpolant.left_tail = flat_left[0];
  inst.interpolant.right_tail = flat_right[0];

  // C^p gluing across breakpoints.
  const auto& segs = inst.interpolant.segments;
  for (std::size_t i = 0; i + 1 < segs.size(); ++i)
    for (int m = 0; m <= p; ++m) {
      const double a = segs[i].eval(segs[i].s, m);
      const double b = segs[i + 1].eval(0.0, m);
      if (std::abs(a - b) > 1e-9 * (1.0 + std::max(std::abs(a), std::abs(b))))
        fail("C^p continuity at a breakpoint");
    }
  return inst;
}

namespace {

class InterpolantOracle final : public Oracle {
public:
  InterpolantOracle(PiecewisePolynomial f, int p) : f_(std::move(f)), p_(p) {}
  int dim() const override { return 1; }
  int max_order() const override { return p_; }

protected:
  double value_impl(const Eigen::VectorXd& x) override { return f_.eval(x[0], 0); }
  SymmetricTensor derivative_impl(const Eigen::VectorXd& x, int order) override {
    SymmetricTensor t(order, 1);
    t.raw()[0] = f_.eval(x[0], order);
    return t;
  }

private:
  PiecewisePolynomial f_;
  int p_;
};

class EmbeddedOracle final : public Oracle {
public:
  EmbeddedOracle(PiecewisePolynomial f, int p, Eigen::VectorXd origin,
                 Eigen::VectorXd direction)
      : f_(std::move(f)), p_(p), origin_(std::move(origin)), u_(std::move(direction)) {}
  int dim() const override { return static_cast<int>(u_.size()); }
  int max_order() const override { return p_; }

protected:
  double value_impl(const Eigen::VectorXd& x) override {
    return f_.eval(u_.dot(x - origin_), 0);
  }
  SymmetricTensor derivative_impl(const Eigen::VectorXd& x, int order) override {
    const double d = f_.eval(u_.dot(x - origin_), order);
    SymmetricTensor t(order, static_cast<int>(u_.size()));
    std::vector<int> idx = SymmetricTensor::first_index(order);
    do {
      double prod = d;
      for (int i : idx) prod *= u_[i];
      t.set(idx, prod);
    } while (SymmetricTensor::next_index(idx, static_cast<int>(u_.size())));
    return t;
  }

private:
  PiecewisePolynomial f_;
  int p_;
  Eigen::VectorXd origin_;
  Eigen::VectorXd u_;
};

}  // namespace

std::unique_ptr<Oracle> oracle_from_interpolant(const PiecewisePolynomial& f, int p) {
  return std::make_unique<InterpolantOracle>(f, p);
}

EmbeddedProblem embed_instance(const SlowInstance& inst, int n,
                               const Eigen::VectorXd& direction,
                               FeasibleRegion::Kind region_kind) {
  if (direction.size() != n)
    throw std::invalid_argument("embed_instance: direction dimension mismatch");
  if (std::abs(direction.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("embed_instance: direction must be unit norm");

  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(n);
  FeasibleRegion region =
      region_kind == FeasibleRegion::Kind::Ray
          ? FeasibleRegion::ray(origin, direction)
          : FeasibleRegion::whole_space(n);
  if (region_kind != FeasibleRegion::Kind::Ray &&
      region_kind != FeasibleRegion::Kind::WholeSpace)
    throw std::invalid_argument("embed_instance: region must be WholeSpace or Ray");

  EmbeddedProblem out{std::make_unique<EmbeddedOracle>(inst.interpolant, inst.p,
                                                       origin, direction),
                      std::move(region), origin + inst.nodes.front() * direction};
  return out;
}

void write_instance(std::ostream& os, const SlowInstance& inst) {
  os << std::setprecision(17);
  os << "slow-instance " << inst.p << ' ' << inst.q << ' ' << inst.epsilon << ' '
     << inst.k_eps << '\n';
  os << "sigma " << inst.sigma << '\n';
  os << "nodes " << inst.nodes.size() << '\n';
  for (std::size_t k = 0; k < inst.nodes.size(); ++k) {
    os << inst.nodes[k];
    for (double d : inst.node_derivs[k]) os << ' ' << d;
    os << '\n';
  }
  os << "steps " << inst.steps.size() << '\n';
  for (std::size_t k = 0; k < inst.steps.size(); ++k)
    os << inst.steps[k] << " \n"[k + 1 == inst.steps.size()];
  if (inst.steps.empty()) os << '\n';
  os << "segments " << inst.interpolant.segments.size() << '\n';
  for (const auto& seg : inst.interpolant.segments) {
    os << seg.x << ' ' << seg.s;
    for (double c : seg.coeffs) os << ' ' << c;
    os << '\n';
  }
  os << "tails " << inst.interpolant.left_tail << ' ' << inst.interpolant.right_tail
     << '\n';
}

SlowInstance read_instance(std::istream& is) {
  auto expect = [&](const std::string& tag) {
    std::string tok;
    if (!(is >> tok) || tok != tag)
      throw std::runtime_error("read_instance: expected '" + tag + "'");
  };
  SlowInstance inst;
  expect("slow-instance");
  is >> inst.p >> inst.q >> inst.epsilon >> inst.k_eps;
  expect("sigma");
  is >> inst.sigma;
  expect("nodes");
  std::size_t n_nodes = 0;
  is >> n_nodes;
  inst.nodes.resize(n_nodes);
  inst.node_derivs.assign(n_nodes, std::vector<double>(inst.p + 1));
  for (std::size_t k = 0; k < n_nodes; ++k) {
    is >> inst.nodes[k];
    for (double& d : inst.node_derivs[k]) is >> d;
  }
  expect("steps");
  std::size_t n_steps = 0;
  is >> n_steps;
  inst.steps.resize(n_steps);
  for (double& s : inst.steps) is >> s;
  expect("segments");
  std::size_t n_segs = 0;
  is >> n_segs;
  inst.interpolant.segments.resize(n_segs);
  for (auto& seg : inst.interpolant.segments) {
    is >> seg.x >> seg.s;
    seg.coeffs.assign(2 * inst.p + 2, 0.0);
    for (double& c : seg.coeffs) is >> c;
  }
  expect("tails");
  is >> inst.interpolant.left_tail >> inst.interpolant.right_tail;
  if (!is) throw std::runtime_error("read_instance: truncated input");
  return inst;
}

}  // namespace arp
