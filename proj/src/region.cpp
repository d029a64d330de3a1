#include "arp/region.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace arp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMembershipTol = 1e-12;
}  // namespace

FeasibleRegion FeasibleRegion::whole_space(int n) {
  if (n <= 0) throw std::invalid_argument("whole_space: n must be positive");
  return FeasibleRegion(Kind::WholeSpace, n, Eigen::VectorXd(), Eigen::VectorXd());
}

FeasibleRegion FeasibleRegion::ray(Eigen::VectorXd origin, Eigen::VectorXd direction) {
  if (origin.size() != direction.size())
    throw std::invalid_argument("ray: origin/direction dim mismatch");
  const double dn = direction.norm();
  if (std::abs(dn - 1.0) > 1e-10)
    throw std::invalid_argument("ray: direction must have unit norm");
  direction /= dn;
  const int n = static_cast<int>(origin.size());
  return FeasibleRegion(Kind::Ray, n, std::move(origin), std::move(direction));
}

FeasibleRegion FeasibleRegion::interval(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("interval: requires a < b");
  Eigen::VectorXd lo(1), hi(1);
  lo[0] = a;
  hi[0] = b;
  return FeasibleRegion(Kind::Interval, 1, std::move(lo), std::move(hi));
}

FeasibleRegion FeasibleRegion::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  if (lower.size() != upper.size())
    throw std::invalid_argument("box: bound dim mismatch");
  for (int i = 0; i < lower.size(); ++i)
    if (!(lower[i] <= upper[i]))
      throw std::invalid_argument("box: requires lower <= upper componentwise");
  const int n = static_cast<int>(lower.size());
  return FeasibleRegion(Kind::Box, n, std::move(lower), std::move(upper));
}

bool FeasibleRegion::contains(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) return false;
  switch (kind_) {
    case Kind::WholeSpace:
      return true;
    case Kind::Ray: {
      const Eigen::VectorXd r = x - lower_;
      const double t = upper_.dot(r);
      if (t < -kMembershipTol) return false;
      return (r - t * upper_).norm() <= kMembershipTol * (1.0 + std::abs(t));
    }
    case Kind::Interval:
      return x[0] >= lower_[0] && x[0] <= upper_[0];
    case Kind::Box:
      for (int i = 0; i < dim_; ++i)
        if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
      return true;
  }
  return false;
}

Eigen::VectorXd FeasibleRegion::line_direction() const {
  if (kind_ == Kind::Ray) return upper_;
  if (dim_ != 1) throw std::logic_error("line_direction: region is not line-like");
  Eigen::VectorXd e(1);
  e[0] = 1.0;
  return e;
}

std::pair<double, double> FeasibleRegion::step_range(const Eigen::VectorXd& x) const {
  switch (kind_) {
    case Kind::WholeSpace:
      if (dim_ != 1) throw std::logic_error("step_range: not line-like");
      return {-kInf, kInf};
    case Kind::Interval:
      return {lower_[0] - x[0], upper_[0] - x[0]};
    case Kind::Ray: {
      const double t = upper_.dot(x - lower_);
      return {-t, kInf};
    }
    case Kind::Box:
      if (dim_ == 1) return {lower_[0] - x[0], upper_[0] - x[0]};
      throw std::logic_error("step_range: not line-like");
  }
  return {0.0, 0.0};
}

int FeasibleRegion::max_exact_order() const {
  if (is_line_like()) return std::numeric_limits<int>::max();
  if (kind_ == Kind::WholeSpace) return 2;
  return 1;  // box in R^n
}

}  // namespace arp
