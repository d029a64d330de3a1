#pragma once

#include <Eigen/Core>

#include <optional>
#include <utility>

namespace arp {

/// The feasible set F: whole space, a ray, a 1-D interval, or an
/// axis-aligned box.  Capability flags are derived from the variant:
/// exact constrained global minimization is available for any order q on
/// univariate geometries (whole line, interval, ray), up to q = 2 on the
/// whole space, and up to q = 1 on a box.
class FeasibleRegion {
public:
  enum class Kind { WholeSpace, Ray, Interval, Box };

  static FeasibleRegion whole_space(int n);
  static FeasibleRegion ray(Eigen::VectorXd origin, Eigen::VectorXd direction);
  static FeasibleRegion interval(double a, double b);
  static FeasibleRegion box(Eigen::VectorXd lower, Eigen::VectorXd upper);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  const Eigen::VectorXd& ray_origin() const { return lower_; }
  const Eigen::VectorXd& ray_direction() const { return upper_; }
  double interval_a() const { return lower_[0]; }
  double interval_b() const { return upper_[0]; }
  const Eigen::VectorXd& box_lower() const { return lower_; }
  const Eigen::VectorXd& box_upper() const { return upper_; }

  bool contains(const Eigen::VectorXd& x) const;

  /// True when the feasible steps from x form a line segment along a known
  /// direction: any univariate region, or a ray in R^n.
  bool is_line_like() const {
    return kind_ == Kind::Ray || dim_ == 1 || kind_ == Kind::Interval;
  }

  /// Direction of the feasible line through x (unit vector).
  Eigen::VectorXd line_direction() const;

  /// Feasible range [lo, hi] of t such that x + t * line_direction() stays
  /// in F.  Only valid for line-like regions.  Infinite ends use +-inf.
  std::pair<double, double> step_range(const Eigen::VectorXd& x) const;

  /// Highest optimality order q with an exact phi computation on this region.
  int max_exact_order() const;

private:
  FeasibleRegion(Kind k, int n, Eigen::VectorXd a, Eigen::VectorXd b)
      : kind_(k), dim_(n), lower_(std::move(a)), upper_(std::move(b)) {}

  Kind kind_;
  int dim_;
  Eigen::VectorXd lower_;  // ray origin / interval a / box lower
  Eigen::VectorXd upper_;  // ray direction / interval b / box upper
};

}  // namespace arp
