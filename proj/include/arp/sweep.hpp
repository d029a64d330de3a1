#pragma once

#include "arp/driver.hpp"
#include "arp/problems.hpp"

#include <optional>
#include <string>
#include <vector>

namespace arp {

struct SweepRow {
  std::string problem;
  int p = 2;
  int q = 1;
  double beta = 1.0;
  double eps = 0.0;
  long f_evals = 0;
  long deriv_evals = 0;
  long succ_iters = 0;
  long total_iters = 0;
  std::string status;
  std::optional<double> bound;  // theoretical_eval_bound when L, f_low known
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by (problem, eps descending)
  double slope = 0.0;
  double slope_stderr = 0.0;
  bool slope_valid = false;
};

struct SweepCell {
  std::string problem;  // registry name, or "slow" for the generated instance
  int p = 2;
  int q = 1;
  double eps = 0.1;
};

/// Runs the cells concurrently (one oracle/solver per cell), audits every
/// run, and fits log(f-evaluations) against log(1/eps).  Cells on the
/// "slow" generator run in Prescribed mode; registry cells run Adaptive
/// with `base` as the parameter template.  Throws std::runtime_error when
/// any run fails its audit.
SweepResult run_sweep(const std::vector<SweepCell>& cells, const SolverConfig& base);

/// Least-squares slope of log(f_evals) vs log(1/eps); requires >= 4
/// distinct eps.  Constant counts yield slope 0 with infinite stderr.
std::pair<double, double> fit_slope(const std::vector<SweepRow>& rows);

/// Power-of-two eps grid 2^-a .. 2^-b, auto-capped so the slow-instance
/// k_eps stays <= 1e5; returns the values actually kept.
std::vector<double> eps_grid_pow2(int a, int b, int p, int q, bool cap_for_slow);

/// CSV with the fixed header
/// `problem,p,q,beta,eps,f_evals,deriv_evals,succ_iters,total_iters,status,bound`
/// plus a companion plot-data file `<path>.dat` of (log 1/eps, log f_evals).
void export_csv(const SweepResult& result, const std::string& path);

}  // namespace arp
