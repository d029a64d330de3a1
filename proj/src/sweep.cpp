#include "arp/sweep.hpp"

#include "arp/hermite.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace arp {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Theorem interp-Holder constant for the slow instance (kappa_f = (q-1)!).
double slow_instance_L(int p, int q) {
  const Eigen::MatrixXd Ainv = build_Ap(p).inverse();
  return (p + 1.0) * factorial(2 * p + 1) / factorial(p) *
         Ainv.cwiseAbs().rowwise().sum().maxCoeff() * factorial(q - 1);
}

const char* status_name(SolverStatus s) {
  switch (s) {
    case SolverStatus::ConvergedStep1: return "step1";
    case SolverStatus::ConvergedStep2: return "step2";
    case SolverStatus::IterationCap: return "cap";
  }
  return "?";
}

SweepRow run_cell(const SweepCell& cell, const SolverConfig& base) {
  SweepRow row;
  row.problem = cell.problem;
  row.p = cell.p;
  row.q = cell.q;
  row.eps = cell.eps;

  SolverReport report;
  SolverConfig config;
  std::optional<double> L;
  std::optional<double> f_low;
  double f0 = 0.0;

  if (cell.problem == "slow") {
    const SlowInstance inst = build_slow_instance(cell.p, cell.q, cell.eps);
    config = SolverConfig::prescribed(cell.p, cell.q, cell.eps);
    config.max_iterations = std::max(base.max_iterations, inst.k_eps + 10);
    auto oracle = oracle_from_interpolant(inst.interpolant, inst.p);
    Eigen::VectorXd x0(1);
    x0[0] = inst.nodes.front();
    f0 = inst.node_derivs.front()[0];
    f_low = 0.0;  // range bound (5.18)
    L = slow_instance_L(cell.p, cell.q);
    report = solve(*oracle, x0, FeasibleRegion::whole_space(1), config);
  } else {
    const ProblemSpec& spec = find_problem(cell.problem);
    if (cell.p > spec.p_max)
      throw std::invalid_argument("sweep: p exceeds p_max for " + cell.problem);
    config = base;
    config.p = cell.p;
    config.q = cell.q;
    config.epsilon = cell.eps;
    config.mode = SolverMode::Adaptive;
    auto oracle = spec.make_oracle();
    f0 = oracle->value(Eigen::VectorXd(spec.x0));
    oracle->reset_counters();
    if (static_cast<int>(spec.L_by_p.size()) >= cell.p) L = spec.L_by_p[cell.p - 1];
    f_low = spec.f_low;
    report = solve(*oracle, spec.x0, spec.region, config);
  }

  const AuditResult audit = audit_run(report, L, config);
  if (!audit.ok) {
    std::string what = "sweep: audit failed for " + cell.problem + ":";
    for (const auto& v : audit.violations) what += " " + v + ";";
    throw std::runtime_error(what);
  }

  row.beta = config.beta;
  row.f_evals = report.f_evals;
  row.deriv_evals = report.total_deriv_evals();
  row.succ_iters = report.successful_iterations;
  row.total_iters = static_cast<long>(report.trace.size());
  row.status = status_name(report.status);
  if (L && f_low && f0 > *f_low)
    row.bound = theoretical_eval_bound(config, f0, *f_low, *L);
  return row;
}

}  // namespace

std::pair<double, double> fit_slope(const std::vector<SweepRow>& rows) {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    xs.push_back(std::log(1.0 / r.eps));
    ys.push_back(std::log(static_cast<double>(r.f_evals)));
  }
  std::vector<double> distinct = xs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 4)
    throw std::invalid_argument("fit_slope: needs >= 4 distinct eps values");

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const bool constant_counts =
      std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); });
  if (constant_counts)
    return {0.0, std::numeric_limits<double>::infinity()};
  const double slope = sxy / sxx;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double res = ys[i] - my - slope * (xs[i] - mx);
    sse += res * res;
  }
  const double stderr_ =
      xs.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : std::numeric_limits<double>::infinity();
  return {slope, stderr_};
}

std::vector<double> eps_grid_pow2(int a, int b, int p, int q, bool cap_for_slow) {
  if (a > b) std::swap(a, b);
  std::vector<double> out;
  for (int e = a; e <= b; ++e) {
    const double eps = std::pow(2.0, -e);
    if (cap_for_slow) {
      const double keps = std::pow(eps, -(p + 1.0) / (p - q + 1.0));
      if (keps > 1e5) continue;
    }
    out.push_back(eps);
  }
  return out;
}

SweepResult run_sweep(const std::vector<SweepCell>& cells, const SolverConfig& base) {
  std::vector<std::future<SweepRow>> futures;
  futures.reserve(cells.size());
  for (const auto& cell : cells)
    futures.push_back(
        std::async(std::launch::async, [&base, cell]() { return run_cell(cell, base); }));

  SweepResult result;
  for (auto& f : futures) result.rows.push_back(f.get());
  std::sort(result.rows.begin(), result.rows.end(),
            [](const SweepRow& a, const SweepRow& b) {
              if (a.problem != b.problem) return a.problem < b.problem;
              if (a.eps != b.eps) return a.eps > b.eps;
              return std::tie(a.p, a.q) < std::tie(b.p, b.q);
            });

  const bool homogeneous =
      !result.rows.empty() &&
      std::all_of(result.rows.begin(), result.rows.end(), [&](const SweepRow& r) {
        return r.problem == result.rows.front().problem &&
               r.p == result.rows.front().p && r.q == result.rows.front().q;
      });
  std::vector<double> eps_seen;
  for (const auto& r : result.rows) eps_seen.push_back(r.eps);
  std::sort(eps_seen.begin(), eps_seen.end());
  eps_seen.erase(std::unique(eps_seen.begin(), eps_seen.end()), eps_seen.end());
  if (homogeneous && eps_seen.size() >= 4) {
    std::tie(result.slope, result.slope_stderr) = fit_slope(result.rows);
    result.slope_valid = true;
  }
  return result;
}

void export_csv(const SweepResult& result, const std::string& path) {
  std::ofstream csv(path);
  if (!csv) throw std::runtime_error("export_csv: cannot open " + path);
  csv << std::setprecision(17);
  csv << "problem,p,q,beta,eps,f_evals,deriv_evals,succ_iters,total_iters,status,bound\n";
  for (const auto& r : result.rows) {
    csv << r.problem << ',' << r.p << ',' << r.q << ',' << r.beta << ',' << r.eps
        << ',' << r.f_evals << ',' << r.deriv_evals << ',' << r.succ_iters << ','
        << r.total_iters << ',' << r.status << ',';
    if (r.bound)
      csv << *r.bound;
    else
      csv << "nan";
    csv << '\n';
  }
  if (!csv) throw std::runtime_error("export_csv: write failed for " + path);

  std::string dat = path;
  const std::size_t dot = dat.rfind(".csv");
  if (dot != std::string::npos && dot + 4 == dat.size())
    dat.replace(dot, 4, ".dat");
  else
    dat += ".dat";
  std::ofstream plot(dat);
  if (!plot) throw std::runtime_error("export_csv: cannot open " + dat);
  plot << std::setprecision(17);
  plot << "# log(1/eps) log(f_evals)\n";
  for (const auto& r : result.rows)
    plot << std::log(1.0 / r.eps) << ' '
         << std::log(static_cast<double>(r.f_evals)) << '\n';
  if (!plot) throw std::runtime_error("export_csv: write failed for " + dat);
}

}  // namespace arp
