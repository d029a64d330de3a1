#include "arp/driver.hpp"

#include "arp/trust_region.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace arp {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

struct PhiEval {
  double phi = 0.0;
  Eigen::VectorXd argmin_d;
};

PhiEval compute_phi(const std::vector<SymmetricTensor>& derivs, int q, double delta,
                    const FeasibleRegion& region, const Eigen::VectorXd& x,
                    double f) {
  PhiEval out;
  const int n = static_cast<int>(x.size());

  if (region.is_line_like()) {
    const Eigen::VectorXd u = region.line_direction();
    std::vector<double> coeffs(q);
    for (int j = 1; j <= q; ++j)
      coeffs[j - 1] = derivs[j - 1].apply_power(u) / factorial(j);
    auto [lo, hi] = region.step_range(x);
    auto [phi, t] = phi_univariate_coeffs(coeffs, delta, lo, hi);
    out.phi = phi;
    out.argmin_d = t * u;
    return out;
  }
  if (q == 1) {
    const PhiResult r = phi_order1_with_arg(derivs[0].as_vector(), delta, region, x);
    out.phi = r.phi;
    out.argmin_d = r.argmin_d;
    return out;
  }
  if (q == 2) {
    const PhiResult r =
        phi_order2(derivs[0].as_vector(), derivs[1], delta, region, x);
    out.phi = r.phi;
    out.argmin_d = r.argmin_d;
    return out;
  }
  (void)n;
  (void)f;
  throw std::invalid_argument("compute_phi: q >= 3 requires a line-like region");
}

StepResult compute_step(const RegularizedModel& m, const FeasibleRegion& region,
                        const Eigen::VectorXd& x) {
  if (region.is_line_like()) {
    const Eigen::VectorXd u = region.line_direction();
    auto [lo, hi] = region.step_range(x);
    const std::vector<double> coeffs = restrict_taylor(m.taylor, u);
    const UniMinResult r =
        minimize_univariate_decrease(coeffs, m.sigma, m.p, m.beta, lo, hi);
    StepResult out;
    out.s = r.t * u;
    out.model_decrease = r.decrease;
    out.reason = r.descent ? StopReason::LongStep : StopReason::NoDescentExists;
    return out;
  }

  if (m.p == 2 && m.beta == 1.0) return minimize_model_cubic(m);

  if (m.p == 1) {
    // m(s) = g's + sigma/(1+beta) |s|^{1+beta}: minimized along -g with
    // |s| = (|g|/sigma)^{1/beta}.
    const Eigen::VectorXd g = m.taylor.derivs[0].as_vector();
    const double gn = g.norm();
    StepResult out;
    if (gn == 0.0) {
      out.s = Eigen::VectorXd::Zero(g.size());
      out.reason = StopReason::NoDescentExists;
      return out;
    }
    const double t = std::pow(gn / m.sigma, 1.0 / m.beta);
    out.s = -(t / gn) * g;
    out.model_decrease = gn * t - m.sigma / (1.0 + m.beta) * std::pow(t, 1.0 + m.beta);
    out.reason = StopReason::LongStep;
    return out;
  }
  throw std::invalid_argument(
      "compute_step: multivariate models supported only for p = 1 or the cubic case");
}

}  // namespace

void SolverConfig::validate(const FeasibleRegion& region) const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("SolverConfig: " + msg); };
  if (q < 1 || q > p) fail("requires 1 <= q <= p");
  if (!(beta > 0.0 && beta <= 1.0)) fail("beta must be in (0,1]");
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail("epsilon must be in (0,1)");
  if (!(delta_init > 0.0 && delta_init <= 1.0)) fail("delta_init must be in (0,1]");
  if (!(varpi > 0.0 && varpi <= 1.0)) fail("varpi must be in (0,1]");
  if (!(theta > 0.0)) fail("theta must be positive");
  if (!(0.0 < eta1 && eta1 <= eta2 && eta2 < 1.0)) fail("requires 0 < eta1 <= eta2 < 1");
  if (!(0.0 < gamma1 && gamma1 < 1.0 && 1.0 < gamma2 && gamma2 < gamma3))
    fail("requires 0 < gamma1 < 1 < gamma2 < gamma3");
  if (!(sigma0 > 0.0)) fail("sigma0 must be positive");
  if (!(sigma_min > 0.0 && sigma_min <= sigma0)) fail("requires sigma_min in (0, sigma0]");
  if (mode == SolverMode::Prescribed && !(prescribed_sigma > 0.0))
    fail("Prescribed mode requires a positive prescribed sigma");

  if (!region.is_line_like()) {
    if (region.kind() != FeasibleRegion::Kind::WholeSpace)
      fail("multivariate constrained solving is limited to rays");
    if (q > 2) fail("q >= 3 requires a univariate or ray geometry");
    if (p >= 2 && !(p == 2 && beta == 1.0))
      fail("multivariate step computation requires p = 1 or p = 2 with beta = 1");
  }
}

SolverConfig SolverConfig::prescribed(int p, int q, double epsilon) {
  SolverConfig c;
  c.p = p;
  c.q = q;
  c.epsilon = epsilon;
  c.mode = SolverMode::Prescribed;
  c.prescribed_sigma = factorial(p);
  c.sigma0 = c.prescribed_sigma;
  c.sigma_min = 1e-8;
  // Exact prescribed steps realize rho = (p-q+1)/(p+1); stay safely below.
  c.eta1 = 0.5 * (p - q + 1.0) / (p + 1.0);
  c.eta2 = 0.9;
  c.varpi = 1.0;
  c.delta_init = 1.0;
  c.max_iterations = 200000;
  return c;
}

double rho(double f_k, double f_trial, double taylor_decrease) {
  if (!(taylor_decrease > 0.0))
    throw std::logic_error("rho: nonpositive Taylor decrease");
  return (f_k - f_trial) / taylor_decrease;
}

double sigma_update(double sigma, double rho_k, const SolverConfig& config) {
  if (rho_k >= config.eta2) return std::max(config.sigma_min, config.gamma1 * sigma);
  if (rho_k >= config.eta1) return sigma;
  return config.gamma2 * sigma;
}

SolverReport solve(Oracle& oracle, const Eigen::VectorXd& x0,
                   const FeasibleRegion& region, const SolverConfig& config,
                   bool algorithm2) {
  config.validate(region);
  if (algorithm2 && (config.q != 2 || config.beta != 1.0))
    throw std::invalid_argument("solve: algorithm2 requires q = 2, beta = 1");
  if (oracle.dim() != region.dim())
    throw std::invalid_argument("solve: oracle/region dim mismatch");
  if (oracle.max_order() < config.p)
    throw std::invalid_argument("solve: oracle does not provide order-p derivatives");
  if (!region.contains(x0)) throw std::invalid_argument("solve: x0 infeasible");

  SolverReport report;
  Eigen::VectorXd x = x0;
  double f = oracle.value(x);
  double sigma =
      config.mode == SolverMode::Prescribed ? config.prescribed_sigma : config.sigma0;
  double delta_prev = config.delta_init;

  std::vector<SymmetricTensor> derivs;
  bool run_step1 = true;
  bool terminated = false;

  for (long k = 0; k < config.max_iterations; ++k) {
    if (run_step1) {
      derivs.clear();
      for (int i = 1; i <= config.q; ++i) derivs.push_back(oracle.derivative(x, i));
      const double step1_delta = algorithm2 ? 1.0 : delta_prev;
      const PhiEval pe =
          compute_phi(derivs, config.q, step1_delta, region, x, f);
      if (check_termination(pe.phi, config.epsilon, config.q, step1_delta)) {
        report.status = SolverStatus::ConvergedStep1;
        report.certificate = {pe.phi, step1_delta, config.epsilon,
                              config.q, true,        pe.argmin_d};
        terminated = true;
        break;
      }
      for (int i = config.q + 1; i <= config.p; ++i)
        derivs.push_back(oracle.derivative(x, i));
      // Record phi for the iteration about to run.
      report.trace.push_back({});
      report.trace.back().phi = pe.phi;
    } else {
      report.trace.push_back({});
    }
    IterationRecord& rec = report.trace.back();
    rec.k = k;
    rec.x = x;
    rec.f = f;
    rec.sigma = sigma;

    TaylorModel T{x, f, derivs};
    RegularizedModel m{T, sigma, config.p, config.beta};
    StepResult step = compute_step(m, region, x);

    if (step.reason == StopReason::NoDescentExists) {
      report.trace.pop_back();
      // Lemma-backed Step-2 termination: certify with a small enough delta.
      OptimalityCertificate cert;
      cert.epsilon = config.epsilon;
      cert.q = config.q;
      for (int e = 0; e <= 40; ++e) {
        const double delta = std::pow(0.5, e);
        const PhiEval pe = compute_phi(derivs, config.q, delta, region, x, f);
        cert.phi = pe.phi;
        cert.delta = delta;
        cert.argmin_d = pe.argmin_d;
        if (check_termination(pe.phi, config.epsilon, config.q, delta)) {
          cert.satisfied = true;
          break;
        }
      }
      report.status = SolverStatus::ConvergedStep2;
      report.certificate = cert;
      terminated = true;
      break;
    }

    if (config.mode == SolverMode::Prescribed) {
      step.delta_k = 1.0;
    } else if (algorithm2) {
      const double pqb = config.p - 2.0 + config.beta;
      if (step.s.norm() < config.varpi * std::pow(config.epsilon, 1.0 / pqb) &&
          !check_inner_tr_condition(m, step.s, config.theta, config.p))
        throw NumericalError("solve: exact cubic step failed the inner test");
      step.delta_k = 1.0;
      step.reason = StopReason::InnerOptimality;
    } else {
      step = check_step_conditions(step, m, config.q, config.epsilon, config.varpi,
                                   config.theta, region, x);
    }

    const double f_trial = oracle.value(x + step.s);
    const double taylor_decrease = T.f0 - T.eval(step.s);
    const double rho_k = rho(f, f_trial, taylor_decrease);
    const bool successful = rho_k >= config.eta1;

    rec.s = step.s;
    rec.delta = step.delta_k;
    rec.rho = rho_k;
    rec.successful = successful;
    rec.taylor_decrease = taylor_decrease;
    rec.model_decrease = step.model_decrease;
    rec.f_evals_after = oracle.f_evals();
    rec.deriv_evals_after.clear();
    for (int i = 1; i <= config.p; ++i)
      rec.deriv_evals_after.push_back(oracle.deriv_evals(i));

    if (config.mode == SolverMode::Adaptive) sigma = sigma_update(sigma, rho_k, config);
    if (successful) {
      x += step.s;
      f = f_trial;
      ++report.successful_iterations;
    } else {
      ++report.unsuccessful_iterations;
    }
    run_step1 = successful;
    delta_prev = step.delta_k;
  }

  if (!terminated) report.status = SolverStatus::IterationCap;
  report.x_final = x;
  report.f_final = f;
  report.f_evals = oracle.f_evals();
  report.deriv_evals.assign(1, 0);
  for (int i = 1; i <= config.p; ++i) report.deriv_evals.push_back(oracle.deriv_evals(i));
  return report;
}

AuditResult audit_run(const SolverReport& report, std::optional<double> L,
                      const SolverConfig& config) {
  AuditResult out;
  auto violate = [&](const std::string& what) {
    out.ok = false;
    out.violations.push_back(what);
  };
  const double slack = 1.0 - 1e-9;
  const double pb_fact = generalized_factorial(config.p, config.beta);
  const long total = static_cast<long>(report.trace.size());
  const long succ = report.successful_iterations;

  double sigma_obs_max = config.sigma0;
  for (const auto& rec : report.trace) sigma_obs_max = std::max(sigma_obs_max, rec.sigma);

  // (a) successful-vs-total iteration inequality.
  {
    const double sigma_ref =
        config.mode == SolverMode::Prescribed ? config.prescribed_sigma : config.sigma0;
    const double bound =
        succ * (1.0 + std::abs(std::log(config.gamma1)) / std::log(config.gamma2)) +
        std::log(sigma_obs_max / sigma_ref) / std::log(config.gamma2);
    if (total > bound + 1e-9) violate("iteration-count inequality (successful vs total)");
  }

  double sigma_max_theory = 0.0;
  if (L) {
    sigma_max_theory = std::max(config.sigma0, config.gamma3 * (*L) / (1.0 - config.eta2));
    // (b) regularization parameter stays below its theoretical cap.
    for (const auto& rec : report.trace)
      if (rec.sigma > sigma_max_theory * (1.0 + 1e-9)) {
        violate("sigma exceeded its theoretical upper bound");
        break;
      }
  }

  // (c) step lower bound for iterations followed by another iteration.
  if (L) {
    const double pqb = config.p - config.q + config.beta;
    const double kappa_s = std::min(
        config.varpi,
        std::pow(generalized_factorial(config.p - config.q, config.beta) /
                     (*L + sigma_max_theory + config.theta),
                 1.0 / pqb));
    const double floor_len = kappa_s * std::pow(config.epsilon, 1.0 / pqb);
    for (long k = 0; k + 1 < total; ++k)
      if (report.trace[k].s.size() > 0 && report.trace[k].s.norm() < floor_len * slack) {
        violate("step length fell below its theoretical lower bound");
        break;
      }
  }

  // (d) monotone f over successful iterations; (e) guaranteed decrease;
  // (f) per-iteration Taylor decrease vs the regularization term.
  double f_prev = report.trace.empty() ? report.f_final : report.trace.front().f;
  for (long k = 0; k < total; ++k) {
    const auto& rec = report.trace[k];
    if (rec.f > f_prev + 1e-12 * (1.0 + std::abs(f_prev)))
      violate("objective increased across iterations");
    f_prev = rec.f;

    if (rec.s.size() == 0) continue;
    const double sp = std::pow(rec.s.norm(), config.p + config.beta);
    if (rec.taylor_decrease < rec.sigma / pb_fact * sp * slack - 1e-14)
      violate("model decrease bound violated");
    if (rec.successful) {
      const double next_f = (k + 1 < total) ? report.trace[k + 1].f : report.f_final;
      const double guaranteed = config.eta1 * config.sigma_min / pb_fact * sp;
      if (rec.f - next_f < guaranteed * slack - 1e-14)
        violate("guaranteed per-iteration decrease violated");
    }
  }
  return out;
}

double theoretical_eval_bound(const SolverConfig& config, double f0, double f_low,
                              double L) {
  if (!(f0 > f_low)) throw std::invalid_argument("theoretical_eval_bound: f0 <= f_low");
  if (L < 0.0) throw std::invalid_argument("theoretical_eval_bound: L < 0");
  const double p = config.p, q = config.q, beta = config.beta;
  const double pqb = p - q + beta;
  const double sigma_max = std::max(config.sigma0, config.gamma3 * L / (1.0 - config.eta2));
  const double kappa_p =
      generalized_factorial(config.p, beta) / (config.eta1 * config.sigma_min) *
      std::max(std::pow(config.varpi, -(p + beta)),
               std::pow((L + sigma_max + config.theta) /
                            generalized_factorial(config.p - config.q, beta),
                        (p + beta) / pqb));
  const double succ_bound =
      std::floor(kappa_p * (f0 - f_low) * std::pow(config.epsilon, -(p + beta) / pqb)) +
      1.0;
  return std::floor(
      succ_bound * (1.0 + std::abs(std::log(config.gamma1)) / std::log(config.gamma2)) +
      std::log(sigma_max / config.sigma0) / std::log(config.gamma2));
}

}  // namespace arp
