// End-to-end acceptance suite: each numbered criterion prints one PASS/FAIL
// line; the process exits nonzero when any criterion fails.

#include "arp/driver.hpp"
#include "arp/hermite.hpp"
#include "arp/optimality.hpp"
#include "arp/problems.hpp"
#include "arp/sweep.hpp"
#include "arp/tensor.hpp"
#include "helpers.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace arp;
using namespace testing_oracles;

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

std::string at(const std::string& ctx) { return " [" + ctx + "]"; }

Eigen::VectorXd scalar_vec(double x) {
  Eigen::VectorXd v(1);
  v[0] = x;
  return v;
}

const std::vector<std::pair<int, int>> kOrderPairs = {{1, 1}, {2, 1}, {2, 2},
                                                      {3, 1}, {3, 2}, {3, 3}};

// --- 1: prescribed-mode runs on the slow instances hit the exact counts ---

void criterion_exact_counts() {
  const double eps_grid[3] = {0.5, 0.25, 0.1};
  // ceil(eps^{-(p+1)/(p-q+1)}) per (p, q) pair, worked out by hand.
  const long expected[6][3] = {{4, 16, 100},  {3, 8, 32},   {8, 64, 1000},
                               {3, 7, 22},    {4, 16, 100}, {16, 256, 10000}};
  for (std::size_t i = 0; i < kOrderPairs.size(); ++i) {
    const auto [p, q] = kOrderPairs[i];
    for (int e = 0; e < 3; ++e) {
      const double eps = eps_grid[e];
      std::ostringstream ctx;
      ctx << "p=" << p << " q=" << q << " eps=" << eps;
      const SlowInstance inst = build_slow_instance(p, q, eps);
      require(inst.k_eps == expected[i][e], "k_eps mismatch" + at(ctx.str()));

      auto oracle = oracle_from_interpolant(inst.interpolant, inst.p);
      const SolverConfig config = SolverConfig::prescribed(p, q, eps);
      const SolverReport r = solve(*oracle, scalar_vec(inst.nodes.front()),
                                   FeasibleRegion::whole_space(1), config);
      require(r.status == SolverStatus::ConvergedStep1,
              "run did not end by the order-q measure" + at(ctx.str()));
      require(r.successful_iterations == inst.k_eps,
              "successful-iteration count off" + at(ctx.str()));
      require(r.unsuccessful_iterations == 0,
              "unexpected unsuccessful iteration" + at(ctx.str()));
      require(static_cast<long>(r.trace.size()) == inst.k_eps,
              "trace length off" + at(ctx.str()));
    }
  }
}

// --- 2: evaluation counts scale with the predicted exponent ---

void criterion_slope() {
  for (const auto& [p, q] : kOrderPairs) {
    std::vector<SweepCell> cells;
    for (double eps : eps_grid_pow2(1, 11, p, q, true))
      cells.push_back({"slow", p, q, eps});
    std::ostringstream ctx;
    ctx << "p=" << p << " q=" << q << " (" << cells.size() << " eps values)";
    require(cells.size() >= 4, "grid too short" + at(ctx.str()));
    const SweepResult res = run_sweep(cells, SolverConfig{});
    require(res.slope_valid, "no slope fitted" + at(ctx.str()));
    const double want = (p + 1.0) / (p - q + 1.0);
    std::ostringstream got;
    got << "slope " << res.slope << " vs " << want;
    require(std::abs(res.slope - want) <= 0.15, got.str() + at(ctx.str()));
  }
}

// --- 3: observed evaluation counts stay under the worst-case bound ---

void criterion_upper_bound() {
  struct Run {
    const char* problem;
    int p, q;
  };
  const std::vector<Run> runs = {
      {"quartic1d", 3, 1},      {"quartic1d", 4, 1},    {"quartic1d", 3, 2},
      {"quartic1d-well", 3, 1}, {"quartic1d-well", 4, 1},
      {"quadratic2", 2, 1},     {"quadratic2", 2, 2},
      {"quadratic5", 2, 1},     {"quadratic5", 2, 2},
      {"rosenbrock-ray", 3, 1}, {"rosenbrock-ray", 3, 2},
      {"rosenbrock-ray", 3, 3}};
  for (const Run& run : runs) {
    const ProblemSpec& spec = find_problem(run.problem);
    const double L = *spec.L_by_p[run.p - 1];
    const double f_low = *spec.f_low;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
      std::ostringstream ctx;
      ctx << run.problem << " p=" << run.p << " q=" << run.q << " eps=" << eps;
      SolverConfig config;
      config.p = run.p;
      config.q = run.q;
      config.epsilon = eps;
      auto oracle = spec.make_oracle();
      const double f0 = oracle->value(spec.x0);
      oracle->reset_counters();
      const SolverReport r = solve(*oracle, spec.x0, spec.region, config);
      require(r.status != SolverStatus::IterationCap,
              "run hit the iteration cap" + at(ctx.str()));
      const double bound = theoretical_eval_bound(config, f0, f_low, L);
      require(static_cast<double>(r.trace.size()) <= bound,
              "iteration count above the bound" + at(ctx.str()));
      require(static_cast<double>(r.f_evals) <= bound + 1.0,
              "f-evaluation count above the bound" + at(ctx.str()));
      for (long c : r.deriv_evals)
        require(static_cast<double>(c) <= bound + 1.0,
                "derivative-evaluation count above the bound" + at(ctx.str()));
    }
  }
}

// --- 4: embedded runs replay the univariate trace coordinate for coordinate ---

void criterion_embedding() {
  for (double eps : {0.5, 0.25}) {
    const SlowInstance inst = build_slow_instance(2, 1, eps);
    const SolverConfig config = SolverConfig::prescribed(2, 1, eps);

    auto plain = oracle_from_interpolant(inst.interpolant, inst.p);
    const SolverReport uni = solve(*plain, scalar_vec(inst.nodes.front()),
                                   FeasibleRegion::whole_space(1), config);
    require(uni.status == SolverStatus::ConvergedStep1, "univariate run failed");

    Eigen::VectorXd u3(3);
    u3 << 1.0, 2.0, 2.0;
    u3.normalize();
    Eigen::VectorXd u2(2);
    u2 << 0.6, 0.8;

    struct Variant {
      const char* name;
      EmbeddedProblem emb;
    };
    Variant variants[] = {
        {"R^3 whole space",
         embed_instance(inst, 3, u3, FeasibleRegion::Kind::WholeSpace)},
        {"R^2 ray", embed_instance(inst, 2, u2, FeasibleRegion::Kind::Ray)}};
    for (Variant& v : variants) {
      std::ostringstream ctx;
      ctx << v.name << " eps=" << eps;
      const Eigen::VectorXd u = v.emb.x0.size() == 3 ? u3 : u2;
      const SolverReport r = solve(*v.emb.oracle, v.emb.x0, v.emb.region, config);
      require(r.status == uni.status, "status mismatch" + at(ctx.str()));
      require(r.trace.size() == uni.trace.size(),
              "trace length mismatch" + at(ctx.str()));
      for (std::size_t k = 0; k < uni.trace.size(); ++k)
        require(std::abs(u.dot(r.trace[k].x) - uni.trace[k].x[0]) <= 1e-12,
                "iterate mismatch at k=" + std::to_string(k) + at(ctx.str()));
      require(std::abs(u.dot(r.x_final) - uni.x_final[0]) <= 1e-12,
              "final iterate mismatch" + at(ctx.str()));
    }
  }
}

// --- 5: interpolation end conditions and certified segment data ---

void criterion_hermite_suite() {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> data(-3.0, 3.0);
  std::uniform_real_distribution<double> width(0.3, 2.0);
  for (int p = 1; p <= 4; ++p) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> f0(p + 1), f1(p + 1);
      for (double& d : f0) d = data(rng);
      for (double& d : f1) d = data(rng);
      const double s = width(rng);
      const HermiteSegment seg = hermite_interpolate(f0, f1, s);
      double scale = 1.0;
      for (int i = 0; i <= p; ++i)
        scale = std::max({scale, std::abs(f0[i]), std::abs(f1[i])});
      for (int i = 0; i <= p; ++i) {
        std::ostringstream ctx;
        ctx << "p=" << p << " trial=" << trial << " order=" << i;
        require(std::abs(seg.eval(0.0, i) - f0[i]) <= 1e-7 * scale,
                "left end condition" + at(ctx.str()));
        require(std::abs(seg.eval(s, i) - f1[i]) <= 1e-7 * scale,
                "right end condition" + at(ctx.str()));
      }
    }
  }

  double factorial_qm1 = 1.0;
  for (const auto& [p, q] : kOrderPairs) {
    factorial_qm1 = 1.0;
    for (int i = 2; i <= q - 1; ++i) factorial_qm1 *= i;
    for (double eps : {0.5, 0.25}) {
      const SlowInstance inst = build_slow_instance(p, q, eps);
      for (const auto& seg : inst.interpolant.segments) {
        // Throws when the data bound or the sampled quotients fail.
        const double L = lipschitz_certificate(seg, factorial_qm1);
        std::ostringstream ctx;
        ctx << "p=" << p << " q=" << q << " eps=" << eps;
        require(L > 0.0 && std::isfinite(L),
                "degenerate certified constant" + at(ctx.str()));
      }
    }
  }
}

// --- 6: regularization-power derivative norms against finite differences ---

void criterion_regpower() {
  std::mt19937 rng(57);
  std::uniform_real_distribution<double> unif(-1.8, 1.8);
  for (double beta : {0.5, 1.0}) {
    for (int p = 1; p <= 3; ++p) {
      int checked = 0;
      while (checked < 50) {
        const int n = 1 + static_cast<int>(rng() % 3);
        Eigen::VectorXd s(n);
        for (int i = 0; i < n; ++i) s[i] = unif(rng);
        if (s.norm() < 0.5) continue;
        std::ostringstream ctx;
        ctx << "p=" << p << " beta=" << beta << " n=" << n << " case=" << checked;
        auto field = [&](const Eigen::VectorXd& x) {
          return std::pow(x.norm(), p + beta);
        };

        const double v0 = regpower_derivative_norm(p, beta, 0, s.norm());
        require(std::abs(v0 - field(s)) <= 1e-4 * std::max(1.0, std::abs(v0)),
                "order-0 value" + at(ctx.str()));

        const double g = fd_gradient(field, s).norm();
        const double v1 = regpower_derivative_norm(p, beta, 1, s.norm());
        require(std::abs(v1 - g) <= 1e-4 * std::max(1.0, v1),
                "gradient norm" + at(ctx.str()));

        if (p + beta >= 2.0) {  // order 2 exists as a classical derivative
          const Eigen::MatrixXd H = fd_hessian(field, s, 1e-3);
          const double h =
              Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues()
                  .cwiseAbs()
                  .maxCoeff();
          const double v2 = regpower_derivative_norm(p, beta, 2, s.norm());
          require(std::abs(v2 - h) <= 1e-4 * std::max(1.0, v2),
                  "Hessian norm" + at(ctx.str()));
        }
        ++checked;
      }
    }
  }
}

// --- 7: phi oracles against dense grid searches ---

void criterion_phi_oracles() {
  {
    std::mt19937 rng(203);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const auto region = FeasibleRegion::whole_space(2);
    const Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::MatrixXd H(2, 2);
      Eigen::VectorXd g(2);
      const double a = unif(rng), b = unif(rng), c = unif(rng);
      H << a, b, b, c;
      if (trial % 5 == 0) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        H = es.eigenvectors() *
            Eigen::Vector2d(-std::abs(a) - 1.0, std::abs(c) + 0.5).asDiagonal() *
            es.eigenvectors().transpose();
        g = es.eigenvectors().col(1) * 0.3;  // hard case: g orthogonal to v_min
      } else {
        g << unif(rng), unif(rng);
      }
      const double delta = 0.2 + 0.6 * (unif(rng) + 1.0) / 2.0;
      const double phi =
          phi_order2(g, SymmetricTensor::from_matrix(H), delta, region, x).phi;
      const double ref = std::max(0.0, -polar_quad_min(g, H, delta));
      require(std::abs(phi - ref) <= 1e-4,
              "order-2 measure off at trial " + std::to_string(trial));
    }
  }
  {
    std::mt19937 rng(311);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> du(0.1, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const int deg = 1 + static_cast<int>(rng() % 4);
      std::vector<double> coeffs(deg);
      for (double& c : coeffs) c = coef(rng);
      const double delta = du(rng);
      auto poly_val = [&](double d) {
        double acc = 0.0;
        for (int l = deg; l >= 1; --l) acc = acc * d + coeffs[l - 1];
        return acc * d;
      };
      const auto [phi, dstar] = phi_univariate_coeffs(
          coeffs, delta, -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity());
      const auto [gt, gv] = grid_min(poly_val, -delta, delta, 100000, false);
      require(std::abs(phi - std::max(0.0, -gv)) <= 1e-8,
              "univariate measure off at trial " + std::to_string(trial));
      require(poly_val(dstar) <= gv + 1e-8,
              "reported minimizer not optimal at trial " + std::to_string(trial));
      (void)gt;
    }
  }
}

// --- 8: every adaptive registry run passes its post-hoc audit ---

void criterion_audits() {
  struct Run {
    const char* problem;
    int p, q;
    long cap;  // 0 keeps the default
  };
  const std::vector<Run> runs = {
      {"quartic1d", 2, 1, 0},      {"quartic1d", 3, 1, 0},
      {"quartic1d", 4, 1, 0},      {"quartic1d", 3, 2, 0},
      {"quartic1d-well", 3, 1, 0}, {"quadratic2", 2, 1, 0},
      {"quadratic2", 2, 2, 0},     {"quadratic5", 2, 1, 0},
      {"quadratic5", 2, 2, 0},     {"rosenbrock", 2, 1, 0},
      {"rosenbrock-ray", 3, 1, 0}, {"rosenbrock-ray", 3, 3, 0},
      {"hancock-peano", 2, 1, 150}, {"hancock-peano", 2, 2, 300}};
  for (const Run& run : runs) {
    const ProblemSpec& spec = find_problem(run.problem);
    std::ostringstream ctx;
    ctx << run.problem << " p=" << run.p << " q=" << run.q;
    SolverConfig config;
    config.p = run.p;
    config.q = run.q;
    config.epsilon = 1e-3;
    if (run.cap > 0) config.max_iterations = run.cap;
    std::optional<double> L;
    if (static_cast<int>(spec.L_by_p.size()) >= run.p) L = spec.L_by_p[run.p - 1];
    auto oracle = spec.make_oracle();
    const SolverReport r = solve(*oracle, spec.x0, spec.region, config);
    const AuditResult audit = audit_run(r, L, config);
    std::string what = "audit violation" + at(ctx.str()) + ":";
    for (const auto& v : audit.violations) what += " " + v + ";";
    require(audit.ok, what);
  }
}

// --- 9: the bivariate quartic stalls every line search yet is no minimizer ---

void criterion_peano() {
  auto oracle = find_problem("hancock-peano").make_oracle();
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
  require(oracle->value(origin) == 0.0, "value at the origin is not zero");
  require(oracle->derivative(origin, 1).as_vector().norm() == 0.0,
          "gradient at the origin is not zero");
  const Eigen::MatrixXd H = oracle->derivative(origin, 2).as_matrix();
  require(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues()[0] >=
              -1e-14,
          "Hessian at the origin is not positive semidefinite");

  // Along every sampled line the origin is a strict local minimum.  The
  // negative lobe sits between x2 = x1^2/2 and x2 = x1^2, so a line of
  // slope u2/u1 stays positive until |x1| reaches |u2/u1|; the check runs
  // up to 90% of that entry radius (clipped to 1).
  for (int i = 0; i < 360; ++i) {
    const double th = M_PI * i / 360.0;
    Eigen::VectorXd u(2);
    u << std::cos(th), std::sin(th);
    double r = 1.0;
    if (std::abs(u[0]) > 1e-12 && std::abs(u[1]) > 1e-12)
      r = std::min(1.0, 0.9 * std::abs(u[1]) / (u[0] * u[0]));
    for (int j = 1; j <= 400; ++j) {
      const double t = r * j / 400.0;
      std::ostringstream ctx;
      ctx << "direction " << i << " t=" << t;
      require(oracle->value(t * u) > 0.0,
              "line restriction not positive" + at(ctx.str()));
      require(oracle->value(-t * u) > 0.0,
              "line restriction not positive" + at(ctx.str()));
    }
  }

  // Yet the parabolic arc descends: f(t, 3/4 t^2) = -t^4/16 < 0.
  for (int j = 1; j <= 100; ++j) {
    const double t = 0.5 * j / 100.0;
    Eigen::VectorXd x(2);
    x << t, 0.75 * t * t;
    require(oracle->value(x) < 0.0, "arc value not negative at t=" + std::to_string(t));
  }
}

struct Criterion {
  int id;
  const char* label;
  std::function<void()> fn;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exact slow-run iteration counts", criterion_exact_counts},
      {2, "evaluation-count scaling exponent", criterion_slope},
      {3, "worst-case evaluation bound compliance", criterion_upper_bound},
      {4, "embedded runs replay the univariate trace", criterion_embedding},
      {5, "Hermite end conditions and segment certificates", criterion_hermite_suite},
      {6, "regularization-power derivative norms", criterion_regpower},
      {7, "optimality-measure oracles vs grid search", criterion_phi_oracles},
      {8, "post-hoc audits on adaptive registry runs", criterion_audits},
      {9, "line-search stall point that is no minimizer", criterion_peano}};

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    try {
      c.fn();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    if (detail.empty()) {
      std::printf("criterion %d: PASS  (%s)\n", c.id, c.label);
    } else {
      ++failures;
      std::printf("criterion %d: FAIL  (%s): %s\n", c.id, c.label, detail.c_str());
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
