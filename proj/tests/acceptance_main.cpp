// Acceptance suite: one self-contained check per release criterion, one
// PASS/FAIL line each, nonzero exit if anything fails. Tolerances are pinned
// here on purpose; do not relax them to make a run pass.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "viscotherm/audit.hpp"
#include "viscotherm/closure.hpp"
#include "viscotherm/config.hpp"
#include "viscotherm/constitutive.hpp"
#include "viscotherm/regularization.hpp"
#include "viscotherm/runner.hpp"
#include "viscotherm/solver.hpp"
#include "viscotherm/util.hpp"

using namespace viscotherm;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

class Criterion {
 public:
  Criterion(int id, const char* name, double budget_s)
      : id_(id), name_(name), budget_s_(budget_s),
        start_(std::chrono::steady_clock::now()) {}

  void finish(bool pass, const std::string& detail) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (secs > budget_s_) {
      pass = false;
      std::printf("FAIL %2d %-24s %s [%.1fs over the %.0fs budget]\n", id_, name_,
                  detail.c_str(), secs, budget_s_);
    } else {
      std::printf("%s %2d %-24s %s [%.1fs]\n", pass ? "PASS" : "FAIL", id_, name_,
                  detail.c_str(), secs);
    }
    std::fflush(stdout);
    if (!pass) ++g_failures;
  }

 private:
  int id_;
  const char* name_;
  double budget_s_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* f, ...) {
  va_list ap;
  va_start(ap, f);
  char buf[512];
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// --- model zoo -------------------------------------------------------------

void bend_psi1(FreeEnergyModel& m, double m0, double m1, double q) {
  m.psi1.value = [=](double th) { return m0 + m1 * (1.0 - std::exp(-q * th)); };
  m.psi1.d1 = [=](double th) { return m1 * q * std::exp(-q * th); };
  m.psi1.d2 = [=](double th) { return -m1 * q * q * std::exp(-q * th); };
}

struct NamedModel {
  std::string name;
  FreeEnergyModel m;
  MaterialCoefficients c;
};

// the fixed preset plus two randomized admissible relatives
std::vector<NamedModel> sample_models(std::mt19937_64& rng) {
  std::vector<NamedModel> out;
  {
    auto [m, c] = preset_oldroyd_b(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
    out.push_back({"preset", m, c});
  }
  std::uniform_real_distribution<double> u(0.5, 2.0);
  {
    auto [m, c] = preset_oldroyd_b(u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng));
    out.push_back({"random-constant", m, c});
  }
  {
    auto [m, c] = preset_oldroyd_b(u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng));
    bend_psi1(m, 0.5 + 0.5 * u(rng), 0.25 * u(rng), u(rng));
    out.push_back({"random-bent", m, c});
  }
  return out;
}

// --- shared run artifacts --------------------------------------------------

struct RunResult {
  std::vector<BudgetSample> series;
  double t1 = 0.0;
};

SimulationConfig conservation_config(bool stickslip) {
  SimulationConfig cfg;
  cfg.domain = {1.0, 1.0};
  cfg.scalar_modes = {24, 24};
  cfg.velocity_modes = {16, 16};
  auto [m, c] = preset_oldroyd_b(1.0, 1.0, 1.0, 1.0, 0.5, 0.1, 0.5);
  cfg.model = m;
  cfg.coeffs = c;
  cfg.reg_epsilon = 1e-2;
  cfg.t0 = 0.0;
  cfg.t1 = 0.5;
  cfg.ode.rel_tol = 1e-8;
  cfg.ode.abs_tol = 1e-11;
  cfg.threads = 2;
  if (stickslip) cfg.stickslip = {0.3, 1.0, 0.1};
  cfg.initial.theta0 = [](double x, double y) {
    return 1.0 + 0.1 * std::cos(kPi * x) * std::cos(kPi * y);
  };
  cfg.initial.b0 = [](double x, double y) {
    return 1.0 + 0.1 * std::cos(2.0 * kPi * x) * std::cos(kPi * y);
  };
  Eigen::VectorXd c0 = Eigen::VectorXd::Zero(256);
  c0(0) = 0.25;
  c0(17) = -0.15;
  c0(32) = 0.1;
  cfg.initial.v0_coeffs = c0;
  return cfg;
}

RunResult run_sampled(const SimulationConfig& cfg, double cadence) {
  Simulator sim(cfg);
  RunResult out;
  out.t1 = cfg.t1;
  sim.integrate([&](const StepRecord& r) {
    if (out.series.empty() || r.state.t == cfg.t1 ||
        r.state.t >= out.series.size() * cadence)
      out.series.push_back(sample_budgets(sim, r));
  });
  return out;
}

double worst_energy_drift(const std::vector<BudgetSample>& series) {
  const double E0 = series.front().total;
  double worst = 0.0;
  for (const auto& s : series)
    worst = std::max(worst, std::abs(s.total + s.work_acc - s.body_acc - E0) /
                                std::max(1.0, std::abs(E0)));
  return worst;
}

// --- criteria --------------------------------------------------------------

void criterion_1(std::mt19937_64& rng) {
  Criterion cr(1, "inversion-round-trip", 5.0);
  double worst = 0.0;
  std::string where;
  for (const auto& nm : sample_models(rng)) {
    const ValidationReport rep = validate_assumptions(nm.m, nm.c);
    if (!rep.pass) {
      cr.finish(false, "model " + nm.name + " failed admissibility validation");
      return;
    }
    for (double eps : {0.0, 1e-2}) {
      const RegularizedModel r = build_psi1_eps(nm.m, eps);
      for (int k = 0; k < 256; ++k) {
        const double th = std::pow(10.0, -3.0 + 6.0 * k / 255.0);
        for (int q = 0; q < 64; ++q) {
          const double b = nm.c.b_min + (nm.c.b_max - nm.c.b_min) * q / 63.0;
          const double back = theta_from_e(r, e_eps(r, th, b), b);
          const double err = std::abs(back - th);
          if (err > worst) {
            worst = err;
            where = fmt("%s eps=%g theta=%.3e", nm.name.c_str(), eps, th);
          }
        }
      }
    }
  }
  cr.finish(worst <= 1e-10, fmt("worst |theta_back - theta| = %.2e <= 1e-10 (%s)",
                                worst, where.c_str()));
}

void criterion_2(std::mt19937_64& rng) {
  Criterion cr(2, "derivative-identities", 5.0);
  double worst_eta = 0.0, worst_e = 0.0;
  for (const auto& nm : sample_models(rng)) {
    for (int k = 0; k < 256; ++k) {
      const double th = std::pow(10.0, -3.0 + 6.0 * k / 255.0);
      const double h = 1e-5 * th;
      for (int q = 0; q < 64; ++q) {
        const double b = nm.c.b_min + (nm.c.b_max - nm.c.b_min) * q / 63.0;
        const double fd = -(psi(nm.m, th + h, b) - psi(nm.m, th - h, b)) / (2.0 * h);
        const double et = eta(nm.m, th, b);
        worst_eta = std::max(worst_eta, std::abs(fd - et) / std::max(1.0, std::abs(et)));
        const double e = internal_energy(nm.m, th, b);
        const double mix = psi(nm.m, th, b) + th * et;
        worst_e = std::max(worst_e, std::abs(e - mix) / std::max(1.0, std::abs(e)));
      }
    }
  }
  cr.finish(worst_eta <= 1e-6 && worst_e <= 1e-6,
            fmt("eta vs FD %.2e, e vs psi+theta*eta %.2e (both <= 1e-6)", worst_eta,
                worst_e));
}

void criterion_3(std::mt19937_64& rng) {
  Criterion cr(3, "production-nonnegative", 10.0);
  auto [mo, co] = preset_oldroyd_b(1.0, 1.0, 1.3, 0.8, 0.6, 0.4, 0.9);
  auto [mg, cg] = preset_giesekus(1.1, 0.9, 1.2, 0.7, 0.5, 0.3, 0.8, 0.3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double min_field = 0.0, worst_id = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const bool use_g = (k & 1) != 0;
    const FreeEnergyModel& m = use_g ? mg : mo;
    const MaterialCoefficients& c = use_g ? cg : co;
    const double th = std::pow(10.0, u(rng));
    const double b = 0.02 + 0.66 * (u(rng) + 3.0);  // (0.02, 4]
    StateGradients g;
    g.grad_theta = Vec2(u(rng), u(rng));
    g.grad_b = Vec2(u(rng), u(rng));
    g.D = SymTensor2{u(rng), u(rng), u(rng)};
    const DissipationBreakdown d = entropy_production(m, c, th, b, g);
    min_field = std::min({min_field, d.thermal, d.viscous, d.relaxation,
                          d.stress_diffusion});
    if (!use_g) {
      const double closed = scalar_oldroyd_heating(1.3, 0.8, b);
      worst_id = std::max(worst_id,
                          std::abs(d.relaxation - closed) / std::max(1.0, closed));
    }
  }
  cr.finish(min_field >= -1e-14 && worst_id <= 1e-12,
            fmt("min field %.2e >= -1e-14, closed-form relaxation gap %.2e <= 1e-12",
                min_field, worst_id));
}

void criterion_4() {
  Criterion cr(4, "regularization-cert", 5.0);
  const double C_shared = 64.0;  // one constant for every epsilon below
  auto [m_const, cc] = preset_oldroyd_b(1.0, 1.0, 1.4, 1.0, 1.0, 1.0, 1.0);
  auto m_bent = m_const;
  bend_psi1(m_bent, 0.8, 0.5, 1.3);
  double worst_match = 0.0, worst_lin = 0.0, worst_conv = 0.0, worst_bound = 0.0;
  for (const FreeEnergyModel* mp : {&m_const, &m_bent}) {
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      const RegularizedModel r = build_psi1_eps(*mp, eps);
      for (int k = 0; k < 64; ++k) {
        const double s = eps + (10.0 - eps) * k / 63.0;
        worst_match = std::max(worst_match,
                               std::abs(r.psi1eps.value(s) - mp->psi1.value(s)) /
                                   std::max(1.0, mp->psi1.value(s)));
      }
      const double half = 0.5 * eps;
      const double slope = r.psi1eps.value(half) / half;
      for (int k = 1; k <= 32; ++k) {
        const double s = half * k / 33.0;
        worst_lin = std::max({worst_lin, std::abs(r.psi1eps.d2(s)),
                              std::abs(r.psi1eps.value(s) - slope * s) /
                                  std::max(1.0, r.psi1eps.value(half))});
      }
      for (int k = 1; k <= 256; ++k) {
        const double s = 2.0 * eps * k / 256.0;
        worst_conv = std::max(worst_conv, r.psi1eps.d2(s));
      }
      for (int k = 1; k <= 64; ++k) {
        const double s = eps * k / 65.0;
        worst_bound = std::max(worst_bound, eps * std::abs(r.psi1eps.d1(s)) +
                                                eps * eps * std::abs(r.psi1eps.d2(s)));
      }
    }
  }
  const bool pass = worst_match <= 1e-12 && worst_lin <= 1e-12 &&
                    worst_conv <= 1e-12 && worst_bound <= C_shared;
  cr.finish(pass, fmt("match %.2e, linearity %.2e, convexity excess %.2e, "
                      "eps-bound %.2f <= C=%.0f",
                      worst_match, worst_lin, worst_conv, worst_bound, C_shared));
}

void criterion_5(RunResult& free_slip, RunResult& stick) {
  Criterion cr(5, "energy-conservation", 300.0);
  free_slip = run_sampled(conservation_config(false), 0.01);
  stick = run_sampled(conservation_config(true), 0.01);
  const double drift_free = worst_energy_drift(free_slip.series);
  const double drift_slip = worst_energy_drift(stick.series);
  const double w = stick.series.back().work_acc;
  cr.finish(drift_free <= 1e-6 && drift_slip <= 1e-6 && w > 0.0,
            fmt("free-slip drift %.2e, stick-slip drift net of %.3f boundary work "
                "%.2e (both <= 1e-6)",
                drift_free, w, drift_slip));
}

void criterion_6(const RunResult& free_slip, const RunResult& stick) {
  Criterion cr(6, "entropy-monotone", 900.0);
  double worst_drop = 0.0;
  for (const RunResult* rr : {&free_slip, &stick}) {
    for (size_t k = 1; k < rr->series.size(); ++k) {
      const double S = rr->series[k].entropy;
      worst_drop = std::max(worst_drop, (rr->series[k - 1].entropy - S) /
                                            std::max(1.0, std::abs(S)));
    }
  }

  // refinement study: the entropy balance residual under mode doubling
  std::vector<double> residual;
  for (int M : {6, 12, 24}) {
    SimulationConfig cfg;
    cfg.domain = {1.0, 1.0};
    cfg.scalar_modes = {M, M};
    cfg.velocity_modes = {0, 0};
    auto [m, c] = preset_oldroyd_b(1.0, 1.0, 1.0, 1.0, 0.3, 0.1, 0.3);
    cfg.model = m;
    cfg.coeffs = c;
    cfg.reg_epsilon = 1e-2;
    cfg.mode = RunMode::kinematic;
    cfg.t0 = 0.0;
    cfg.t1 = 0.2;
    cfg.ode.rel_tol = 1e-10;
    cfg.ode.abs_tol = 1e-13;
    cfg.threads = 2;
    cfg.initial.theta0 = [](double x, double y) {
      return 1.0 + 0.3 * std::tanh(4.0 * std::cos(kPi * x) * std::cos(kPi * y)) /
                       std::tanh(4.0);
    };
    cfg.initial.b0 = [](double x, double y) {
      return 1.1 + 0.35 * std::tanh(4.0 * std::cos(2.0 * kPi * x) * std::cos(kPi * y)) /
                       std::tanh(4.0);
    };
    Simulator sim(cfg);
    std::vector<BudgetSample> series;
    sim.integrate([&](const StepRecord& r) { series.push_back(sample_budgets(sim, r)); });
    residual.push_back(entropy_balance_residual(series));
  }
  const bool halves =
      residual[1] <= 0.5 * residual[0] && residual[2] <= 0.5 * residual[1];
  cr.finish(worst_drop <= 1e-8 && halves,
            fmt("worst drop %.2e <= 1e-8; balance residual %.2e -> %.2e -> %.2e "
                "halves per doubling",
                worst_drop, residual[0], residual[1], residual[2]));
}

void criterion_7() {
  Criterion cr(7, "b-minmax-principle", 300.0);
  const double tol_b = 5e-3 * 0.8;
  std::vector<double> violation;
  bool contained = true;
  for (int M : {8, 16, 32}) {
    SimulationConfig cfg;
    cfg.domain = {1.0, 1.0};
    cfg.scalar_modes = {M, M};
    cfg.velocity_modes = {0, 0};
    auto [m, c] = preset_oldroyd_b(1.0, 1.0, 1.0, 1.0, 0.3, 0.1, 0.3);
    cfg.model = m;
    cfg.coeffs = c;
    cfg.reg_epsilon = 1e-2;
    cfg.mode = RunMode::kinematic;
    cfg.t0 = 0.0;
    cfg.t1 = 1.0;
    cfg.ode.rel_tol = 1e-8;
    cfg.ode.abs_tol = 1e-11;
    cfg.threads = 2;
    cfg.initial.theta0 = [](double, double) { return 1.0; };
    cfg.initial.b0 = [](double x, double y) {
      return 1.1 + 0.4 * std::tanh(2.0 * std::cos(kPi * x) * std::cos(2.0 * kPi * y)) /
                       std::tanh(2.0);
    };
    Simulator sim(cfg);
    double viol = 0.0;
    sim.integrate([&](const StepRecord& r) {
      const BudgetSample s = sample_budgets(sim, r);
      viol = std::max({viol, 0.7 - s.min_b, s.max_b - 1.5});
    });
    viol = std::max(viol, 0.0);
    if (viol > tol_b) contained = false;
    violation.push_back(viol);
  }
  const bool halves = violation[1] <= 0.5 * violation[0] + 1e-12 &&
                      violation[2] <= 0.5 * violation[1] + 1e-12;
  cr.finish(contained && halves,
            fmt("violations %.2e -> %.2e -> %.2e (bound %.1e, halving per doubling)",
                violation[0], violation[1], violation[2], tol_b));
}

void criterion_8() {
  Criterion cr(8, "positivity-floors", 300.0);
  std::vector<double> violation;
  double floor_e = 0.0, floor_t = 0.0, tol_floor = 0.0;
  for (int M : {12, 24}) {
    SimulationConfig cfg;
    cfg.domain = {1.0, 1.0};
    cfg.scalar_modes = {M, M};
    cfg.velocity_modes = {4, 4};
    auto [m, c] = preset_oldroyd_b(1.0, 1.0, 1.0, 1.0, 0.3, 0.1, 0.3);
    cfg.model = m;
    cfg.coeffs = c;
    cfg.reg_epsilon = 1e-2;
    cfg.t0 = 0.0;
    cfg.t1 = 0.25;
    cfg.ode.rel_tol = 1e-8;
    cfg.ode.abs_tol = 1e-11;
    cfg.threads = 2;
    // the cold spot dips below epsilon; the clamped initial energy lifts it
    cfg.initial.theta0 = [](double x, double y) {
      return 0.5 + 0.495 * std::cos(kPi * x) * std::cos(kPi * y);
    };
    cfg.initial.b0 = [](double x, double y) {
      return 1.0 + 0.2 * std::cos(2.0 * kPi * x) * std::cos(kPi * y);
    };
    Eigen::VectorXd c0 = Eigen::VectorXd::Zero(16);
    c0(0) = 0.2;
    cfg.initial.v0_coeffs = c0;
    Simulator sim(cfg);
    floor_e = floor_energy(sim.reg());
    floor_t = floor_theta(sim.reg());
    tol_floor = 1e-3 * floor_e;
    double viol = 0.0;
    sim.integrate([&](const StepRecord& r) {
      const BudgetSample s = sample_budgets(sim, r);
      viol = std::max({viol, floor_e - s.min_e, floor_t - s.min_theta});
    });
    violation.push_back(std::max(viol, 0.0));
  }
  const bool pass = violation[0] <= tol_floor && violation[1] <= tol_floor &&
                    violation[1] <= violation[0] + 1e-15;
  cr.finish(pass, fmt("floor violations %.2e -> %.2e <= %.1e (floors e %.4g, "
                      "theta %.4g), nonincreasing",
                      violation[0], violation[1], tol_floor, floor_e, floor_t));
}

void criterion_9(std::mt19937_64& rng) {
  Criterion cr(9, "stick-slip-graph", 5.0);
  const double delta = 0.1;
  std::uniform_real_distribution<double> umag(delta, 10.0);
  std::uniform_real_distribution<double> uang(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> upar(0.3, 2.0);
  double worst_excess = -1e300;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    for (int k = 0; k < 10000; ++k) {
      const double s_star = (k % 2 == 0) ? 1.3 : upar(rng);
      const double gamma_star = (k % 2 == 0) ? 0.7 : upar(rng);
      const StickSlipParams moll{s_star, gamma_star, eps};
      const StickSlipParams graph{s_star, gamma_star, 0.0};
      const double mag = umag(rng), ang = uang(rng);
      const Vec2 v(mag * std::cos(ang), mag * std::sin(ang));
      const Vec2 back = stick_slip_graph(graph, stick_slip_mollified(moll, v));
      const double err = gamma_star * (back - v).norm();
      const double bound = s_star * eps / (eps + delta);
      worst_excess = std::max(worst_excess, err - bound);
    }
  }
  cr.finish(worst_excess <= 1e-12,
            fmt("worst error minus bound %.2e <= 1e-12 over 3x10^4 samples",
                worst_excess));
}

void criterion_10() {
  Criterion cr(10, "heat-equation-oracle", 30.0);
  SimulationConfig cfg;
  cfg.domain = {1.3, 1.0};
  cfg.scalar_modes = {6, 6};
  cfg.velocity_modes = {0, 0};
  auto [m, c] = preset_oldroyd_b(1.0, 1.0, 1.0, 1.0, 0.4, 0.2, 0.4);
  cfg.model = m;
  cfg.coeffs = c;
  cfg.coeffs.h = [](double, double) { return 0.0; };
  cfg.coeffs.Cfun = [](double, double) { return 0.0; };
  cfg.reg_epsilon = 1e-2;
  cfg.mode = RunMode::kinematic;
  cfg.t0 = 0.0;
  cfg.t1 = 0.1;
  cfg.ode.rel_tol = 1e-8;
  cfg.ode.abs_tol = 1e-11;
  cfg.ode.safety = 0.8;
  cfg.initial.theta0 = [](double, double) { return 1.0; };
  const double amp = 0.04;
  const int mi = 1, mj = 2;
  cfg.initial.b0 = [=](double x, double y) {
    return 1.0 + amp * std::cos(mi * kPi * x / 1.3) * std::cos(mj * kPi * y / 1.0);
  };
  Simulator sim(cfg);
  const StepRecord fin = sim.integrate();
  const double alpha = cfg.coeffs.alpha(1.0, 1.0);
  const double lam = std::pow(mi * kPi / 1.3, 2) + std::pow(mj * kPi / 1.0, 2);
  const double expect = amp * std::exp(-alpha * lam * cfg.t1);
  const double rel =
      std::abs(fin.state.d(mi * 6 + mj) - expect) / std::abs(expect);
  cr.finish(rel <= 10.0 * cfg.ode.rel_tol,
            fmt("mode decay rel err %.2e <= %.0e", rel, 10.0 * cfg.ode.rel_tol));
}

void criterion_11() {
  Criterion cr(11, "thread-determinism", 600.0);
#ifdef _WIN32
#else
  unsetenv("VISCOTHERM_OUT");
#endif
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "viscotherm_accept_c11";
  std::error_code ec;
  fs::remove_all(root, ec);
  fs::create_directories(root);
  const fs::path cfg_path = root / "config.json";
  {
    std::ofstream out(cfg_path);
    out << R"({
      "model": {"preset": "oldroyd_b", "c_V": 1.0, "theta_ref": 1.0,
                "mu_elastic": 1.0, "nu1": 1.0, "mu_tilde": 0.5,
                "nu_visc": 0.1, "kappa_heat": 0.5},
      "domain": {"Lx": 1.0, "Ly": 1.0},
      "resolution": {"scalar": [12, 12], "velocity": [6, 6]},
      "regularization": {"epsilon": 0.01},
      "mode": "dynamic",
      "time": {"t0": 0.0, "t1": 0.1, "rel_tol": 1e-8, "abs_tol": 1e-11},
      "initial": {
        "theta0": {"kind": "cosine", "base": 1.0, "amplitude": 0.1, "i": 1, "j": 1},
        "b0": {"kind": "cosine", "base": 1.0, "amplitude": 0.1, "i": 2, "j": 1},
        "velocity": {"kind": "stream_mode", "i": 1, "j": 1, "amplitude": 0.2}
      },
      "snapshots": [0.05]
    })";
  }
  std::vector<std::string> budgets;
  for (int threads : {1, 2, 0}) {  // 0 resolves to every hardware thread
    CliOptions opt;
    opt.config_path = cfg_path.string();
    opt.out_dir = (root / ("run_t" + std::to_string(threads))).string();
    opt.threads_override = threads;
    const int rc = cmd_run(opt);
    if (rc != 0) {
      cr.finish(false, fmt("cmd_run exited %d for threads=%d", rc, threads));
      return;
    }
    budgets.push_back(read_file(fs::path(opt.out_dir) / "budgets.csv"));
  }
  const bool same = budgets[0] == budgets[1] && budgets[1] == budgets[2];
  cr.finish(same, same ? fmt("budgets.csv byte-identical across 1, 2, max threads "
                             "(%zu bytes)", budgets[0].size())
                       : "budgets.csv differs between thread counts");
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  std::mt19937_64 rng(20260823);
  criterion_1(rng);
  criterion_2(rng);
  criterion_3(rng);
  criterion_4();
  RunResult free_slip, stick;
  criterion_5(free_slip, stick);
  criterion_6(free_slip, stick);
  criterion_7();
  criterion_8();
  criterion_9(rng);
  criterion_10();
  criterion_11();
  if (g_failures == 0) {
    std::printf("all 11 criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}
