#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "viscotherm/solver.hpp"
#include "viscotherm/util.hpp"

using namespace viscotherm;

namespace {

constexpr double kPi = 3.14159265358979323846;

SimulationConfig base_config() {
  SimulationConfig cfg;
  cfg.domain = {1.4, 1.0};
  cfg.scalar_modes = {6, 6};
  cfg.velocity_modes = {3, 3};
  auto [m, c] = preset_oldroyd_b(1.0, 1.0, 1.0, 1.0, 0.3, 0.2, 0.4);
  cfg.model = m;
  cfg.coeffs = c;
  cfg.reg_epsilon = 0.01;
  cfg.t0 = 0.0;
  cfg.t1 = 0.1;
  cfg.ode.rel_tol = 1e-8;
  cfg.ode.abs_tol = 1e-11;
  cfg.initial.theta0 = [](double, double) { return 1.0; };
  cfg.initial.b0 = [](double, double) { return 1.0; };
  return cfg;
}

std::vector<StepRecord> record_all(const Simulator& sim) {
  std::vector<StepRecord> recs;
  sim.integrate([&](const StepRecord& r) { recs.push_back(r); });
  return recs;
}

}  // namespace

TEST_CASE("spatially constant equilibrium is a fixed point") {
  SimulationConfig cfg = base_config();
  Simulator sim(cfg);
  const SimState s0 = sim.initial_state();
  Eigen::VectorXd dc, dd, de;
  Simulator::RhsAccum acc;
  sim.assemble_rhs(s0, dc, dd, de, acc);
  CHECK(dc.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(dd.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(de.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(acc.zeta_rate) <= 1e-13);
  const StepRecord fin = sim.integrate();
  CHECK((fin.state.d - s0.d).cwiseAbs().maxCoeff() <= 1e-11);
  CHECK((fin.state.e_c - s0.e_c).cwiseAbs().maxCoeff() <= 1e-11);
  CHECK(fin.state.c.cwiseAbs().maxCoeff() <= 1e-11);
  CHECK(std::abs(fin.zeta_acc) <= 1e-11);
}

TEST_CASE("initial projections reproduce constant data") {
  SimulationConfig cfg = base_config();
  cfg.initial.theta0 = [](double, double) { return 2.0; };
  cfg.initial.b0 = [](double, double) { return 1.2; };
  Simulator sim(cfg);
  const SimState s0 = sim.initial_state();
  CHECK(s0.d(0) == doctest::Approx(1.2).epsilon(1e-13));
  CHECK(s0.d.tail(s0.d.size() - 1).cwiseAbs().maxCoeff() <= 1e-13);
  const double e_expect = e_eps(sim.reg(), 2.0, 1.2);
  CHECK(s0.e_c(0) == doctest::Approx(e_expect).epsilon(1e-13));
  CHECK(s0.e_c.tail(s0.e_c.size() - 1).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(s0.c.size() == 9);
  CHECK(s0.c.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single b mode decays at the diffusive rate with relaxation off") {
  SimulationConfig cfg = base_config();
  cfg.velocity_modes = {0, 0};
  cfg.mode = RunMode::kinematic;
  cfg.coeffs.h = [](double, double) { return 0.0; };
  cfg.coeffs.Cfun = [](double, double) { return 0.0; };
  const double Lx = cfg.domain.Lx, Ly = cfg.domain.Ly;
  const double amp = 0.05;
  cfg.initial.b0 = [=](double x, double y) {
    return 1.0 + amp * std::cos(kPi * x / Lx) * std::cos(2.0 * kPi * y / Ly);
  };
  cfg.t1 = 0.08;
  cfg.ode.rel_tol = 1e-9;
  cfg.ode.abs_tol = 1e-12;
  Simulator sim(cfg);
  const SimState s0 = sim.initial_state();
  const int flat = 1 * cfg.scalar_modes.My + 2;  // mode (1,2)
  CHECK(s0.d(flat) == doctest::Approx(amp).epsilon(1e-12));
  const StepRecord fin = sim.integrate();
  const double alpha = cfg.coeffs.alpha(1.0, 1.0);
  const double lam = std::pow(kPi / Lx, 2) + std::pow(2.0 * kPi / Ly, 2);
  const double expect = amp * std::exp(-alpha * lam * cfg.t1);
  CHECK(fin.state.d(flat) == doctest::Approx(expect).epsilon(1e-7));
  // pure diffusion with no-flux walls conserves the mean of b
  CHECK(fin.state.d(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(fin.dmass_b) <= 1e-10);
}

TEST_CASE("integration hits snapshot times exactly") {
  SimulationConfig cfg = base_config();
  cfg.initial.b0 = [](double x, double) { return 1.0 + 0.1 * std::cos(kPi * x / 1.4); };
  cfg.snapshot_times = {0.03, 0.07};
  Simulator sim(cfg);
  const std::vector<StepRecord> recs = record_all(sim);
  REQUIRE(recs.size() >= 4);
  CHECK(recs.front().state.t == 0.0);
  CHECK(recs.back().state.t == 0.1);
  bool hit3 = false, hit7 = false;
  for (size_t k = 1; k < recs.size(); ++k) {
    CHECK(recs[k].state.t > recs[k - 1].state.t);
    if (recs[k].state.t == 0.03) hit3 = true;
    if (recs[k].state.t == 0.07) hit7 = true;
  }
  CHECK(hit3);
  CHECK(hit7);
}

TEST_CASE("kinematic velocity coefficients never change") {
  SimulationConfig cfg = base_config();
  cfg.mode = RunMode::kinematic;
  cfg.velocity_modes = {2, 2};
  Eigen::VectorXd c0(4);
  c0 << 0.04, -0.02, 0.01, 0.03;
  cfg.prescribed_coeffs = c0;
  cfg.initial.b0 = [](double x, double) { return 1.0 + 0.1 * std::cos(kPi * x / 1.4); };
  Simulator sim(cfg);
  const std::vector<StepRecord> recs = record_all(sim);
  for (const auto& r : recs) CHECK((r.state.c - c0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("step budget exhaustion raises a solver error") {
  SimulationConfig cfg = base_config();
  cfg.initial.b0 = [](double x, double) { return 1.0 + 0.2 * std::cos(kPi * x / 1.4); };
  cfg.ode.max_steps = 3;
  cfg.ode.rel_tol = 1e-12;
  cfg.ode.abs_tol = 1e-14;
  Simulator sim(cfg);
  CHECK_THROWS_AS(sim.integrate(), SolverError);
}

TEST_CASE("free-slip unforced runs conserve total energy to roundoff") {
  SimulationConfig cfg = base_config();
  cfg.initial.theta0 = [](double x, double y) {
    return 1.0 + 0.1 * std::cos(kPi * x / 1.4) * std::cos(kPi * y);
  };
  cfg.initial.b0 = [](double x, double) { return 1.0 + 0.08 * std::cos(2.0 * kPi * x / 1.4); };
  Eigen::VectorXd c0 = Eigen::VectorXd::Zero(9);
  c0(0) = 0.06;  // stream mode (1,1)
  c0(4) = -0.04;
  cfg.initial.v0_coeffs = c0;
  cfg.t1 = 0.05;
  Simulator sim(cfg);
  const std::vector<StepRecord> recs = record_all(sim);
  auto total = [&](const StepRecord& r) {
    const NodeFields f = sim.synthesize(r.state);
    return sim.kinetic_energy(r.state) + sim.ws().integrate(f.e);
  };
  const double E0 = total(recs.front());
  for (const auto& r : recs) {
    CHECK(std::abs(total(r) - E0) <= 1e-10 * std::max(1.0, std::abs(E0)));
    CHECK(r.work_acc == 0.0);
    CHECK(r.body_acc == 0.0);
  }
  // entropy production accumulates monotonically
  for (size_t k = 1; k < recs.size(); ++k)
    CHECK(recs[k].zeta_acc >= recs[k - 1].zeta_acc - 1e-14);
  CHECK(recs.back().zeta_acc > 0.0);
}

TEST_CASE("stick-slip walls drain energy through the recorded boundary work") {
  SimulationConfig cfg = base_config();
  cfg.stickslip = {0.5, 1.0, 0.1};
  Eigen::VectorXd c0 = Eigen::VectorXd::Zero(9);
  c0(0) = 0.3;
  cfg.initial.v0_coeffs = c0;
  cfg.t1 = 0.05;
  Simulator sim(cfg);
  const std::vector<StepRecord> recs = record_all(sim);
  auto total = [&](const StepRecord& r) {
    const NodeFields f = sim.synthesize(r.state);
    return sim.kinetic_energy(r.state) + sim.ws().integrate(f.e);
  };
  const double E0 = total(recs.front());
  const StepRecord& fin = recs.back();
  CHECK(fin.work_acc > 0.0);
  CHECK(std::abs(total(fin) + fin.work_acc - E0) <= 1e-9 * std::max(1.0, std::abs(E0)));
  // wall traction opposes the slip direction at every edge node
  for (int e = 0; e < 4; ++e) {
    const Edge edge = static_cast<Edge>(e);
    const Eigen::VectorXd vt = sim.ws().edge_velocity(edge, fin.state.c);
    const Eigen::VectorXd tr = sim.edge_traction(edge, fin.state.c);
    for (int q = 0; q < vt.size(); ++q) CHECK(vt(q) * tr(q) >= 0.0);
  }
}

TEST_CASE("body forcing feeds the recorded power accumulator") {
  SimulationConfig cfg = base_config();
  cfg.body_force = [](double x, double y) {
    return Vec2(0.2 * std::sin(kPi * x / 1.4) * std::cos(kPi * y),
                -0.2 * std::cos(kPi * x / 1.4) * std::sin(kPi * y));
  };
  cfg.t1 = 0.05;
  Simulator sim(cfg);
  const std::vector<StepRecord> recs = record_all(sim);
  auto total = [&](const StepRecord& r) {
    const NodeFields f = sim.synthesize(r.state);
    return sim.kinetic_energy(r.state) + sim.ws().integrate(f.e);
  };
  const double E0 = total(recs.front());
  const StepRecord& fin = recs.back();
  CHECK(std::abs(fin.body_acc) > 0.0);
  CHECK(std::abs(total(fin) - fin.body_acc - E0) <= 1e-9 * std::max(1.0, std::abs(E0)));
}

TEST_CASE("reported internal-energy rate matches the viscous heating") {
  // with conduction, relaxation and stress diffusion all integrating to zero
  // mean, d/dt int e reduces to int 2 nu |D|^2 at the initial instant
  SimulationConfig cfg = base_config();
  Eigen::VectorXd c0 = Eigen::VectorXd::Zero(9);
  c0(0) = 0.1;
  cfg.initial.v0_coeffs = c0;
  Simulator sim(cfg);
  const SimState s0 = sim.initial_state();
  Eigen::VectorXd dc, dd, de;
  Simulator::RhsAccum acc;
  sim.assemble_rhs(s0, dc, dd, de, acc);
  const NodeFields f = sim.synthesize(s0);
  const Grid heat = 2.0 * cfg.coeffs.nu(1.0, 1.0) *
                    (f.Dxx * f.Dxx + 2.0 * f.Dxy * f.Dxy + f.Dyy * f.Dyy);
  const double expect = sim.ws().integrate(heat);
  const double got = de(0) * cfg.domain.Lx * cfg.domain.Ly;
  CHECK(got == doctest::Approx(expect).epsilon(1e-10));
}
