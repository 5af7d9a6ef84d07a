#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "viscotherm/closure.hpp"
#include "viscotherm/constitutive.hpp"
#include "viscotherm/regularization.hpp"
#include "viscotherm/spectral.hpp"

namespace viscotherm {

struct OdeOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  double max_step = std::numeric_limits<double>::infinity();
  double safety = 0.9;
  double initial_step = 0.0;  // 0: heuristic
  long max_steps = 10'000'000;
};

enum class RunMode { dynamic, kinematic };

/// Initial fields as closures over (x, y); optional direct coefficient
/// vectors bypass the L2 projection for the velocity.
struct InitialData {
  std::function<double(double, double)> theta0;
  std::function<double(double, double)> b0;
  std::function<Vec2(double, double)> v0;  // dynamic mode only
  std::optional<Eigen::VectorXd> v0_coeffs;
};

struct SimulationConfig {
  Rectangle domain;
  ScalarBasisSpec scalar_modes;
  VelocityBasisSpec velocity_modes;
  QuadratureSpec quadrature{0, 0};  // 0 -> default_quadrature
  FreeEnergyModel model;
  MaterialCoefficients coeffs;
  double reg_epsilon = 0.0;  // 0 disables the psi1 surrogate
  double cutoff_k = 0.0;     // convective cut-off level; <= 0 disables
  double elliptic_mu = 0.0;  // extra elliptic term in the e-equation
  StickSlipParams stickslip;
  std::function<Vec2(double, double)> body_force;  // null -> zero
  RunMode mode = RunMode::dynamic;
  std::function<Vec2(double, double)> prescribed_velocity;  // kinematic mode
  std::optional<Eigen::VectorXd> prescribed_coeffs;
  double t0 = 0.0, t1 = 1.0;
  OdeOptions ode;
  InitialData initial;
  std::vector<double> snapshot_times;
  int threads = 1;
};

/// Galerkin coefficients of (v, b, e) at time t.
struct SimState {
  double t = 0.0;
  Eigen::VectorXd c;    // velocity modes
  Eigen::VectorXd d;    // b modes
  Eigen::VectorXd e_c;  // internal-energy modes
};

/// One accepted step: the state plus quantities the integrator carries or
/// reports alongside it. The three accumulators are extra ODE components, so
/// they close budgets to integrator accuracy rather than trapezoid accuracy.
struct StepRecord {
  SimState state;
  double work_acc = 0.0;  // integral of the boundary stick-slip work rate
  double body_acc = 0.0;  // integral of the body-force power
  double zeta_acc = 0.0;  // integral of the entropy production rate
  double dt = 0.0;        // step size that produced this record (0 at t0)
  double dmass_b = 0.0;   // solver-side d/dt of int b at this state
  double denergy = 0.0;   // solver-side d/dt of int e at this state
};

/// Synthesized node values of the primal fields and the inverted temperature.
struct NodeFields {
  Grid vx, vy;
  Grid Dxx, Dxy, Dyy;
  Grid b, gbx, gby, bM;
  Grid e, gex, gey;
  Grid theta, gtx, gty;
};

class Simulator {
 public:
  explicit Simulator(SimulationConfig cfg);

  const SimulationConfig& config() const { return cfg_; }
  const SpectralWorkspace& ws() const { return *ws_; }
  const RegularizedModel& reg() const { return reg_; }

  /// L2 projections of the initial fields; the initial energy goes through
  /// the clamped-initial-energy map when reg_epsilon > 0.
  SimState initial_state() const;

  struct RhsAccum {
    double work_rate = 0.0;
    double body_rate = 0.0;
    double zeta_rate = 0.0;
  };

  /// Assembled coefficient rates for the Galerkin system. In kinematic mode
  /// dc is zero.
  void assemble_rhs(const SimState& s, Eigen::VectorXd& dc, Eigen::VectorXd& dd,
                    Eigen::VectorXd& de, RhsAccum& acc) const;

  /// Node values of all fields, including theta from the energy inversion and
  /// its chain-rule gradient.
  NodeFields synthesize(const SimState& s) const;

  using Observer = std::function<void(const StepRecord&)>;

  /// Adaptive embedded Runge-Kutta 4(5) from t0 to t1. The observer fires at
  /// t0 and after every accepted step; steps are clipped to hit snapshot
  /// times and t1 exactly. Returns the final record.
  StepRecord integrate(const Observer& obs = nullptr) const;

  /// Kinetic energy 0.5 c^T Gram c.
  double kinetic_energy(const SimState& s) const;

  /// Signed tangential wall-law traction at the edge nodes.
  Eigen::VectorXd edge_traction(Edge e, const Eigen::VectorXd& c) const;

 private:
  SimulationConfig cfg_;
  std::shared_ptr<SpectralWorkspace> ws_;
  RegularizedModel reg_;
  Grid fbx_, fby_;  // body force at the quadrature nodes
  bool has_force_ = false;
  bool has_wall_law_ = false;

  struct PointwiseOut;
  void pointwise_thermo(const Grid& b, const Grid& gbx, const Grid& gby, const Grid& e,
                        const Grid& gex, const Grid& gey, PointwiseOut& out) const;
  void rhs_flat(const Eigen::VectorXd& y, Eigen::VectorXd& dy) const;
  friend struct SimulatorTestHook;
};

}  // namespace viscotherm
