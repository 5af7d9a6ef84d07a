#pragma once

#include "viscotherm/constitutive.hpp"
#include "viscotherm/planar.hpp"

namespace viscotherm {

/// Free-energy model with the coupling modulus psi1 replaced below theta = eps
/// by a C^2 surrogate psi1_eps: linear on [0, eps/2] (so psi1_eps(0) = 0 and
/// the coupling drops out of the internal energy there), a quintic Hermite
/// blend on [eps/2, eps] matching psi1's value and first two derivatives at
/// eps, and psi1 itself above. eps = 0 disables the surrogate.
struct RegularizedModel {
  FreeEnergyModel base;
  double eps = 0.0;
  ScalarFunction psi1eps;

  /// 0: eps == 0 (no surrogate). 1: (psi1_eps)' >= psi1' certified.
  /// 2: only the weaker (psi1_eps)' >= psi1'/2 certified.
  int derivative_bound_branch = 0;

  // Sampled window of e0'(theta) = -theta psi0''(theta), used to bracket the
  // temperature inversion.
  double C1_e0 = 0.0;
  double C2_e0 = 0.0;
};

/// Build and certify the surrogate. Throws ConstructionError when the sampled
/// concavity/monotonicity/derivative-domination certificate fails.
RegularizedModel build_psi1_eps(const FreeEnergyModel& m, double eps);

/// Coupling part e1_eps(theta) = psi1_eps - theta psi1_eps'; identically 0 on
/// [0, eps/2].
double e1_eps(const RegularizedModel& r, double theta);

/// Internal energy e_eps(theta, b) = e0(theta) + e1_eps(theta) psi2(b),
/// defined for theta >= 0 (e_eps(0, b) = 0).
double e_eps(const RegularizedModel& r, double theta, double b);

/// Entropy -psi0' - psi1_eps' psi2 of the surrogate model.
double eta_eps(const RegularizedModel& r, double theta, double b);

/// d e_eps / d theta = -theta psi0'' - theta psi1_eps'' psi2(b); >= C1 for
/// admissible models, which makes the inversion strictly monotone.
double heat_capacity_eps(const RegularizedModel& r, double theta, double b);

/// Invert e = e_eps(theta, b) for theta. Extended by theta := e for e <= 0,
/// so the result is positive exactly when e is. Bracketed bisection plus
/// safeguarded Newton; residual tolerance 1e-12 * max(1, |e|), budget 200
/// iterations.
double theta_from_e(const RegularizedModel& r, double e, double b);

/// Same contract with psi2(b) precomputed; hot-loop entry point.
double theta_from_e_hot(const RegularizedModel& r, double e, double psi2b);

/// Invert the unregularized e(theta, b) for theta; requires e > 0 and throws
/// ConvergenceError when no positive root exists (e below the b-elastic
/// offset e1(0) psi2(b)).
double theta_from_e_plain(const FreeEnergyModel& m, double e, double b);

/// b clamped to [b_min, b_max].
double clamp_b(const MaterialCoefficients& c, double b);

/// Master cut-off profile: 1 on [0, 1], 0 on [2, inf), quintic smoothstep in
/// between (C^2, nonincreasing).
double cutoff_profile(double s);

/// G_k(s) = cutoff_profile(s / k); k <= 0 or non-finite disables (returns 1).
double convective_cutoff(double s, double k);

/// Clamped initial energy e_eps(min(max(theta0, eps), 1/eps), b0); for
/// eps = 0 falls back to the plain internal energy (theta0 > 0 required).
double clamp_initial_energy(const RegularizedModel& r, double theta0, double b0);

/// Energy and temperature floors of the regularized scheme:
/// floor_energy = e0(eps/2), floor_theta = eps/2.
double floor_energy(const RegularizedModel& r);
double floor_theta(const RegularizedModel& r);

struct StickSlipParams {
  double s_star = 0.0;      // threshold traction
  double gamma_star = 0.0;  // slip coefficient
  double eps = 0.0;         // mollification; 0 selects the exact graph
};

/// Mollified wall law s_* v / (eps + |v|) + gamma_* v; at eps = 0 the exact
/// graph response s_* v / |v| + gamma_* v (0 at v = 0).
Vec2 stick_slip_mollified(const StickSlipParams& p, const Vec2& v_tau);

/// Inverse graph branch: slip velocity from traction,
/// v = ((|s| - s_*)_+ / |s|) s / gamma_*; returns 0 for |s| <= s_*.
Vec2 stick_slip_graph(const StickSlipParams& p, const Vec2& s);

}  // namespace viscotherm
