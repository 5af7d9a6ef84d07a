#pragma once

#include "viscotherm/constitutive.hpp"
#include "viscotherm/planar.hpp"
#include "viscotherm/regularization.hpp"

namespace viscotherm {

/// Spatial gradients of the primal fields at a point.
struct StateGradients {
  Vec2 grad_theta = Vec2::Zero();
  Vec2 grad_b = Vec2::Zero();
  SymTensor2 D;  // symmetric velocity gradient
};

struct FluxSet {
  Vec2 j_e;    // internal-energy flux
  Vec2 j_eta;  // entropy flux
};

/// The four nonnegative contributions to theta * (entropy production):
///   thermal          kappa |grad theta|^2 / theta
///   viscous          2 nu |D|^2
///   relaxation       Cfun psi1 (psi2')^2
///   stress_diffusion psi1 psi2'' alpha |grad b|^2
struct DissipationBreakdown {
  double thermal = 0.0;
  double viscous = 0.0;
  double relaxation = 0.0;
  double stress_diffusion = 0.0;
  double total() const { return thermal + viscous + relaxation + stress_diffusion; }
};

/// Viscous stress 2 nu(theta, b) D.
SymTensor2 deviatoric_stress(const MaterialCoefficients& c, double theta, double b,
                             const SymTensor2& D);

/// j_e = -kappa grad theta - (psi1 - theta psi1') psi2'(b) alpha grad b.
Vec2 energy_flux(const FreeEnergyModel& m, const MaterialCoefficients& c, double theta,
                 double b, const Vec2& grad_theta, const Vec2& grad_b);

/// j_eta = -kappa grad theta / theta + psi1' psi2'(b) alpha grad b.
Vec2 entropy_flux(const FreeEnergyModel& m, const MaterialCoefficients& c, double theta,
                  double b, const Vec2& grad_theta, const Vec2& grad_b);

/// Relaxation production h(theta, b) of the b-equation.
double reaction(const MaterialCoefficients& c, double theta, double b);

/// Pointwise theta * zeta split into its four parts, all nonnegative for
/// admissible inputs.
DissipationBreakdown entropy_production(const FreeEnergyModel& m,
                                        const MaterialCoefficients& c, double theta,
                                        double b, const StateGradients& g);

/// Variants that substitute psi1_eps for psi1 wherever it appears.
Vec2 energy_flux_eps(const RegularizedModel& r, const MaterialCoefficients& c,
                     double theta, double b, const Vec2& grad_theta, const Vec2& grad_b);
Vec2 entropy_flux_eps(const RegularizedModel& r, const MaterialCoefficients& c,
                      double theta, double b, const Vec2& grad_theta, const Vec2& grad_b);
DissipationBreakdown entropy_production_eps(const RegularizedModel& r,
                                            const MaterialCoefficients& c, double theta,
                                            double b, const StateGradients& g);

/// Closed-form relaxation heating of the Oldroyd-B preset,
/// (3 mu^2 / (2 nu1)) (b + 1/b - 2); equals Cfun psi1 (psi2')^2 there.
double scalar_oldroyd_heating(double mu_elastic, double nu1, double b);

}  // namespace viscotherm
