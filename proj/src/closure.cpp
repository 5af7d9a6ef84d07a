#include "viscotherm/closure.hpp"

#include <stdexcept>

namespace viscotherm {

namespace {

void require_pos(double theta, double b, const char* who) {
  if (!(theta > 0.0))
    throw std::domain_error(std::string(who) + ": theta must be positive");
  if (!(b > 0.0)) throw std::domain_error(std::string(who) + ": b must be positive");
}

Vec2 energy_flux_impl(const ScalarFunction& psi1, const ScalarFunction& psi2,
                      const MaterialCoefficients& c, double theta, double b,
                      const Vec2& gt, const Vec2& gb) {
  const double e1 = psi1.value(theta) - theta * psi1.d1(theta);
  return -c.kappa(theta, b) * gt - e1 * psi2.d1(b) * c.alpha(theta, b) * gb;
}

Vec2 entropy_flux_impl(const ScalarFunction& psi1, const ScalarFunction& psi2,
                       const MaterialCoefficients& c, double theta, double b,
                       const Vec2& gt, const Vec2& gb) {
  return -(c.kappa(theta, b) / theta) * gt +
         psi1.d1(theta) * psi2.d1(b) * c.alpha(theta, b) * gb;
}

DissipationBreakdown production_impl(const ScalarFunction& psi1,
                                     const ScalarFunction& psi2,
                                     const MaterialCoefficients& c, double theta,
                                     double b, const StateGradients& g) {
  DissipationBreakdown out;
  out.thermal = c.kappa(theta, b) * g.grad_theta.squaredNorm() / theta;
  out.viscous = 2.0 * c.nu(theta, b) * g.D.frob2();
  const double p2d1 = psi2.d1(b);
  out.relaxation = c.Cfun(theta, b) * psi1.value(theta) * p2d1 * p2d1;
  out.stress_diffusion =
      psi1.value(theta) * psi2.d2(b) * c.alpha(theta, b) * g.grad_b.squaredNorm();
  return out;
}

}  // namespace

SymTensor2 deviatoric_stress(const MaterialCoefficients& c, double theta, double b,
                             const SymTensor2& D) {
  require_pos(theta, b, "deviatoric_stress");
  return D * (2.0 * c.nu(theta, b));
}

Vec2 energy_flux(const FreeEnergyModel& m, const MaterialCoefficients& c, double theta,
                 double b, const Vec2& grad_theta, const Vec2& grad_b) {
  require_pos(theta, b, "energy_flux");
  return energy_flux_impl(m.psi1, m.psi2, c, theta, b, grad_theta, grad_b);
}

Vec2 entropy_flux(const FreeEnergyModel& m, const MaterialCoefficients& c, double theta,
                  double b, const Vec2& grad_theta, const Vec2& grad_b) {
  require_pos(theta, b, "entropy_flux");
  return entropy_flux_impl(m.psi1, m.psi2, c, theta, b, grad_theta, grad_b);
}

double reaction(const MaterialCoefficients& c, double theta, double b) {
  if (!(theta >= 0.0)) throw std::domain_error("reaction: theta must be >= 0");
  if (!(b > 0.0)) throw std::domain_error("reaction: b must be positive");
  return c.h(theta, b);
}

DissipationBreakdown entropy_production(const FreeEnergyModel& m,
                                        const MaterialCoefficients& c, double theta,
                                        double b, const StateGradients& g) {
  require_pos(theta, b, "entropy_production");
  return production_impl(m.psi1, m.psi2, c, theta, b, g);
}

Vec2 energy_flux_eps(const RegularizedModel& r, const MaterialCoefficients& c,
                     double theta, double b, const Vec2& grad_theta,
                     const Vec2& grad_b) {
  require_pos(theta, b, "energy_flux_eps");
  return energy_flux_impl(r.psi1eps, r.base.psi2, c, theta, b, grad_theta, grad_b);
}

Vec2 entropy_flux_eps(const RegularizedModel& r, const MaterialCoefficients& c,
                      double theta, double b, const Vec2& grad_theta,
                      const Vec2& grad_b) {
  require_pos(theta, b, "entropy_flux_eps");
  return entropy_flux_impl(r.psi1eps, r.base.psi2, c, theta, b, grad_theta, grad_b);
}

DissipationBreakdown entropy_production_eps(const RegularizedModel& r,
                                            const MaterialCoefficients& c, double theta,
                                            double b, const StateGradients& g) {
  require_pos(theta, b, "entropy_production_eps");
  return production_impl(r.psi1eps, r.base.psi2, c, theta, b, g);
}

double scalar_oldroyd_heating(double mu_elastic, double nu1, double b) {
  if (!(nu1 > 0.0)) throw std::domain_error("scalar_oldroyd_heating: nu1 must be positive");
  if (!(b > 0.0)) throw std::domain_error("scalar_oldroyd_heating: b must be positive");
  return 1.5 * mu_elastic * mu_elastic / nu1 * (b + 1.0 / b - 2.0);
}

}  // namespace viscotherm
