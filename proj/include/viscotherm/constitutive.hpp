#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace viscotherm {

/// Scalar C^2 function with analytic first and second derivatives.
struct ScalarFunction {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  double lo = 0.0;  // admissible argument range [lo, hi)
  double hi = std::numeric_limits<double>::infinity();
};

/// Helmholtz free energy split psi(theta, b) = psi0(theta) + psi1(theta) * psi2(b).
///
/// psi0 is the purely thermal part (domain theta > 0), psi1 the temperature
/// dependent coupling modulus (domain theta >= 0), psi2 the elastic potential
/// of the spherical stretch (domain b > 0, minimum at b = 1).
struct FreeEnergyModel {
  ScalarFunction psi0;
  ScalarFunction psi1;
  ScalarFunction psi2;
};

/// Transport/relaxation coefficients and the admissibility window.
///
/// The relaxation production h(theta, b) and its factored form
/// h = Cfun * psi2'(b) are stored separately; Cfun is evaluated directly and
/// never reconstructed by dividing h by psi2'.
struct MaterialCoefficients {
  std::function<double(double, double)> nu;     // shear viscosity, (theta, b)
  std::function<double(double, double)> kappa;  // heat conductivity
  std::function<double(double, double)> alpha;  // stress diffusivity
  std::function<double(double, double)> h;      // relaxation production
  std::function<double(double, double)> Cfun;   // h / psi2', by closed form
  double C1 = 0.0;  // lower admissibility constant
  double C2 = 0.0;  // upper admissibility constant
  double b_min = 0.7;
  double b_max = 1.5;
};

/// Free energy psi(theta, b). Requires theta > 0, b > 0.
double psi(const FreeEnergyModel& m, double theta, double b);

/// Entropy eta = -d psi / d theta = -psi0' - psi1' psi2.
double eta(const FreeEnergyModel& m, double theta, double b);

/// Internal energy e = psi + theta * eta = e0(theta) + e1(theta) psi2(b).
double internal_energy(const FreeEnergyModel& m, double theta, double b);

/// Thermal part e0(theta) = psi0 - theta psi0' of the internal energy.
/// Extended by continuity with e0(0) = 0.
double e0_part(const FreeEnergyModel& m, double theta);

/// Coupling part e1(theta) = psi1 - theta psi1'.
double e1_part(const FreeEnergyModel& m, double theta);

/// Specific heat c_V = d e / d theta = -theta psi0'' - theta psi1'' psi2(b).
double heat_capacity(const FreeEnergyModel& m, double theta, double b);

struct ValidationRow {
  std::string check;
  bool pass = false;
  double margin = 0.0;  // signed distance to the admissibility boundary
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  bool pass = false;
  std::string summary() const;
};

/// Sampled admissibility checks: concavity/convexity and sign conditions,
/// decay of the thermal potential at theta -> 0+, the two-sided bound on
/// -s psi0''(s), the integral bound on -s psi1''(s), coefficient bounds and
/// the sign/boundedness of the relaxation production on [b_min, b_max].
///
/// Temperatures are sampled log-spaced on [1e-6, 1e6] (256 points), b on 64
/// uniform points in [b_min, b_max]. Limit conditions are judged by monotone
/// trends at theta in {1e-6, 1e-8, 1e-10}; tolerances are recorded per row.
ValidationReport validate_assumptions(const FreeEnergyModel& m,
                                      const MaterialCoefficients& coeffs);

struct EntropyBound {
  double lhs;  // eta(s, b)
  double rhs;  // -C1 |ln s| + C (1 + s)
  double C1;   // sampled min of -s psi0''
  double C2;   // sampled max of -s psi0''
  double C;    // max(C1 + C2, |psi0'(1)|)
};

/// Upper bound eta(s, b) <= -C1 |ln s| + C (1 + s) with the constants taken
/// from sampled bounds of -s psi0'' on [1e-6, 1e6].
EntropyBound entropy_upper_bound(const FreeEnergyModel& m, double s, double b);

/// Incompressible Oldroyd-B with purely spherical elastic response:
///   psi0 = -c_V theta (ln(theta/theta_ref) - 1)
///   psi1 = 3 mu_elastic / 2            (constant)
///   psi2 = b - 1 - ln b
///   nu = nu_visc, kappa = kappa_heat, alpha = mu_tilde / nu1   (constants)
///   h = (mu_elastic / nu1) (b - 1),    Cfun = (mu_elastic / nu1) b
std::pair<FreeEnergyModel, MaterialCoefficients> preset_oldroyd_b(
    double c_V, double theta_ref, double mu_elastic, double nu1, double mu_tilde,
    double nu_visc, double kappa_heat);

/// Giesekus-type relaxation on top of the Oldroyd-B energy:
///   h = (mu_elastic / nu1) (a_g b^2 + (1 - 2 a_g) b - (1 - a_g))
///     = (mu_elastic / nu1) (b - 1)(a_g b + 1 - a_g)
///   Cfun = (mu_elastic / nu1) b (a_g b + 1 - a_g)
/// Reduces to the Oldroyd-B preset at a_g = 0.
std::pair<FreeEnergyModel, MaterialCoefficients> preset_giesekus(
    double c_V, double theta_ref, double mu_elastic, double nu1, double mu_tilde,
    double nu_visc, double kappa_heat, double a_g);

}  // namespace viscotherm
