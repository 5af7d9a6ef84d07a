#include "viscotherm/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace viscotherm {

namespace {

void require_theta_pos(double theta, const char* who) {
  if (!(theta > 0.0))
    throw std::domain_error(std::string(who) + ": theta must be positive, got " +
                            std::to_string(theta));
}

void require_b_pos(double b, const char* who) {
  if (!(b > 0.0))
    throw std::domain_error(std::string(who) + ": b must be positive, got " +
                            std::to_string(b));
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> xs(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    xs[i] = std::exp(llo + (lhi - llo) * i / double(n - 1));
  return xs;
}

std::vector<double> lin_spaced(double lo, double hi, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / double(n - 1);
  return xs;
}

// 32-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; symmetric).
constexpr int kGL = 32;
constexpr double kGLx[kGL / 2] = {
    0.0483076656877383162, 0.1444719615827964934, 0.2392873622521370745,
    0.3318686022821276498, 0.4213512761306353454, 0.5068999089322293900,
    0.5877157572407623290, 0.6630442669302152010, 0.7321821187402896804,
    0.7944837959679424070, 0.8493676137325699701, 0.8963211557660521240,
    0.9349060759377396892, 0.9647622555875064308, 0.9856115115452683354,
    0.9972638618494815635};
constexpr double kGLw[kGL / 2] = {
    0.0965400885147278006, 0.0956387200792748594, 0.0938443990808045654,
    0.0911738786957638847, 0.0876520930044038111, 0.0833119242269467552,
    0.0781938957870703065, 0.0723457941088485062, 0.0658222227763618468,
    0.0586840934785355471, 0.0509980592623761762, 0.0428358980222266807,
    0.0342738629130214331, 0.0253920653092620595, 0.0162743947309056706,
    0.0070186100094700966};

// Integral of f over [a, b] by composite 32-point Gauss-Legendre.
double gl_integrate(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < kGL / 2; ++i) {
    s += kGLw[i] * (f(mid - half * kGLx[i]) + f(mid + half * kGLx[i]));
  }
  return s * half;
}

}  // namespace

double psi(const FreeEnergyModel& m, double theta, double b) {
  require_theta_pos(theta, "psi");
  require_b_pos(b, "psi");
  return m.psi0.value(theta) + m.psi1.value(theta) * m.psi2.value(b);
}

double eta(const FreeEnergyModel& m, double theta, double b) {
  require_theta_pos(theta, "eta");
  require_b_pos(b, "eta");
  return -m.psi0.d1(theta) - m.psi1.d1(theta) * m.psi2.value(b);
}

double internal_energy(const FreeEnergyModel& m, double theta, double b) {
  require_theta_pos(theta, "internal_energy");
  require_b_pos(b, "internal_energy");
  return e0_part(m, theta) + e1_part(m, theta) * m.psi2.value(b);
}

double e0_part(const FreeEnergyModel& m, double theta) {
  if (theta <= 0.0) return 0.0;
  return m.psi0.value(theta) - theta * m.psi0.d1(theta);
}

double e1_part(const FreeEnergyModel& m, double theta) {
  if (theta < 0.0)
    throw std::domain_error("e1_part: theta must be nonnegative");
  return m.psi1.value(theta) - theta * m.psi1.d1(theta);
}

double heat_capacity(const FreeEnergyModel& m, double theta, double b) {
  require_theta_pos(theta, "heat_capacity");
  require_b_pos(b, "heat_capacity");
  return -theta * m.psi0.d2(theta) - theta * m.psi1.d2(theta) * m.psi2.value(b);
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& r : rows)
    os << (r.pass ? "pass " : "FAIL ") << r.check << "  margin=" << r.margin
       << (r.detail.empty() ? "" : "  " + r.detail) << "\n";
  os << (pass ? "all checks passed" : "admissibility violated") << "\n";
  return os.str();
}

ValidationReport validate_assumptions(const FreeEnergyModel& m,
                                      const MaterialCoefficients& c) {
  ValidationReport rep;
  auto add = [&rep](std::string name, bool pass, double margin, std::string detail = "") {
    rep.rows.push_back({std::move(name), pass, margin, std::move(detail)});
  };
  const auto thetas = log_spaced(1e-6, 1e6, 256);
  const auto bs = lin_spaced(c.b_min, c.b_max, 64);
  const double slack = 1e-12;

  // Curvature and monotonicity of the energy split.
  double worst = std::numeric_limits<double>::infinity();
  for (double t : thetas) worst = std::min(worst, -m.psi0.d2(t));
  add("psi0_concave (psi0'' < 0)", worst > 0.0, worst);

  worst = std::numeric_limits<double>::infinity();
  for (double t : thetas) worst = std::min(worst, -m.psi1.d2(t));
  add("psi1_concave (psi1'' <= 0)", worst >= -slack, worst);

  worst = std::numeric_limits<double>::infinity();
  for (double t : thetas) worst = std::min(worst, m.psi1.d1(t));
  add("psi1_nondecreasing (psi1' >= 0)", worst >= -slack, worst);

  worst = std::numeric_limits<double>::infinity();
  for (double b : bs) worst = std::min(worst, m.psi2.d2(b));
  add("psi2_convex (psi2'' >= 0)", worst >= -slack, worst);

  add("psi1_at_zero (psi1(0) >= 0)", m.psi1.value(0.0) >= -slack, m.psi1.value(0.0));
  add("psi2_min_at_one (psi2(1) = 0)", std::abs(m.psi2.value(1.0)) <= slack,
      -std::abs(m.psi2.value(1.0)));
  add("psi2_crit_at_one (psi2'(1) = 0)", std::abs(m.psi2.d1(1.0)) <= slack,
      -std::abs(m.psi2.d1(1.0)));

  // Pointwise boundedness of -s^2 psi1''(s); finiteness judged against a
  // generous multiple of C2 since the underlying constant is model specific.
  double sup_s2 = 0.0;
  for (double t : thetas) sup_s2 = std::max(sup_s2, -t * t * m.psi1.d2(t));
  {
    const double cap = 1e6 * std::max(1.0, c.C2);
    add("psi1_curvature_bounded (-s^2 psi1'' <= C)", sup_s2 <= cap, cap - sup_s2,
        "sup=" + std::to_string(sup_s2));
  }

  // Decay at theta -> 0+: monotone trends sampled at 1e-6, 1e-8, 1e-10.
  {
    const double t6 = m.psi0.d1(1e-6), t8 = m.psi0.d1(1e-8), t10 = m.psi0.d1(1e-10);
    add("psi0'_blows_up (trend to +inf)", t10 > t8 && t8 > t6,
        std::min(t10 - t8, t8 - t6), "psi0'(1e-10)=" + std::to_string(t10));
    const double p6 = std::abs(1e-6 * t6), p8 = std::abs(1e-8 * t8),
                 p10 = std::abs(1e-10 * t10);
    add("theta_psi0'_vanishes", p10 < p8 && p8 < p6 && p10 <= 1e-6 * std::max(1.0, c.C2),
        1e-6 * std::max(1.0, c.C2) - p10);
    const double v6 = std::abs(m.psi0.value(1e-6)), v8 = std::abs(m.psi0.value(1e-8)),
                 v10 = std::abs(m.psi0.value(1e-10));
    add("psi0_vanishes", v10 < v8 && v8 < v6 && v10 <= 1e-6 * std::max(1.0, c.C2),
        1e-6 * std::max(1.0, c.C2) - v10);
  }

  // Two-sided bound on -s psi0''.
  {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double t : thetas) {
      const double v = -t * m.psi0.d2(t);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double rel = 1e-9 * std::max(1.0, c.C2);
    add("heat_capacity_window (C1 <= -s psi0'' <= C2)",
        lo >= c.C1 - rel && hi <= c.C2 + rel, std::min(lo - c.C1, c.C2 - hi),
        "range=[" + std::to_string(lo) + "," + std::to_string(hi) + "]");
  }

  // Integral bound on -s psi1''; composite rule on [0, 1e6], the tail beyond
  // is dropped and noted (admissible psi1 have integrable curvature).
  {
    auto f = [&m](double s) { return -s * m.psi1.d2(s); };
    double I = 0.0;
    const double splits[] = {0.0, 1e-3, 1.0, 1e3, 1e6};
    for (int k = 0; k + 1 < 5; ++k) I += gl_integrate(f, splits[k], splits[k + 1]);
    add("psi1_curvature_integral (<= C2)", I <= c.C2 + 1e-9 * std::max(1.0, c.C2),
        c.C2 - I, "integral=" + std::to_string(I) + " truncated at 1e6");
  }

  // Coefficient window and relaxation sign/bound on the cut-off interval.
  {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double t : thetas)
      for (double b : bs)
        for (auto* f : {&c.nu, &c.kappa, &c.alpha}) {
          const double v = (*f)(t, b);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
    const double rel = 1e-9 * std::max(1.0, c.C2);
    add("coefficient_window (C1 <= nu,kappa,alpha <= C2)",
        lo >= c.C1 - rel && hi <= c.C2 + rel, std::min(lo - c.C1, c.C2 - hi));
  }
  {
    double worst_sign = std::numeric_limits<double>::infinity(), sup_h = 0.0;
    for (double t : thetas)
      for (double b : bs) {
        const double hv = c.h(t, b);
        worst_sign = std::min(worst_sign, hv * (b - 1.0));
        sup_h = std::max(sup_h, std::abs(hv));
      }
    add("relaxation_sign (h (b-1) >= 0)", worst_sign >= -slack, worst_sign);
    add("relaxation_bounded (|h| <= C2)", sup_h <= c.C2 + 1e-9 * std::max(1.0, c.C2),
        c.C2 - sup_h);
  }
  {
    const bool ok = c.b_min > 0.0 && c.b_min < 1.0 && c.b_max > 1.0;
    add("cutoff_interval (0 < b_min < 1 < b_max)", ok,
        std::min({c.b_min, 1.0 - c.b_min, c.b_max - 1.0}));
    add("admissibility_constants (0 < C1 <= C2)", c.C1 > 0.0 && c.C2 >= c.C1,
        std::min(c.C1, c.C2 - c.C1));
  }

  rep.pass = std::all_of(rep.rows.begin(), rep.rows.end(),
                         [](const ValidationRow& r) { return r.pass; });
  return rep;
}

EntropyBound entropy_upper_bound(const FreeEnergyModel& m, double s, double b) {
  require_theta_pos(s, "entropy_upper_bound");
  require_b_pos(b, "entropy_upper_bound");
  const auto thetas = log_spaced(1e-6, 1e6, 256);
  double C1 = std::numeric_limits<double>::infinity(), C2 = 0.0;
  for (double t : thetas) {
    const double v = -t * m.psi0.d2(t);
    C1 = std::min(C1, v);
    C2 = std::max(C2, v);
  }
  const double C = std::max(C1 + C2, std::abs(m.psi0.d1(1.0)));
  EntropyBound out;
  out.lhs = eta(m, s, b);
  out.rhs = -C1 * std::abs(std::log(s)) + C * (1.0 + s);
  out.C1 = C1;
  out.C2 = C2;
  out.C = C;
  return out;
}

namespace {

std::pair<FreeEnergyModel, MaterialCoefficients> preset_base(
    double c_V, double theta_ref, double mu_elastic, double nu1, double mu_tilde,
    double nu_visc, double kappa_heat) {
  if (!(c_V > 0) || !(theta_ref > 0) || !(mu_elastic > 0) || !(nu1 > 0) ||
      !(mu_tilde > 0) || !(nu_visc > 0) || !(kappa_heat > 0))
    throw std::domain_error("preset: all material parameters must be positive");

  FreeEnergyModel m;
  m.psi0 = {[c_V, theta_ref](double t) { return -c_V * t * (std::log(t / theta_ref) - 1.0); },
            [c_V, theta_ref](double t) { return -c_V * std::log(t / theta_ref); },
            [c_V](double t) { return -c_V / t; },
            0.0, std::numeric_limits<double>::infinity()};
  const double p1 = 1.5 * mu_elastic;
  m.psi1 = {[p1](double) { return p1; }, [](double) { return 0.0; },
            [](double) { return 0.0; }, 0.0, std::numeric_limits<double>::infinity()};
  m.psi2 = {[](double b) { return b - 1.0 - std::log(b); },
            [](double b) { return 1.0 - 1.0 / b; },
            [](double b) { return 1.0 / (b * b); },
            0.0, std::numeric_limits<double>::infinity()};

  MaterialCoefficients c;
  const double alpha = mu_tilde / nu1;
  c.nu = [nu_visc](double, double) { return nu_visc; };
  c.kappa = [kappa_heat](double, double) { return kappa_heat; };
  c.alpha = [alpha](double, double) { return alpha; };
  c.b_min = 0.7;
  c.b_max = 1.5;
  return {m, c};
}

void finish_constants(MaterialCoefficients& c, double c_V, double nu_visc,
                      double kappa_heat, double alpha) {
  const double sup_h = std::max(std::abs(c.h(1.0, c.b_min)), std::abs(c.h(1.0, c.b_max)));
  c.C1 = std::min({nu_visc, kappa_heat, alpha, c_V});
  c.C2 = std::max({nu_visc, kappa_heat, alpha, c_V, sup_h});
}

}  // namespace

std::pair<FreeEnergyModel, MaterialCoefficients> preset_oldroyd_b(
    double c_V, double theta_ref, double mu_elastic, double nu1, double mu_tilde,
    double nu_visc, double kappa_heat) {
  auto [m, c] = preset_base(c_V, theta_ref, mu_elastic, nu1, mu_tilde, nu_visc, kappa_heat);
  const double r = mu_elastic / nu1;
  c.h = [r](double, double b) { return r * (b - 1.0); };
  c.Cfun = [r](double, double b) { return r * b; };
  finish_constants(c, c_V, nu_visc, kappa_heat, mu_tilde / nu1);
  return {m, c};
}

std::pair<FreeEnergyModel, MaterialCoefficients> preset_giesekus(
    double c_V, double theta_ref, double mu_elastic, double nu1, double mu_tilde,
    double nu_visc, double kappa_heat, double a_g) {
  if (!(a_g >= 0.0) || !(a_g <= 1.0))
    throw std::domain_error("preset_giesekus: a_g must lie in [0, 1]");
  auto [m, c] = preset_base(c_V, theta_ref, mu_elastic, nu1, mu_tilde, nu_visc, kappa_heat);
  const double r = mu_elastic / nu1;
  c.h = [r, a_g](double, double b) { return r * (b - 1.0) * (a_g * b + 1.0 - a_g); };
  // The b = 1 value is the L'Hopital limit of h / psi2'; no division happens.
  c.Cfun = [r, a_g](double, double b) { return r * b * (a_g * b + 1.0 - a_g); };
  finish_constants(c, c_V, nu_visc, kappa_heat, mu_tilde / nu1);
  return {m, c};
}

}  // namespace viscotherm
