#include "viscotherm/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "viscotherm/util.hpp"

namespace viscotherm {

namespace {

void sample_e0_window(const FreeEnergyModel& m, double& C1, double& C2) {
  C1 = std::numeric_limits<double>::infinity();
  C2 = 0.0;
  const double llo = std::log(1e-6), lhi = std::log(1e6);
  for (int i = 0; i < 256; ++i) {
    const double t = std::exp(llo + (lhi - llo) * i / 255.0);
    const double v = -t * m.psi0.d2(t);
    C1 = std::min(C1, v);
    C2 = std::max(C2, v);
  }
}

struct BlendCoeffs {
  double eps, v, m;          // linear slope m = 2v/eps
  double a3, a4, a5;         // quintic tail in t = (s - eps/2)/(eps/2)
};

double blend_value(const BlendCoeffs& c, double s) {
  const double t = (s - 0.5 * c.eps) / (0.5 * c.eps);
  return c.v * (1.0 + t) + ((c.a5 * t + c.a4) * t + c.a3) * t * t * t;
}

double blend_d1(const BlendCoeffs& c, double s) {
  const double t = (s - 0.5 * c.eps) / (0.5 * c.eps);
  const double dH = c.v + (3.0 * c.a3 + (4.0 * c.a4 + 5.0 * c.a5 * t) * t) * t * t;
  return dH * 2.0 / c.eps;
}

double blend_d2(const BlendCoeffs& c, double s) {
  const double t = (s - 0.5 * c.eps) / (0.5 * c.eps);
  const double ddH = (6.0 * c.a3 + (12.0 * c.a4 + 20.0 * c.a5 * t) * t) * t;
  return ddH * 4.0 / (c.eps * c.eps);
}

}  // namespace

RegularizedModel build_psi1_eps(const FreeEnergyModel& m, double eps) {
  if (!(eps >= 0.0)) throw std::domain_error("build_psi1_eps: eps must be >= 0");
  RegularizedModel r;
  r.base = m;
  r.eps = eps;
  sample_e0_window(m, r.C1_e0, r.C2_e0);
  if (eps == 0.0) {
    r.psi1eps = m.psi1;
    r.derivative_bound_branch = 0;
    return r;
  }

  // Quintic Hermite data: match psi1's value/d1/d2 at eps; zero curvature and
  // slope continuity with the linear piece at eps/2. One free scalar, the
  // linear value v at eps/2, is fixed by zeroing the cubic coefficient; that
  // choice is concave for constant psi1 and certified a posteriori below.
  const double P = m.psi1.value(eps);
  const double S = m.psi1.d1(eps) * (0.5 * eps);
  const double K = m.psi1.d2(eps) * (0.25 * eps * eps);
  BlendCoeffs bc;
  bc.eps = eps;
  bc.v = (10.0 * P - 4.0 * S + 0.5 * K) / 16.0;
  bc.m = bc.v / (0.5 * eps);
  bc.a3 = 10.0 * P - 16.0 * bc.v - 4.0 * S + 0.5 * K;
  bc.a4 = 7.0 * S + 23.0 * bc.v - 15.0 * P - K;
  bc.a5 = 0.5 * K + 6.0 * P - 9.0 * bc.v - 3.0 * S;

  const ScalarFunction base1 = m.psi1;
  r.psi1eps.lo = 0.0;
  r.psi1eps.hi = base1.hi;
  r.psi1eps.value = [bc, base1, eps](double s) {
    if (s >= eps) return base1.value(s);
    if (s <= 0.5 * eps) return bc.m * s;
    return blend_value(bc, s);
  };
  r.psi1eps.d1 = [bc, base1, eps](double s) {
    if (s >= eps) return base1.d1(s);
    if (s <= 0.5 * eps) return bc.m;
    return blend_d1(bc, s);
  };
  r.psi1eps.d2 = [bc, base1, eps](double s) {
    if (s >= eps) return base1.d2(s);
    if (s <= 0.5 * eps) return 0.0;
    return blend_d2(bc, s);
  };

  // A-posteriori certificate on 64 interior samples: concavity, monotonicity,
  // and domination of psi1' (full) or psi1'/2 (fallback, footnote branch).
  const double scale2 = (std::abs(P) + std::abs(S) + std::abs(K) + bc.v + 1.0) * 4.0 /
                        (eps * eps);
  const double tol2 = 1e-12 * scale2;
  const double tol1 = 1e-12 * (1.0 + std::abs(bc.m));
  bool full = true, half = true;
  std::ostringstream why;
  for (int i = 0; i < 64; ++i) {
    const double s = eps * (i + 0.5) / 64.0;
    const double d1 = r.psi1eps.d1(s), d2 = r.psi1eps.d2(s);
    if (d2 > tol2) {
      why << "concavity violated at s=" << s << " (d2=" << d2 << "); ";
      throw ConstructionError("build_psi1_eps: " + why.str());
    }
    if (d1 < -tol1) {
      why << "monotonicity violated at s=" << s << " (d1=" << d1 << "); ";
      throw ConstructionError("build_psi1_eps: " + why.str());
    }
    const double ref = base1.d1(s);
    if (d1 < ref - tol1 - 1e-12 * std::abs(ref)) full = false;
    if (d1 < 0.5 * ref - tol1 - 1e-12 * std::abs(ref)) half = false;
  }
  if (full) {
    r.derivative_bound_branch = 1;
  } else if (half) {
    r.derivative_bound_branch = 2;
  } else {
    throw ConstructionError(
        "build_psi1_eps: neither (psi1_eps)' >= psi1' nor the half-slope "
        "fallback could be certified");
  }
  return r;
}

double e1_eps(const RegularizedModel& r, double theta) {
  if (theta < 0.0) throw std::domain_error("e1_eps: theta must be nonnegative");
  if (r.eps > 0.0 && theta <= 0.5 * r.eps) return 0.0;
  return r.psi1eps.value(theta) - theta * r.psi1eps.d1(theta);
}

double e_eps(const RegularizedModel& r, double theta, double b) {
  if (theta < 0.0) throw std::domain_error("e_eps: theta must be nonnegative");
  if (!(b > 0.0)) throw std::domain_error("e_eps: b must be positive");
  if (theta == 0.0) return 0.0;
  return e0_part(r.base, theta) + e1_eps(r, theta) * r.base.psi2.value(b);
}

double eta_eps(const RegularizedModel& r, double theta, double b) {
  if (!(theta > 0.0)) throw std::domain_error("eta_eps: theta must be positive");
  return -r.base.psi0.d1(theta) - r.psi1eps.d1(theta) * r.base.psi2.value(b);
}

double heat_capacity_eps(const RegularizedModel& r, double theta, double b) {
  if (!(theta > 0.0)) throw std::domain_error("heat_capacity_eps: theta must be positive");
  return -theta * r.base.psi0.d2(theta) -
         theta * r.psi1eps.d2(theta) * r.base.psi2.value(b);
}

namespace {

// Bracketed bisection + safeguarded Newton for e_fn(theta) = e, with e_fn
// strictly increasing and e_fn(0+) = offset >= 0.
double invert_energy(const std::function<double(double)>& e_fn,
                     const std::function<double(double)>& de_fn, double e,
                     double C1, double C2, double e1_cap_hint, const char* who) {
  const double tol = 1e-12 * std::max(1.0, std::abs(e));
  double hi = (C1 > 0.0) ? e / C1 : std::max(1.0, e);
  int budget = 200;
  while (e_fn(hi) < e) {
    hi *= 2.0;
    if (--budget == 0 || !std::isfinite(hi))
      throw ConvergenceError(std::string(who) + ": no upper bracket for e=" +
                             std::to_string(e));
  }
  double lo = (C2 > 0.0) ? std::max(0.0, (e - e1_cap_hint) / C2) : 0.0;
  if (e_fn(lo) > e) lo = 0.0;
  {
    const double f0 = e_fn(lo) - e;
    if (f0 > tol)
      throw ConvergenceError(std::string(who) +
                             ": no positive root, offset at theta=0+ exceeds e");
  }

  double x = std::min(std::max(0.5 * (lo + hi), lo), hi);
  for (; budget > 0; --budget) {
    const double f = e_fn(x) - e;
    if (std::abs(f) <= tol) {
      // one polishing update squares the residual, so the returned theta is
      // accurate to roundoff rather than to tol / e'
      const double df = de_fn(x);
      if (df > 0.0) {
        const double xp = x - f / df;
        if (xp > 0.0 && std::isfinite(xp)) return xp;
      }
      return x;
    }
    if (f > 0.0) hi = x; else lo = x;
    const double df = de_fn(x);
    double xn = (df > 0.0) ? x - f / df : lo - 1.0;  // force bisection if flat
    if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);
    x = xn;
  }
  throw ConvergenceError(std::string(who) + ": iteration budget exhausted");
}

}  // namespace

double theta_from_e_hot(const RegularizedModel& r, double e, double psi2b) {
  if (e <= 0.0) return e;  // extension below the vacuum state
  const double tol = 1e-12 * std::max(1.0, e);
  auto f = [&r, psi2b, e](double t) {
    return e0_part(r.base, t) + e1_eps(r, t) * psi2b - e;
  };
  double hi = (r.C1_e0 > 0.0) ? e / r.C1_e0 : std::max(1.0, e);
  int budget = 200;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (--budget == 0 || !std::isfinite(hi))
      throw ConvergenceError("theta_from_e: no upper bracket for e=" + std::to_string(e));
  }
  // e1_eps is nondecreasing, so its value at the upper bracket caps the
  // elastic offset when shrinking the lower bracket.
  const double cap = e1_eps(r, std::min(hi, 1e12)) * psi2b;
  double lo = (r.C2_e0 > 0.0) ? std::max(0.0, (e - cap) / r.C2_e0) : 0.0;
  if (f(lo) > 0.0) lo = 0.0;
  if (f(lo) > tol)
    throw ConvergenceError("theta_from_e: offset at theta=0+ exceeds e");

  const double cmid = 0.5 * (r.C1_e0 + r.C2_e0);
  double x = (cmid > 0.0) ? e / cmid : 0.5 * (lo + hi);
  if (!(x > lo) || !(x < hi)) x = 0.5 * (lo + hi);
  for (; budget > 0; --budget) {
    const double fx = f(x);
    const double df = -x * r.base.psi0.d2(x) - x * r.psi1eps.d2(x) * psi2b;
    if (std::abs(fx) <= tol) {
      // polish once so the theta error is roundoff-level, not tol / e'
      if (df > 0.0) {
        const double xp = x - fx / df;
        if (xp > 0.0 && std::isfinite(xp)) return xp;
      }
      return x;
    }
    if (fx > 0.0) hi = x; else lo = x;
    double xn = (df > 0.0) ? x - fx / df : lo - 1.0;  // force bisection if flat
    if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);
    x = xn;
  }
  throw ConvergenceError("theta_from_e: iteration budget exhausted");
}

double theta_from_e(const RegularizedModel& r, double e, double b) {
  if (!(b > 0.0)) throw std::domain_error("theta_from_e: b must be positive");
  if (e <= 0.0) return e;
  return theta_from_e_hot(r, e, r.base.psi2.value(b));
}

double theta_from_e_plain(const FreeEnergyModel& m, double e, double b) {
  if (!(e > 0.0)) throw std::domain_error("theta_from_e_plain: e must be positive");
  if (!(b > 0.0)) throw std::domain_error("theta_from_e_plain: b must be positive");
  double C1, C2;
  sample_e0_window(m, C1, C2);
  const double psi2b = m.psi2.value(b);
  auto e_fn = [&m, psi2b](double t) {
    return e0_part(m, t) + e1_part(m, t) * psi2b;
  };
  auto de_fn = [&m, psi2b](double t) {
    return -t * m.psi0.d2(t) - t * m.psi1.d2(t) * psi2b;
  };
  const double offset = m.psi1.value(0.0) * psi2b;
  if (e <= offset)
    throw ConvergenceError("theta_from_e_plain: e <= e1(0) psi2(b), no positive root");
  const double hi0 = (C1 > 0.0) ? e / C1 : std::max(1.0, e);
  const double cap = e1_part(m, std::min(hi0, 1e12)) * psi2b;
  return invert_energy(e_fn, de_fn, e, C1, C2, cap, "theta_from_e_plain");
}

double clamp_b(const MaterialCoefficients& c, double b) {
  return std::max(c.b_min, std::min(b, c.b_max));
}

double cutoff_profile(double s) {
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double t = s - 1.0;
  return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double convective_cutoff(double s, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) return 1.0;
  return cutoff_profile(s / k);
}

double clamp_initial_energy(const RegularizedModel& r, double theta0, double b0) {
  if (!(b0 > 0.0)) throw std::domain_error("clamp_initial_energy: b0 must be positive");
  if (r.eps == 0.0) {
    if (!(theta0 > 0.0))
      throw std::domain_error("clamp_initial_energy: theta0 must be positive when eps=0");
    return internal_energy(r.base, theta0, b0);
  }
  if (r.eps > 1.0)
    throw std::domain_error("clamp_initial_energy: eps > 1 leaves an empty clamp window");
  const double tc = std::max(r.eps, std::min(theta0, 1.0 / r.eps));
  return e_eps(r, tc, b0);
}

double floor_energy(const RegularizedModel& r) {
  return e0_part(r.base, 0.5 * r.eps);
}

double floor_theta(const RegularizedModel& r) { return 0.5 * r.eps; }

Vec2 stick_slip_mollified(const StickSlipParams& p, const Vec2& v_tau) {
  const double mag = v_tau.norm();
  if (p.eps > 0.0) return (p.s_star / (p.eps + mag) + p.gamma_star) * v_tau;
  if (mag == 0.0) return Vec2::Zero();
  return (p.s_star / mag + p.gamma_star) * v_tau;
}

Vec2 stick_slip_graph(const StickSlipParams& p, const Vec2& s) {
  const double mag = s.norm();
  if (mag <= p.s_star) return Vec2::Zero();
  if (!(p.gamma_star > 0.0))
    throw std::domain_error(
        "stick_slip_graph: traction above threshold requires gamma_star > 0");
  return ((mag - p.s_star) / mag / p.gamma_star) * s;
}

}  // namespace viscotherm
