#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "viscotherm/regularization.hpp"
#include "viscotherm/util.hpp"

using namespace viscotherm;

namespace {

auto oldroyd(double c_V = 1.0, double mu = 1.0) {
  return preset_oldroyd_b(c_V, 1.0, mu, 1.0, 1.0, 1.0, 1.0);
}

FreeEnergyModel bent_coupling_model() {
  FreeEnergyModel m = oldroyd().first;
  m.psi1.value = [](double th) { return 1.0 + 0.5 * (1.0 - std::exp(-th)); };
  m.psi1.d1 = [](double th) { return 0.5 * std::exp(-th); };
  m.psi1.d2 = [](double th) { return -0.5 * std::exp(-th); };
  return m;
}

}  // namespace

TEST_CASE("eps = 0 keeps the coupling modulus untouched") {
  const FreeEnergyModel m = bent_coupling_model();
  const RegularizedModel r = build_psi1_eps(m, 0.0);
  CHECK(r.derivative_bound_branch == 0);
  for (double th : {0.0, 1e-8, 0.3, 2.0, 100.0}) {
    CHECK(r.psi1eps.value(th) == doctest::Approx(m.psi1.value(th)).epsilon(1e-15));
    CHECK(r.psi1eps.d1(th) == doctest::Approx(m.psi1.d1(th)).epsilon(1e-15));
  }
}

TEST_CASE("surrogate structure for a constant coupling modulus") {
  const double eps = 0.1, P = 1.5;
  const RegularizedModel r = build_psi1_eps(oldroyd().first, eps);
  CHECK(r.eps == eps);
  CHECK(r.derivative_bound_branch == 1);  // psi1' = 0 is dominated trivially

  CHECK(r.psi1eps.value(0.0) == 0.0);
  // linear on [0, eps/2]
  const double m_slope = r.psi1eps.d1(eps * 0.25);
  CHECK(r.psi1eps.value(eps * 0.25) ==
        doctest::Approx(m_slope * eps * 0.25).epsilon(1e-13));
  CHECK(r.psi1eps.d1(1e-6) == doctest::Approx(m_slope).epsilon(1e-13));
  CHECK(r.psi1eps.d2(eps * 0.25) == 0.0);

  // exact match of value and two derivatives at eps, identity above
  CHECK(r.psi1eps.value(eps) == doctest::Approx(P).epsilon(1e-13));
  CHECK(r.psi1eps.d1(eps) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.psi1eps.d2(eps) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r.psi1eps.value(2.0) == P);

  // C^1 across the two seams by a small central difference
  for (double seam : {eps / 2, eps}) {
    const double h = 1e-8;
    const double jump_v = r.psi1eps.value(seam + h) - r.psi1eps.value(seam - h);
    CHECK(std::abs(jump_v - 2 * h * r.psi1eps.d1(seam)) < 1e-12);
  }

  // monotone nondecreasing and concave on a dense grid
  double prev = -1.0;
  for (int k = 0; k <= 400; ++k) {
    const double th = 2.0 * eps * k / 400.0;
    const double v = r.psi1eps.value(th);
    CHECK(v >= prev - 1e-15);
    CHECK(r.psi1eps.d2(th) <= 1e-10);
    CHECK(r.psi1eps.d1(th) >= -1e-15);
    prev = v;
  }
}

TEST_CASE("surrogate certificate holds for a bent admissible modulus") {
  const FreeEnergyModel m = bent_coupling_model();
  const RegularizedModel r = build_psi1_eps(m, 0.01);
  CHECK(r.derivative_bound_branch >= 1);
  for (double th : {0.011, 0.5, 3.0})
    CHECK(r.psi1eps.value(th) == m.psi1.value(th));
  // scaled derivative bound stays eps-uniform: eps|d1| + eps^2|d2| bounded
  double worst = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const RegularizedModel re = build_psi1_eps(m, eps);
    for (int k = 1; k <= 64; ++k) {
      const double th = 2.0 * eps * k / 64.0;
      worst = std::max(worst, eps * std::abs(re.psi1eps.d1(th)) +
                                  eps * eps * std::abs(re.psi1eps.d2(th)));
    }
  }
  CHECK(worst < 64.0);
}

TEST_CASE("a convex coupling modulus fails certification") {
  FreeEnergyModel m = oldroyd().first;
  m.psi1.value = [](double th) { return th * th; };
  m.psi1.d1 = [](double th) { return 2.0 * th; };
  m.psi1.d2 = [](double) { return 2.0; };
  CHECK_THROWS_AS((void)build_psi1_eps(m, 0.1), ConstructionError);
}

TEST_CASE("coupling energy part vanishes identically below eps/2") {
  const RegularizedModel r = build_psi1_eps(bent_coupling_model(), 0.02);
  for (double th : {0.0, 0.004, 0.00999}) CHECK(e1_eps(r, th) == 0.0);
  for (double th : {0.03, 1.0}) {
    const double expect = r.base.psi1.value(th) - th * r.base.psi1.d1(th);
    CHECK(e1_eps(r, th) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("regularized heat capacity never drops below the thermal part") {
  const RegularizedModel r = build_psi1_eps(oldroyd().first, 0.05);
  for (double th : {0.001, 0.03, 0.05, 0.2})
    for (double b : {0.7, 1.0, 1.5})
      CHECK(heat_capacity_eps(r, th, b) >= 1.0 - 1e-12);
}

TEST_CASE("temperature inversion round-trips across the whole window") {
  for (double eps : {0.0, 0.01}) {
    const RegularizedModel r = build_psi1_eps(bent_coupling_model(), eps);
    for (int k = 0; k <= 60; ++k) {
      const double th = std::pow(10.0, -3.0 + 6.0 * k / 60.0);
      for (double b : {0.7, 1.0, 1.5}) {
        const double e = e_eps(r, th, b);
        const double back = theta_from_e(r, e, b);
        CHECK(std::abs(e_eps(r, back, b) - e) <= 1e-10 * std::max(1.0, std::abs(e)));
        CHECK(back == doctest::Approx(th).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("inversion extension keeps the sign of the energy") {
  const RegularizedModel r = build_psi1_eps(oldroyd().first, 0.01);
  CHECK(theta_from_e(r, -5.0, 1.2) == -5.0);
  CHECK(theta_from_e(r, 0.0, 1.2) == 0.0);
  CHECK(theta_from_e(r, 1e-9, 1.0) > 0.0);
}

TEST_CASE("plain inversion matches hand-computed states") {
  auto [m1, c1] = oldroyd(1.0, 2.0 / 3.0);
  (void)c1;
  CHECK(theta_from_e_plain(m1, 5.0, 1.0) == doctest::Approx(5.0).epsilon(1e-10));

  auto [m2, c2] = preset_oldroyd_b(2.0, 1.0, 2.0, 1.0, 1.0, 1.0, 1.0);
  (void)c2;
  const double e = 2.0 + 3.0 * (1.0 - std::log(2.0));
  CHECK(theta_from_e_plain(m2, e, 2.0) == doctest::Approx(1.0).epsilon(1e-10));
  // below the elastic offset psi1(0) psi2(b) there is no positive root
  CHECK_THROWS_AS((void)theta_from_e_plain(m2, 0.5, 2.0), ConvergenceError);
}

TEST_CASE("clamping helpers") {
  auto [m, c] = oldroyd();
  (void)m;
  CHECK(clamp_b(c, 0.2) == c.b_min);
  CHECK(clamp_b(c, 1.2) == 1.2);
  CHECK(clamp_b(c, 9.0) == c.b_max);
}

TEST_CASE("cut-off profile shape and true Lipschitz constant") {
  CHECK(cutoff_profile(0.0) == 1.0);
  CHECK(cutoff_profile(1.0) == 1.0);
  CHECK(cutoff_profile(1.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cutoff_profile(2.0) == 0.0);
  CHECK(cutoff_profile(7.0) == 0.0);
  // nonincreasing; steepest slope of the quintic blend is 15/8 at midpoint
  double max_slope = 0.0, prev = cutoff_profile(0.9);
  for (int k = 1; k <= 2000; ++k) {
    const double s = 0.9 + 1.3 * k / 2000.0;
    const double v = cutoff_profile(s);
    CHECK(v <= prev + 1e-15);
    max_slope = std::max(max_slope, (prev - v) / (1.3 / 2000.0));
    prev = v;
  }
  CHECK(max_slope <= 1.875 + 1e-6);
  CHECK(max_slope >= 1.8);

  CHECK(convective_cutoff(123.0, 0.0) == 1.0);
  CHECK(convective_cutoff(3.0, 2.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(convective_cutoff(1.9, 2.0) == 1.0);
}

TEST_CASE("initial energy clamp maps out-of-window temperatures to the window") {
  const RegularizedModel r = build_psi1_eps(oldroyd().first, 0.01);
  const double b0 = 1.2;
  CHECK(clamp_initial_energy(r, 1e-4, b0) ==
        doctest::Approx(e_eps(r, 0.01, b0)).epsilon(1e-14));
  CHECK(clamp_initial_energy(r, 250.0, b0) ==
        doctest::Approx(e_eps(r, 100.0, b0)).epsilon(1e-14));
  CHECK(clamp_initial_energy(r, 2.0, b0) ==
        doctest::Approx(e_eps(r, 2.0, b0)).epsilon(1e-14));

  const RegularizedModel r0 = build_psi1_eps(oldroyd().first, 0.0);
  CHECK(clamp_initial_energy(r0, 2.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)clamp_initial_energy(r0, -1.0, 1.0), std::domain_error);
}

TEST_CASE("scheme floors come from the half-eps state") {
  const RegularizedModel r = build_psi1_eps(oldroyd(2.0).first, 0.01);
  CHECK(floor_theta(r) == doctest::Approx(0.005).epsilon(1e-14));
  CHECK(floor_energy(r) == doctest::Approx(0.01).epsilon(1e-14));  // c_V eps/2
}

TEST_CASE("mollified stick-slip and the exact graph") {
  StickSlipParams p{1.0, 2.0, 0.1};
  const Vec2 s = stick_slip_mollified(p, Vec2(0.4, 0.0));
  CHECK(s.x() == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(s.y() == 0.0);

  StickSlipParams pe{1.0, 2.0, 0.0};
  const Vec2 se = stick_slip_mollified(pe, Vec2(0.3, 0.4));
  CHECK(se.x() == doctest::Approx(1.2).epsilon(1e-14));
  CHECK(se.y() == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(stick_slip_mollified(pe, Vec2(0.0, 0.0)).norm() == 0.0);

  const Vec2 v = stick_slip_graph(pe, Vec2(3.0, 0.0));
  CHECK(v.x() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v.y() == 0.0);
  CHECK(stick_slip_graph(pe, Vec2(0.6, 0.0)).norm() == 0.0);  // below threshold

  StickSlipParams rigid{1.0, 0.0, 0.0};
  CHECK_THROWS_AS((void)stick_slip_graph(rigid, Vec2(2.0, 0.0)), std::domain_error);
}

TEST_CASE("graph inverse undoes the mollified law up to the documented defect") {
  // the composition reproduces gamma_* v with error at most s_* eps/(eps+delta)
  const double delta = 0.1;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    StickSlipParams p{1.3, 0.7, eps};
    StickSlipParams graph{1.3, 0.7, 0.0};
    const double bound = p.s_star * eps / (eps + delta) + 1e-12;
    for (int k = 0; k < 200; ++k) {
      const double mag = delta + 3.0 * k / 200.0;
      const double ang = 0.03 * k;
      const Vec2 v(mag * std::cos(ang), mag * std::sin(ang));
      const Vec2 back = stick_slip_graph(graph, stick_slip_mollified(p, v));
      CHECK(p.gamma_star * (back - v).norm() <= bound);
    }
  }
}
