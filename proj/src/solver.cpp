#include "viscotherm/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "viscotherm/util.hpp"

namespace viscotherm {

namespace {

double mollified_scalar(const StickSlipParams& p, double v) {
  const double mag = std::abs(v);
  if (p.eps > 0.0) return (p.s_star / (p.eps + mag) + p.gamma_star) * v;
  if (mag == 0.0) return 0.0;
  return (p.s_star / mag + p.gamma_star) * v;
}

}  // namespace

struct Simulator::PointwiseOut {
  Grid bM, theta, gtx, gty;
  Grid gbMx, gbMy;          // clamp chain rule: grad b where b is inside, else 0
  Grid e1e, p2d1;           // e1_eps(theta), psi2'(bM)
  Grid nu, kappa, alpha, hval, Cf, p2d2;
  Grid inv_theta;           // 1/theta where theta > 0, else 0
  Grid zeta_nov;            // entropy production rate without the viscous part

  void resize(Eigen::Index nx, Eigen::Index ny) {
    for (Grid* g : {&bM, &theta, &gtx, &gty, &gbMx, &gbMy, &e1e, &p2d1, &nu, &kappa,
                    &alpha, &hval, &Cf, &p2d2, &inv_theta, &zeta_nov})
      g->resize(nx, ny);
  }
};

Simulator::Simulator(SimulationConfig cfg) : cfg_(std::move(cfg)) {
  if (!(cfg_.t1 >= cfg_.t0)) throw ConfigError("Simulator: t1 must be >= t0");
  if (cfg_.threads < 1) throw ConfigError("Simulator: threads must be >= 1");
  QuadratureSpec q = cfg_.quadrature;
  if (q.nx <= 0 || q.ny <= 0)
    q = default_quadrature(cfg_.scalar_modes, cfg_.velocity_modes);
  ws_ = std::make_shared<SpectralWorkspace>(cfg_.domain, cfg_.scalar_modes,
                                            cfg_.velocity_modes, q);
  reg_ = build_psi1_eps(cfg_.model, cfg_.reg_epsilon);

  const auto& xs = ws_->nodes_x();
  const auto& ys = ws_->nodes_y();
  fbx_ = Grid::Zero(xs.size(), ys.size());
  fby_ = Grid::Zero(xs.size(), ys.size());
  if (cfg_.body_force) {
    has_force_ = true;
    for (Eigen::Index i = 0; i < xs.size(); ++i)
      for (Eigen::Index j = 0; j < ys.size(); ++j) {
        const Vec2 f = cfg_.body_force(xs(i), ys(j));
        fbx_(i, j) = f.x();
        fby_(i, j) = f.y();
      }
  }
  has_wall_law_ = cfg_.stickslip.s_star != 0.0 || cfg_.stickslip.gamma_star != 0.0;
}

SimState Simulator::initial_state() const {
  const auto& xs = ws_->nodes_x();
  const auto& ys = ws_->nodes_y();
  const Eigen::Index nx = xs.size(), ny = ys.size();
  if (!cfg_.initial.theta0 || !cfg_.initial.b0)
    throw ConfigError("Simulator: initial theta0 and b0 are required");

  Grid t0g(nx, ny), b0g(nx, ny), e0g(nx, ny);
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < ny; ++j) {
      t0g(i, j) = cfg_.initial.theta0(xs(i), ys(j));
      b0g(i, j) = cfg_.initial.b0(xs(i), ys(j));
      e0g(i, j) = clamp_initial_energy(reg_, t0g(i, j), b0g(i, j));
    }

  SimState s;
  s.t = cfg_.t0;
  s.d = ws_->project_scalar(b0g);
  s.e_c = ws_->project_scalar(e0g);

  const int nc = ws_->n_velocity_modes();
  const auto& coeffs = (cfg_.mode == RunMode::kinematic) ? cfg_.prescribed_coeffs
                                                         : cfg_.initial.v0_coeffs;
  const auto& field = (cfg_.mode == RunMode::kinematic) ? cfg_.prescribed_velocity
                                                        : cfg_.initial.v0;
  if (coeffs) {
    if (coeffs->size() != nc)
      throw ConfigError("Simulator: velocity coefficient vector has wrong size");
    s.c = *coeffs;
  } else if (field) {
    Grid vx(nx, ny), vy(nx, ny);
    for (Eigen::Index i = 0; i < nx; ++i)
      for (Eigen::Index j = 0; j < ny; ++j) {
        const Vec2 v = field(xs(i), ys(j));
        vx(i, j) = v.x();
        vy(i, j) = v.y();
      }
    s.c = ws_->project_velocity(vx, vy);
  } else {
    s.c = Eigen::VectorXd::Zero(nc);
  }
  return s;
}

void Simulator::pointwise_thermo(const Grid& b, const Grid& gbx, const Grid& gby,
                                 const Grid& e, const Grid& gex, const Grid& gey,
                                 PointwiseOut& P) const {
  const Eigen::Index nx = b.rows(), ny = b.cols();
  P.resize(nx, ny);
  const std::size_t n = static_cast<std::size_t>(nx * ny);
  const auto& model = cfg_.model;
  const auto& co = cfg_.coeffs;
  const double bmin = co.b_min, bmax = co.b_max;

  const double* pb = b.data();
  const double* pgbx = gbx.data();
  const double* pgby = gby.data();
  const double* pe = e.data();
  const double* pgex = gex.data();
  const double* pgey = gey.data();

  parallel_for_blocks(n, cfg_.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t q = lo; q < hi; ++q) {
      const double bq = pb[q];
      const double bM = std::max(bmin, std::min(bq, bmax));
      const double psi2b = model.psi2.value(bM);
      const double p2d1 = model.psi2.d1(bM);
      const double p2d2 = model.psi2.d2(bM);
      const double eq = pe[q];

      double theta, gtx, gty, e1v;
      if (eq > 0.0) {
        theta = theta_from_e_hot(reg_, eq, psi2b);
        e1v = e1_eps(reg_, theta);
        const double cap = -theta * model.psi0.d2(theta) -
                           theta * reg_.psi1eps.d2(theta) * psi2b;
        const bool inside = bq >= bmin && bq <= bmax;
        const double gbMx = inside ? pgbx[q] : 0.0;
        const double gbMy = inside ? pgby[q] : 0.0;
        gtx = (pgex[q] - e1v * p2d1 * gbMx) / cap;
        gty = (pgey[q] - e1v * p2d1 * gbMy) / cap;
        P.gbMx.data()[q] = gbMx;
        P.gbMy.data()[q] = gbMy;
      } else {
        theta = eq;  // extension of the inversion below the vacuum state
        e1v = 0.0;
        gtx = pgex[q];
        gty = pgey[q];
        const bool inside = bq >= bmin && bq <= bmax;
        P.gbMx.data()[q] = inside ? pgbx[q] : 0.0;
        P.gbMy.data()[q] = inside ? pgby[q] : 0.0;
      }

      const double th_c = std::max(theta, 0.0);  // coefficient argument
      const double nuv = co.nu(th_c, bM);
      const double kev = co.kappa(th_c, bM);
      const double alv = co.alpha(th_c, bM);
      const double hv = co.h(th_c, bM);
      const double Cf = co.Cfun(th_c, bM);
      const double p1e = reg_.psi1eps.value(th_c);

      P.bM.data()[q] = bM;
      P.theta.data()[q] = theta;
      P.gtx.data()[q] = gtx;
      P.gty.data()[q] = gty;
      P.e1e.data()[q] = e1v;
      P.p2d1.data()[q] = p2d1;
      P.nu.data()[q] = nuv;
      P.kappa.data()[q] = kev;
      P.alpha.data()[q] = alv;
      P.hval.data()[q] = hv;
      P.Cf.data()[q] = Cf;
      P.p2d2.data()[q] = p2d2;
      const double invt = theta > 0.0 ? 1.0 / theta : 0.0;
      P.inv_theta.data()[q] = invt;
      // thermal + relaxation + stress-diffusion parts of zeta
      const double gt2 = gtx * gtx + gty * gty;
      const double gb2 = pgbx[q] * pgbx[q] + pgby[q] * pgby[q];
      P.zeta_nov.data()[q] =
          theta > 0.0
              ? (kev * gt2 * invt + Cf * p1e * p2d1 * p2d1 + p1e * p2d2 * alv * gb2) * invt
              : 0.0;
    }
  });
}

void Simulator::assemble_rhs(const SimState& s, Eigen::VectorXd& dc,
                             Eigen::VectorXd& dd, Eigen::VectorXd& de,
                             RhsAccum& acc) const {
  const auto& W = *ws_;
  const Grid b = W.synth_scalar(s.d);
  Grid gbx, gby;
  W.synth_scalar_grad(s.d, gbx, gby);
  const Grid e = W.synth_scalar(s.e_c);
  Grid gex, gey;
  W.synth_scalar_grad(s.e_c, gex, gey);
  Grid vx, vy, dxvx, dyvx, dxvy, dyvy;
  W.synth_velocity(s.c, vx, vy);
  W.synth_velocity_grad(s.c, dxvx, dyvx, dxvy, dyvy);
  const Grid Dxx = dxvx;
  const Grid Dyy = dyvy;
  const Grid Dxy = 0.5 * (dyvx + dxvy);
  const Grid Dfrob2 = Dxx.square() + 2.0 * Dxy.square() + Dyy.square();

  PointwiseOut P;
  pointwise_thermo(b, gbx, gby, e, gex, gey, P);

  // b-equation: d_t b + div(b v) = div(alpha grad b) - h, tested against the
  // cosine modes (all normal fluxes vanish on the walls by construction).
  {
    const Grid Fbx = P.alpha * gbx - b * vx;
    const Grid Fby = P.alpha * gby - b * vy;
    dd = W.mass_solve_scalar(-W.load_scalar_flux(Fbx, Fby) - W.load_scalar(P.hval));
  }

  // e-equation with the extra elliptic term and the cross-diffusion flux.
  {
    const double mu = cfg_.elliptic_mu;
    const Grid cross = P.alpha * P.e1e * P.p2d1;
    const Grid Fex = mu * gex + P.kappa * P.gtx + cross * P.gbMx - e * vx;
    const Grid Fey = mu * gey + P.kappa * P.gty + cross * P.gbMy - e * vy;
    const Grid srcE = 2.0 * P.nu * Dfrob2;
    de = W.mass_solve_scalar(W.load_scalar(srcE) - W.load_scalar_flux(Fex, Fey));
  }

  // momentum rows (frozen in kinematic mode)
  acc.work_rate = 0.0;
  if (cfg_.mode == RunMode::dynamic) {
    const Grid g = (vx.square() + vy.square())
                       .sqrt()
                       .unaryExpr([k = cfg_.cutoff_k](double sp) {
                         return convective_cutoff(sp, k);
                       });
    const Grid Sxx = 2.0 * P.nu * Dxx - g * vx * vx;
    const Grid Sxy = 2.0 * P.nu * Dxy - g * vx * vy;
    const Grid Syy = 2.0 * P.nu * Dyy - g * vy * vy;
    Eigen::VectorXd load = -W.load_velocity_tensor(Sxx, Sxy, Syy);
    if (has_force_) load += W.load_velocity_force(fbx_, fby_);
    if (has_wall_law_) {
      std::array<Eigen::VectorXd, 4> gs;
      for (int eidx = 0; eidx < 4; ++eidx) {
        const Edge eg = static_cast<Edge>(eidx);
        Eigen::VectorXd vt = W.edge_velocity(eg, s.c);
        Eigen::VectorXd st(vt.size());
        for (Eigen::Index q = 0; q < vt.size(); ++q)
          st(q) = mollified_scalar(cfg_.stickslip, vt(q));
        acc.work_rate += W.boundary_integral(
            eg, (st.array() * vt.array()).matrix().eval());
        gs[eidx] = std::move(st);
      }
      load -= W.boundary_load(gs);
    }
    dc = W.gram_solve(load);
  } else {
    dc = Eigen::VectorXd::Zero(W.n_velocity_modes());
    if (has_wall_law_) {
      for (int eidx = 0; eidx < 4; ++eidx) {
        const Edge eg = static_cast<Edge>(eidx);
        Eigen::VectorXd vt = W.edge_velocity(eg, s.c);
        Eigen::VectorXd st(vt.size());
        for (Eigen::Index q = 0; q < vt.size(); ++q)
          st(q) = mollified_scalar(cfg_.stickslip, vt(q));
        acc.work_rate += W.boundary_integral(
            eg, (st.array() * vt.array()).matrix().eval());
      }
    }
  }

  acc.body_rate = has_force_ ? W.integrate(fbx_ * vx + fby_ * vy) : 0.0;
  const Grid zeta = P.zeta_nov + 2.0 * P.nu * Dfrob2 * P.inv_theta;
  acc.zeta_rate = W.integrate(zeta);
}

NodeFields Simulator::synthesize(const SimState& s) const {
  const auto& W = *ws_;
  NodeFields f;
  f.b = W.synth_scalar(s.d);
  W.synth_scalar_grad(s.d, f.gbx, f.gby);
  f.e = W.synth_scalar(s.e_c);
  W.synth_scalar_grad(s.e_c, f.gex, f.gey);
  Grid dxvx, dyvx, dxvy, dyvy;
  W.synth_velocity(s.c, f.vx, f.vy);
  W.synth_velocity_grad(s.c, dxvx, dyvx, dxvy, dyvy);
  f.Dxx = dxvx;
  f.Dyy = dyvy;
  f.Dxy = 0.5 * (dyvx + dxvy);

  PointwiseOut P;
  pointwise_thermo(f.b, f.gbx, f.gby, f.e, f.gex, f.gey, P);
  f.bM = std::move(P.bM);
  f.theta = std::move(P.theta);
  f.gtx = std::move(P.gtx);
  f.gty = std::move(P.gty);
  return f;
}

Eigen::VectorXd Simulator::edge_traction(Edge e, const Eigen::VectorXd& c) const {
  Eigen::VectorXd vt = ws_->edge_velocity(e, c);
  for (Eigen::Index q = 0; q < vt.size(); ++q)
    vt(q) = mollified_scalar(cfg_.stickslip, vt(q));
  return vt;
}

double Simulator::kinetic_energy(const SimState& s) const {
  if (s.c.size() == 0) return 0.0;
  return 0.5 * s.c.dot(ws_->gram() * s.c);
}

void Simulator::rhs_flat(const Eigen::VectorXd& y, Eigen::VectorXd& dy) const {
  const int nc = ws_->n_velocity_modes();
  const int ns = ws_->n_scalar_modes();
  SimState s;
  s.c = y.segment(0, nc);
  s.d = y.segment(nc, ns);
  s.e_c = y.segment(nc + ns, ns);
  Eigen::VectorXd dc, dd, de;
  RhsAccum acc;
  assemble_rhs(s, dc, dd, de, acc);
  dy.resize(y.size());
  dy.segment(0, nc) = dc;
  dy.segment(nc, ns) = dd;
  dy.segment(nc + ns, ns) = de;
  dy(nc + 2 * ns) = acc.work_rate;
  dy(nc + 2 * ns + 1) = acc.body_rate;
  dy(nc + 2 * ns + 2) = acc.zeta_rate;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640,
                 e5 = -2187.0 / 6784 + 92097.0 / 339200, e6 = 11.0 / 84 - 187.0 / 2100,
                 e7 = -1.0 / 40;

}  // namespace

StepRecord Simulator::integrate(const Observer& obs) const {
  const int nc = ws_->n_velocity_modes();
  const int ns = ws_->n_scalar_modes();
  const int n = nc + 2 * ns + 3;
  const double area = cfg_.domain.Lx * cfg_.domain.Ly;

  SimState s0 = initial_state();
  Eigen::VectorXd y(n);
  y.segment(0, nc) = s0.c;
  y.segment(nc, ns) = s0.d;
  y.segment(nc + ns, ns) = s0.e_c;
  y.tail(3).setZero();

  std::vector<double> events;
  for (double ts : cfg_.snapshot_times)
    if (ts > cfg_.t0 && ts < cfg_.t1) events.push_back(ts);
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());
  events.push_back(cfg_.t1);

  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y5(n);
  rhs_flat(y, k1);

  auto make_record = [&](double t, const Eigen::VectorXd& yy, const Eigen::VectorXd& kk,
                         double dt) {
    StepRecord r;
    r.state.t = t;
    r.state.c = yy.segment(0, nc);
    r.state.d = yy.segment(nc, ns);
    r.state.e_c = yy.segment(nc + ns, ns);
    r.work_acc = yy(nc + 2 * ns);
    r.body_acc = yy(nc + 2 * ns + 1);
    r.zeta_acc = yy(nc + 2 * ns + 2);
    r.dt = dt;
    r.dmass_b = kk(nc) * area;
    r.denergy = kk(nc + ns) * area;
    return r;
  };

  double t = cfg_.t0;
  if (obs) obs(make_record(t, y, k1, 0.0));
  if (cfg_.t1 == cfg_.t0) return make_record(t, y, k1, 0.0);

  const OdeOptions& o = cfg_.ode;
  auto err_scale = [&](double a, double bb) {
    return o.abs_tol + o.rel_tol * std::max(std::abs(a), std::abs(bb));
  };

  // initial step from the scaled norms of y and f
  double h;
  if (o.initial_step > 0.0) {
    h = o.initial_step;
  } else {
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sc = err_scale(y(i), y(i));
      d0 += std::pow(y(i) / sc, 2);
      d1 += std::pow(k1(i) / sc, 2);
    }
    d0 = std::sqrt(d0 / n);
    d1 = std::sqrt(d1 / n);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, 0.1 * (cfg_.t1 - cfg_.t0));
  }
  h = std::min(h, o.max_step);

  std::size_t ev = 0;
  long steps = 0;
  while (t < cfg_.t1) {
    while (ev < events.size() && events[ev] <= t + 1e-14 * std::max(1.0, std::abs(t)))
      ++ev;
    const double t_target = ev < events.size() ? events[ev] : cfg_.t1;
    bool clipped = false;
    if (t + h >= t_target) {
      h = t_target - t;
      clipped = true;
    }
    if (!(h > 0.0) || h < 4e-16 * std::max(1.0, std::abs(t)))
      throw SolverError("integrate: step size underflow at t=" + std::to_string(t));
    if (++steps > o.max_steps) throw SolverError("integrate: step budget exhausted");

    ytmp = y + h * a21 * k1;
    rhs_flat(ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs_flat(ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs_flat(ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs_flat(ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs_flat(ytmp, k6);
    y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs_flat(y5, k7);  // FSAL

    double err = 0.0;
    bool finite = y5.allFinite();
    if (finite) {
      for (int i = 0; i < n; ++i) {
        const double d = h * (e1 * k1(i) + e3 * k3(i) + e4 * k4(i) + e5 * k5(i) +
                              e6 * k6(i) + e7 * k7(i));
        const double q = d / err_scale(y(i), y5(i));
        err += q * q;
      }
      err = std::sqrt(err / n);
      if (!std::isfinite(err)) finite = false;
    }

    if (finite && err <= 1.0) {
      t = clipped ? t_target : t + h;
      y.swap(y5);
      k1.swap(k7);
      if (obs) obs(make_record(t, y, k1, h));
      const double fac =
          err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, o.safety * std::pow(err, -0.2)));
      h = std::min(h * fac, o.max_step);
    } else {
      const double fac =
          finite ? std::max(0.1, o.safety * std::pow(err, -0.2)) : 0.5;
      h *= std::min(0.9, fac);
    }
  }
  return make_record(t, y, k1, 0.0);
}

}  // namespace viscotherm
