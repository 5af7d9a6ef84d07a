#include "viscotherm/spectral.hpp"

#include <cmath>
#include <numbers>

#include "viscotherm/util.hpp"

namespace viscotherm {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre rule on [-1, 1] by Newton iteration on the Legendre
// recurrence; deterministic for a given n.
void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  x.resize(n);
  w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x(i) = -z;
    x(n - 1 - i) = z;
    w(i) = 2.0 / ((1.0 - z * z) * pp * pp);
    w(n - 1 - i) = w(i);
  }
}

void map_to_segment(double L, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  x = (0.5 * (x.array() + 1.0) * L).matrix();
  w = (0.5 * L * w.array()).matrix();
}

int parity(int k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace

QuadratureSpec default_quadrature(const ScalarBasisSpec& s, const VelocityBasisSpec& v) {
  auto pick = [](int M, int N) {
    const int guard = 2 * std::max(M - 1, N) + 2;
    const int acc_scalar = static_cast<int>(std::ceil(2.2 * M)) + 8;
    const int acc_vel = N > 0 ? 3 * N + 8 : 0;
    return std::max({guard, acc_scalar, acc_vel, 4});
  };
  return {pick(s.Mx, v.Nx), pick(s.My, v.Ny)};
}

SpectralWorkspace::SpectralWorkspace(const Rectangle& rect, const ScalarBasisSpec& sb,
                                     const VelocityBasisSpec& vb,
                                     const QuadratureSpec& q)
    : rect_(rect), sspec_(sb), vspec_(vb), qspec_(q) {
  if (!(rect.Lx > 0) || !(rect.Ly > 0))
    throw ConfigError("SpectralWorkspace: domain lengths must be positive");
  if (sb.Mx < 1 || sb.My < 1)
    throw ConfigError("SpectralWorkspace: need at least one scalar mode per direction");
  if (vb.Nx < 0 || vb.Ny < 0 || (vb.Nx == 0) != (vb.Ny == 0))
    throw ConfigError("SpectralWorkspace: invalid velocity mode counts");
  const int guard_x = 2 * std::max(sb.Mx - 1, vb.Nx) + 2;
  const int guard_y = 2 * std::max(sb.My - 1, vb.Ny) + 2;
  if (q.nx < guard_x || q.ny < guard_y)
    throw ConfigError("SpectralWorkspace: quadrature nodes below the resolution guard (need " +
                      std::to_string(guard_x) + "x" + std::to_string(guard_y) + ", got " +
                      std::to_string(q.nx) + "x" + std::to_string(q.ny) + ")");

  gauss_legendre(q.nx, xs_, wx_);
  map_to_segment(rect.Lx, xs_, wx_);
  gauss_legendre(q.ny, ys_, wy_);
  map_to_segment(rect.Ly, ys_, wy_);
  wgt_ = wx_ * wy_.transpose();

  // 1D cosine factors and their derivatives.
  Cx_.resize(q.nx, sb.Mx);
  CxD_.resize(q.nx, sb.Mx);
  for (int i = 0; i < sb.Mx; ++i) {
    const double ki = i * kPi / rect.Lx;
    for (int qx = 0; qx < q.nx; ++qx) {
      Cx_(qx, i) = std::cos(ki * xs_(qx));
      CxD_(qx, i) = -ki * std::sin(ki * xs_(qx));
    }
  }
  Cy_.resize(q.ny, sb.My);
  CyD_.resize(q.ny, sb.My);
  for (int j = 0; j < sb.My; ++j) {
    const double kj = j * kPi / rect.Ly;
    for (int qy = 0; qy < q.ny; ++qy) {
      Cy_(qy, j) = std::cos(kj * ys_(qy));
      CyD_(qy, j) = -kj * std::sin(kj * ys_(qy));
    }
  }
  snorm_.resize(sb.Mx * sb.My);
  for (int i = 0; i < sb.Mx; ++i)
    for (int j = 0; j < sb.My; ++j)
      snorm_(i * sb.My + j) = (i == 0 ? rect.Lx : 0.5 * rect.Lx) *
                              (j == 0 ? rect.Ly : 0.5 * rect.Ly);

  // 1D sine factors for the streamfunction modes (indices 1..N).
  Sx_.resize(q.nx, vb.Nx);
  SxD_.resize(q.nx, vb.Nx);
  SxDD_.resize(q.nx, vb.Nx);
  for (int i = 1; i <= vb.Nx; ++i) {
    const double ki = i * kPi / rect.Lx;
    for (int qx = 0; qx < q.nx; ++qx) {
      const double s = std::sin(ki * xs_(qx)), c = std::cos(ki * xs_(qx));
      Sx_(qx, i - 1) = s;
      SxD_(qx, i - 1) = ki * c;
      SxDD_(qx, i - 1) = -ki * ki * s;
    }
  }
  Sy_.resize(q.ny, vb.Ny);
  SyD_.resize(q.ny, vb.Ny);
  SyDD_.resize(q.ny, vb.Ny);
  for (int j = 1; j <= vb.Ny; ++j) {
    const double kj = j * kPi / rect.Ly;
    for (int qy = 0; qy < q.ny; ++qy) {
      const double s = std::sin(kj * ys_(qy)), c = std::cos(kj * ys_(qy));
      Sy_(qy, j - 1) = s;
      SyD_(qy, j - 1) = kj * c;
      SyDD_(qy, j - 1) = -kj * kj * s;
    }
  }

  // Edge tangential traces; exact parity factors for sin/cos at the far walls.
  const int nmodes = vb.Nx * vb.Ny;
  for (auto e : {Edge::Y0, Edge::X1, Edge::Y1, Edge::X0}) {
    const int ne = edge_nodes(e);
    Eigen::MatrixXd Tr(ne, nmodes);
    for (int i = 1; i <= vb.Nx; ++i) {
      const double ki = i * kPi / rect.Lx;
      for (int j = 1; j <= vb.Ny; ++j) {
        const double kj = j * kPi / rect.Ly;
        const int flat = (i - 1) * vb.Ny + (j - 1);
        for (int qn = 0; qn < ne; ++qn) {
          double v = 0.0;
          switch (e) {
            case Edge::Y0: v = kj * Sx_(qn, i - 1); break;
            case Edge::Y1: v = kj * parity(j) * Sx_(qn, i - 1); break;
            case Edge::X0: v = -ki * Sy_(qn, j - 1); break;
            case Edge::X1: v = -ki * parity(i) * Sy_(qn, j - 1); break;
          }
          Tr(qn, flat) = v;
        }
      }
    }
    edge_trace_[static_cast<int>(e)] = std::move(Tr);
  }

  // Velocity Gram matrix by quadrature, then a dense symmetric factorization.
  gram_.resize(nmodes, nmodes);
  if (nmodes > 0) {
    Grid vx, vy;
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(nmodes);
    for (int mcol = 0; mcol < nmodes; ++mcol) {
      unit(mcol) = 1.0;
      synth_velocity(unit, vx, vy);
      gram_.col(mcol) = load_velocity_force(vx, vy);
      unit(mcol) = 0.0;
    }
    gram_ = 0.5 * (gram_ + gram_.transpose()).eval();
    gram_ldlt_.compute(gram_);
    if (gram_ldlt_.info() != Eigen::Success)
      throw ConstructionError("SpectralWorkspace: Gram factorization failed");
  }
}

Grid SpectralWorkspace::synth_scalar(const Eigen::VectorXd& d) const {
  Eigen::Map<const Eigen::MatrixXd> A(d.data(), sspec_.My, sspec_.Mx);
  return (Cx_ * A.transpose() * Cy_.transpose()).array();
}

void SpectralWorkspace::synth_scalar_grad(const Eigen::VectorXd& d, Grid& gx,
                                          Grid& gy) const {
  Eigen::Map<const Eigen::MatrixXd> A(d.data(), sspec_.My, sspec_.Mx);
  const Eigen::MatrixXd At = A.transpose();
  gx = (CxD_ * At * Cy_.transpose()).array();
  gy = (Cx_ * At * CyD_.transpose()).array();
}

Eigen::VectorXd SpectralWorkspace::load_scalar(const Grid& f) const {
  const Eigen::MatrixXd R = Cx_.transpose() * (wgt_ * f).matrix() * Cy_;
  Eigen::VectorXd out(sspec_.Mx * sspec_.My);
  Eigen::Map<Eigen::MatrixXd>(out.data(), sspec_.My, sspec_.Mx) = R.transpose();
  return out;
}

Eigen::VectorXd SpectralWorkspace::load_scalar_flux(const Grid& Fx, const Grid& Fy) const {
  const Eigen::MatrixXd R = CxD_.transpose() * (wgt_ * Fx).matrix() * Cy_ +
                            Cx_.transpose() * (wgt_ * Fy).matrix() * CyD_;
  Eigen::VectorXd out(sspec_.Mx * sspec_.My);
  Eigen::Map<Eigen::MatrixXd>(out.data(), sspec_.My, sspec_.Mx) = R.transpose();
  return out;
}

Eigen::VectorXd SpectralWorkspace::mass_solve_scalar(const Eigen::VectorXd& load) const {
  return (load.array() / snorm_.array()).matrix();
}

Eigen::VectorXd SpectralWorkspace::project_scalar(const Grid& f) const {
  return mass_solve_scalar(load_scalar(f));
}

void SpectralWorkspace::synth_velocity(const Eigen::VectorXd& c, Grid& vx,
                                       Grid& vy) const {
  Eigen::Map<const Eigen::MatrixXd> A(c.data(), vspec_.Ny, vspec_.Nx);
  const Eigen::MatrixXd At = A.transpose();
  vx = (Sx_ * At * SyD_.transpose()).array();
  vy = -(SxD_ * At * Sy_.transpose()).array();
}

void SpectralWorkspace::synth_velocity_grad(const Eigen::VectorXd& c, Grid& dxvx,
                                            Grid& dyvx, Grid& dxvy, Grid& dyvy) const {
  Eigen::Map<const Eigen::MatrixXd> A(c.data(), vspec_.Ny, vspec_.Nx);
  const Eigen::MatrixXd At = A.transpose();
  const Eigen::MatrixXd mixed = SxD_ * At * SyD_.transpose();  // d_x d_y phi
  dxvx = mixed.array();
  dyvy = -mixed.array();
  dyvx = (Sx_ * At * SyDD_.transpose()).array();
  dxvy = -(SxDD_ * At * Sy_.transpose()).array();
}

Eigen::VectorXd SpectralWorkspace::load_velocity_force(const Grid& fx,
                                                       const Grid& fy) const {
  const Eigen::MatrixXd R = Sx_.transpose() * (wgt_ * fx).matrix() * SyD_ -
                            SxD_.transpose() * (wgt_ * fy).matrix() * Sy_;
  Eigen::VectorXd out(vspec_.Nx * vspec_.Ny);
  Eigen::Map<Eigen::MatrixXd>(out.data(), vspec_.Ny, vspec_.Nx) = R.transpose();
  return out;
}

Eigen::VectorXd SpectralWorkspace::load_velocity_tensor(const Grid& Sxx, const Grid& Sxy,
                                                        const Grid& Syy) const {
  // S : grad w = (S_xx - S_yy) d_xd_y phi + S_xy (d_yy - d_xx) phi.
  const Eigen::MatrixXd R =
      SxD_.transpose() * (wgt_ * (Sxx - Syy)).matrix() * SyD_ +
      Sx_.transpose() * (wgt_ * Sxy).matrix() * SyDD_ -
      SxDD_.transpose() * (wgt_ * Sxy).matrix() * Sy_;
  Eigen::VectorXd out(vspec_.Nx * vspec_.Ny);
  Eigen::Map<Eigen::MatrixXd>(out.data(), vspec_.Ny, vspec_.Nx) = R.transpose();
  return out;
}

Eigen::VectorXd SpectralWorkspace::gram_solve(const Eigen::VectorXd& load) const {
  return gram_ldlt_.solve(load);
}

Eigen::VectorXd SpectralWorkspace::project_velocity(const Grid& vx, const Grid& vy) const {
  return gram_solve(load_velocity_force(vx, vy));
}

double SpectralWorkspace::integrate(const Grid& f) const { return (wgt_ * f).sum(); }

int SpectralWorkspace::edge_nodes(Edge e) const {
  return (e == Edge::Y0 || e == Edge::Y1) ? qspec_.nx : qspec_.ny;
}

const Eigen::VectorXd& SpectralWorkspace::edge_coords(Edge e) const {
  return (e == Edge::Y0 || e == Edge::Y1) ? xs_ : ys_;
}

const Eigen::VectorXd& SpectralWorkspace::edge_weights(Edge e) const {
  return (e == Edge::Y0 || e == Edge::Y1) ? wx_ : wy_;
}

Eigen::VectorXd SpectralWorkspace::edge_velocity(Edge e, const Eigen::VectorXd& c) const {
  return edge_trace_[static_cast<int>(e)] * c;
}

Eigen::VectorXd SpectralWorkspace::boundary_load(
    const std::array<Eigen::VectorXd, 4>& g) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(vspec_.Nx * vspec_.Ny);
  for (int e = 0; e < 4; ++e) {
    const auto& w = edge_weights(static_cast<Edge>(e));
    out += edge_trace_[e].transpose() * (w.array() * g[e].array()).matrix();
  }
  return out;
}

double SpectralWorkspace::boundary_integral(Edge e, const Eigen::VectorXd& f) const {
  return edge_weights(e).dot(f);
}

Grid SpectralWorkspace::eval_scalar_at(const Eigen::VectorXd& d,
                                       const Eigen::VectorXd& px,
                                       const Eigen::VectorXd& py) const {
  Eigen::MatrixXd Px(px.size(), sspec_.Mx), Py(py.size(), sspec_.My);
  for (int i = 0; i < sspec_.Mx; ++i)
    Px.col(i) = (i * kPi / rect_.Lx * px.array()).cos();
  for (int j = 0; j < sspec_.My; ++j)
    Py.col(j) = (j * kPi / rect_.Ly * py.array()).cos();
  Eigen::Map<const Eigen::MatrixXd> A(d.data(), sspec_.My, sspec_.Mx);
  return (Px * A.transpose() * Py.transpose()).array();
}

void SpectralWorkspace::eval_velocity_at(const Eigen::VectorXd& c,
                                         const Eigen::VectorXd& px,
                                         const Eigen::VectorXd& py, Grid& vx,
                                         Grid& vy) const {
  Eigen::MatrixXd Px(px.size(), vspec_.Nx), PxD(px.size(), vspec_.Nx);
  Eigen::MatrixXd Py(py.size(), vspec_.Ny), PyD(py.size(), vspec_.Ny);
  for (int i = 1; i <= vspec_.Nx; ++i) {
    const double ki = i * kPi / rect_.Lx;
    Px.col(i - 1) = (ki * px.array()).sin();
    PxD.col(i - 1) = ki * (ki * px.array()).cos();
  }
  for (int j = 1; j <= vspec_.Ny; ++j) {
    const double kj = j * kPi / rect_.Ly;
    Py.col(j - 1) = (kj * py.array()).sin();
    PyD.col(j - 1) = kj * (kj * py.array()).cos();
  }
  Eigen::Map<const Eigen::MatrixXd> A(c.data(), vspec_.Ny, vspec_.Nx);
  const Eigen::MatrixXd At = A.transpose();
  vx = (Px * At * PyD.transpose()).array();
  vy = -(PxD * At * Py.transpose()).array();
}

}  // namespace viscotherm
