#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <array>

#include "viscotherm/planar.hpp"

namespace viscotherm {

struct Rectangle {
  double Lx = 1.0, Ly = 1.0;
};

/// Cosine modes cos(i pi x / Lx) cos(j pi y / Ly), 0 <= i < Mx, 0 <= j < My.
/// Homogeneous Neumann on the rectangle by construction; the constant mode is
/// included, so means are representable exactly.
struct ScalarBasisSpec {
  int Mx = 1, My = 1;
};

/// Divergence-free velocity modes from streamfunctions
/// phi_ij = sin(i pi x / Lx) sin(j pi y / Ly), 1 <= i <= Nx, 1 <= j <= Ny,
/// w_ij = (d_y phi_ij, -d_x phi_ij). Zero normal trace on the boundary.
struct VelocityBasisSpec {
  int Nx = 0, Ny = 0;
};

struct QuadratureSpec {
  int nx = 0, ny = 0;  // tensor Gauss-Legendre node counts per direction
};

/// Node counts that resolve quadratic scalar products and cubic velocity
/// products to ~1e-13 for these trigonometric bases.
QuadratureSpec default_quadrature(const ScalarBasisSpec& s, const VelocityBasisSpec& v);

using Grid = Eigen::ArrayXXd;  // node values, (qx, qy) indexed

/// Edges in boundary-integral order: y=0, x=Lx, y=Ly, x=0. The stored
/// tangential direction is +x on the y-edges and +y on the x-edges.
enum class Edge : int { Y0 = 0, X1 = 1, Y1 = 2, X0 = 3 };

/// Precomputed factor matrices, weights, norms, Gram factorization and edge
/// rules for one (domain, bases, quadrature) combination.
class SpectralWorkspace {
 public:
  SpectralWorkspace(const Rectangle& rect, const ScalarBasisSpec& sb,
                    const VelocityBasisSpec& vb, const QuadratureSpec& q);

  const Rectangle& rect() const { return rect_; }
  const ScalarBasisSpec& scalar_spec() const { return sspec_; }
  const VelocityBasisSpec& velocity_spec() const { return vspec_; }
  const QuadratureSpec& quad_spec() const { return qspec_; }
  int n_scalar_modes() const { return sspec_.Mx * sspec_.My; }
  int n_velocity_modes() const { return vspec_.Nx * vspec_.Ny; }

  const Eigen::VectorXd& nodes_x() const { return xs_; }
  const Eigen::VectorXd& nodes_y() const { return ys_; }
  const Grid& weights() const { return wgt_; }

  // --- scalar basis ---------------------------------------------------
  Grid synth_scalar(const Eigen::VectorXd& d) const;
  void synth_scalar_grad(const Eigen::VectorXd& d, Grid& gx, Grid& gy) const;
  /// Load vector Q[f u_ij].
  Eigen::VectorXd load_scalar(const Grid& f) const;
  /// Load vector Q[Fx d_x u_ij + Fy d_y u_ij].
  Eigen::VectorXd load_scalar_flux(const Grid& Fx, const Grid& Fy) const;
  /// Diagonal mass solve with the analytic mode norms.
  Eigen::VectorXd mass_solve_scalar(const Eigen::VectorXd& load) const;
  /// L2 projection of node values onto the scalar span.
  Eigen::VectorXd project_scalar(const Grid& f) const;
  /// Analytic squared L2 norm of scalar mode (flattened index).
  double scalar_mode_norm2(int flat) const { return snorm_(flat); }

  // --- velocity basis -------------------------------------------------
  void synth_velocity(const Eigen::VectorXd& c, Grid& vx, Grid& vy) const;
  void synth_velocity_grad(const Eigen::VectorXd& c, Grid& dxvx, Grid& dyvx,
                           Grid& dxvy, Grid& dyvy) const;
  /// Load vector Q[fx w_x + fy w_y] per mode.
  Eigen::VectorXd load_velocity_force(const Grid& fx, const Grid& fy) const;
  /// Load vector Q[S : grad w_ij] for a symmetric tensor field S.
  Eigen::VectorXd load_velocity_tensor(const Grid& Sxx, const Grid& Sxy,
                                       const Grid& Syy) const;
  const Eigen::MatrixXd& gram() const { return gram_; }
  Eigen::VectorXd gram_solve(const Eigen::VectorXd& load) const;
  /// L2 projection of a node-valued vector field onto the velocity span.
  Eigen::VectorXd project_velocity(const Grid& vx, const Grid& vy) const;

  // --- quadrature -----------------------------------------------------
  double integrate(const Grid& f) const;

  // --- boundary -------------------------------------------------------
  int edge_nodes(Edge e) const;
  const Eigen::VectorXd& edge_coords(Edge e) const;   // x on y-edges, y on x-edges
  const Eigen::VectorXd& edge_weights(Edge e) const;
  /// Signed tangential velocity trace at the edge nodes.
  Eigen::VectorXd edge_velocity(Edge e, const Eigen::VectorXd& c) const;
  /// Boundary load Q_bnd[g w_tau,ij] for signed tangential data g per edge.
  Eigen::VectorXd boundary_load(const std::array<Eigen::VectorXd, 4>& g) const;
  double boundary_integral(Edge e, const Eigen::VectorXd& f) const;

  // --- evaluation on arbitrary tensor grids (plot output) -------------
  Grid eval_scalar_at(const Eigen::VectorXd& d, const Eigen::VectorXd& px,
                      const Eigen::VectorXd& py) const;
  void eval_velocity_at(const Eigen::VectorXd& c, const Eigen::VectorXd& px,
                        const Eigen::VectorXd& py, Grid& vx, Grid& vy) const;

 private:
  Rectangle rect_;
  ScalarBasisSpec sspec_;
  VelocityBasisSpec vspec_;
  QuadratureSpec qspec_;

  Eigen::VectorXd xs_, ys_, wx_, wy_;
  Grid wgt_;

  // scalar factors: values and x/y-derivatives of the 1D cosine modes
  Eigen::MatrixXd Cx_, Cy_, CxD_, CyD_;
  Eigen::VectorXd snorm_;  // analytic squared norms, flattened

  // velocity factors: 1D sine modes and their first/second derivatives
  Eigen::MatrixXd Sx_, Sy_, SxD_, SyD_, SxDD_, SyDD_;

  Eigen::MatrixXd gram_;
  Eigen::LDLT<Eigen::MatrixXd> gram_ldlt_;

  std::array<Eigen::MatrixXd, 4> edge_trace_;  // (edge nodes) x (velocity modes)
};

}  // namespace viscotherm
