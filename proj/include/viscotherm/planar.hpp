#pragma once

#include <Eigen/Core>

namespace viscotherm {

using Vec2 = Eigen::Vector2d;

/// Symmetric 2x2 tensor stored as its three independent entries.
struct SymTensor2 {
  double xx = 0.0, xy = 0.0, yy = 0.0;

  double trace() const { return xx + yy; }
  /// Frobenius inner product with itself, |A|^2 = xx^2 + 2 xy^2 + yy^2.
  double frob2() const { return xx * xx + 2.0 * xy * xy + yy * yy; }

  SymTensor2 operator*(double s) const { return {xx * s, xy * s, yy * s}; }
  SymTensor2 operator-(const SymTensor2& o) const { return {xx - o.xx, xy - o.xy, yy - o.yy}; }
};

}  // namespace viscotherm
