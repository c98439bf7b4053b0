#ifndef CCLAB_METRIC_HPP
#define CCLAB_METRIC_HPP

#include <Eigen/Dense>

#include "cclab/grid.hpp"

namespace cclab {

/// Product manifold constants. Fixed in v1 (unit sphere, 2pi x 2pi torus) but
/// carried explicitly so the conventions stay testable.
struct ManifoldSpec {
  double sphere_radius = 1.0;
  double torus_period_x = 2.0 * kPi;
  double torus_period_y = 2.0 * kPi;
};

/// Product metric in coordinate order (theta, phi, x, y).
struct MetricAt {
  Eigen::Matrix4d g;
  Eigen::Matrix4d g_inv;
  double det;
};

/// Evaluates g = diag(1, sin^2 theta, 1, 1). Throws DomainError at the poles.
MetricAt metric_at(const Point& p);

/// Orthonormal frame e1 = d_theta, e2 = (1/sin theta) d_phi, f1 = d_x,
/// f2 = d_y, stored as coordinate-component columns. e1, e2 span V1 = T S^2
/// and f1, f2 span V2 = T T^2.
struct Frame {
  Point point;
  Eigen::Matrix4d vectors; // column A = coordinate components of E_A
};

Frame orthonormal_frame(const Point& p);

/// Frame scale factors: E_A^i = frame_scale(A) on coordinate coord_of_frame(A).
/// In this diagonal frame the only non-unit factor is 1/sin(theta) on e2.
inline double frame_scale(int frame_index, double sin_theta) {
  return frame_index == 1 ? 1.0 / sin_theta : 1.0;
}

} // namespace cclab

#endif
