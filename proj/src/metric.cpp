#include "cclab/metric.hpp"

#include <cmath>

namespace cclab {

MetricAt metric_at(const Point& p) {
  if (!(p.theta > 0.0 && p.theta < kPi))
    throw DomainError("metric evaluated at a pole of the (theta, phi) chart");
  const double s2 = std::sin(p.theta) * std::sin(p.theta);
  MetricAt m;
  m.g = Eigen::Vector4d(1.0, s2, 1.0, 1.0).asDiagonal();
  m.g_inv = Eigen::Vector4d(1.0, 1.0 / s2, 1.0, 1.0).asDiagonal();
  m.det = s2;
  return m;
}

Frame orthonormal_frame(const Point& p) {
  if (!(p.theta > 0.0 && p.theta < kPi))
    throw DomainError("frame evaluated at a pole of the (theta, phi) chart");
  Frame f;
  f.point = p;
  f.vectors = Eigen::Vector4d(1.0, 1.0 / std::sin(p.theta), 1.0, 1.0).asDiagonal();
  return f;
}

} // namespace cclab
