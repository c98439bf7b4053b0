#ifndef CCLAB_HOLONOMY_HPP
#define CCLAB_HOLONOMY_HPP

#include <string>
#include <vector>

#include "cclab/curvature.hpp"

namespace cclab {

/// Closed polyline loop in coordinates; first waypoint = last.
struct LoopSpec {
  std::vector<Point> waypoints;
  int steps_per_segment = 64;

  /// Throws ConfigError / DomainError on open loops, pole-touching
  /// waypoints, or too few steps.
  void validate() const;
};

/// Matrices of R(E_A, E_B) in the orthonormal frame at one grid node, for
/// the six index pairs A < B in order (01, 02, 03, 12, 13, 23).
std::vector<Eigen::Matrix4d> curvature_operators_at(const CurvatureField& r, Eigen::Index node);
/// Off-grid variant via spectral interpolation.
std::vector<Eigen::Matrix4d> curvature_operators_at(const CurvatureField& r, const Point& p);

/// Lie closure under commutators, orthonormalized in the Frobenius inner
/// product; components below tol are dropped. Dimension is monotone and
/// bounded by 16, so termination is guaranteed.
std::vector<Eigen::Matrix4d> lie_closure(const std::vector<Eigen::Matrix4d>& generators,
                                         double tol);

struct SplittingVerdict {
  double commutator_norm = 0.0;
  bool splitting_violated = false;
};

/// Max Frobenius norm of [A, P1] over the supplied matrices; violated iff
/// above tol.
SplittingVerdict splitting_test(const std::vector<Eigen::Matrix4d>& basis, double tol = 1e-6);

struct TransportResult {
  Eigen::Matrix4d matrix = Eigen::Matrix4d::Identity(); // base-frame components
  double orthogonality_defect = 0.0;                    // ||M^T M - I||_F
};

/// Parallel transport around the loop with classic RK4; Gamma evaluated by
/// spectral interpolation. Returns the transport matrix in the base-point
/// orthonormal frame.
TransportResult parallel_transport(const ConnectionField& conn, const LoopSpec& loop);

struct HolonomyReport {
  Point base_point;
  std::vector<Eigen::Matrix4d> generators;
  int closure_dim = 0;
  double splitting_commutator_norm = 0.0;
  std::string verdict; // "splitting-violated" | "reducible-splitting-preserved"
  std::vector<TransportResult> transports;
};

/// Pools curvature operators from a deterministic set of 8 grid points,
/// closes the Lie algebra, and runs the splitting test; also integrates the
/// supplied loops.
HolonomyReport holonomy_report(const ConnectionField& conn, const CurvatureField& r,
                               const std::vector<LoopSpec>& loops, double tol = 1e-6);

} // namespace cclab

#endif
