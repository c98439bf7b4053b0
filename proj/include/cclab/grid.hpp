#ifndef CCLAB_GRID_HPP
#define CCLAB_GRID_HPP

#include <Eigen/Dense>
#include <array>
#include <cstdint>

#include "cclab/errors.hpp"

namespace cclab {

inline constexpr double kPi = 3.14159265358979323846;

/// Coordinate order is (theta, phi, x, y) throughout; directions are indexed
/// 0..3 in that order.
enum Coord : int { kTheta = 0, kPhi = 1, kX = 2, kY = 3 };

struct Point {
  double theta = 0.0;
  double phi = 0.0;
  double x = 0.0;
  double y = 0.0;

  double coord(int dir) const {
    switch (dir) {
      case kTheta: return theta;
      case kPhi: return phi;
      case kX: return x;
      default: return y;
    }
  }
};

struct GridSpec {
  int n_theta = 24;
  int n_phi = 48;
  int n_x = 8;
  int n_y = 8;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  bool operator==(const GridSpec&) const = default;
};

/// Tensor-product quadrature / collocation grid on S^2 x T^2.
///
/// theta is discretized by Gauss-Legendre nodes in t = cos(theta), so the
/// sin(theta) measure is absorbed into the weights and the poles are never
/// sampled. phi, x, y are uniform periodic grids. Spectral derivatives in the
/// periodic directions use the standard Fourier differentiation matrix; in
/// theta they use a barycentric differentiation matrix in t combined with a
/// phi-mode parity split (see deriv_theta).
class QuadratureGrid {
public:
  explicit QuadratureGrid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  Eigen::Index size() const { return n_; }

  Eigen::Index index(int it, int ip, int ix, int iy) const {
    return ((static_cast<Eigen::Index>(it) * spec_.n_phi + ip) * spec_.n_x + ix) * spec_.n_y + iy;
  }
  Point point(Eigen::Index node) const;
  Point point(int it, int ip, int ix, int iy) const;

  const Eigen::VectorXd& theta_nodes() const { return theta_nodes_; }
  const Eigen::VectorXd& t_nodes() const { return t_nodes_; }
  const Eigen::VectorXd& theta_weights() const { return t_weights_; }
  const Eigen::VectorXd& phi_nodes() const { return phi_nodes_; }
  const Eigen::VectorXd& x_nodes() const { return x_nodes_; }
  const Eigen::VectorXd& y_nodes() const { return y_nodes_; }

  /// Per-node measure weights; they already contain the sin(theta) volume
  /// factor, so integrate(1) is the total volume 16 pi^3.
  const Eigen::ArrayXd& weights() const { return weights_; }

  /// Node-length helper arrays.
  const Eigen::ArrayXd& sin_theta() const { return sin_theta_; }
  const Eigen::ArrayXd& cos_theta() const { return cos_theta_; }

  /// Dense differentiation matrix in theta for phi-independent smooth
  /// functions of theta (the s = 0 operator).
  const Eigen::MatrixXd& d_theta_matrix() const { return theta_ops_[1]; }

  /// Spectral d/dtheta of a grid-sampled coordinate component.
  ///
  /// phi_weight is the component's net count of lower-minus-upper phi indices
  /// (0 for scalars, 1 for a form component containing dphi, -1 for a tensor
  /// component with an upper phi index); theta_count is the component's total
  /// number of theta indices. Together they fix, per phi Fourier parity m,
  /// the component's radial basis: profiles with (m + theta_count) even are
  /// polynomial in t = cos(theta), odd ones carry a single sin(theta)^{+-1}
  /// factor (the sign of phi_weight picks the exponent). That classification
  /// follows from smoothness under the chart symmetry
  /// (theta, phi) -> (-theta, phi + pi) and is what makes the derivative
  /// exact on band-limited fields smooth over the poles.
  Eigen::ArrayXd deriv_theta(const Eigen::ArrayXd& f, int phi_weight, int theta_count) const;
  Eigen::ArrayXd deriv_phi(const Eigen::ArrayXd& f) const;
  Eigen::ArrayXd deriv_x(const Eigen::ArrayXd& f) const;
  Eigen::ArrayXd deriv_y(const Eigen::ArrayXd& f) const;
  Eigen::ArrayXd deriv(int dir, const Eigen::ArrayXd& f, int phi_weight, int theta_count) const;

  /// Deterministic quadrature sum (fixed pairwise tree).
  double integrate(const Eigen::ArrayXd& f) const;

  /// Spectral off-grid evaluation; same bases and weight conventions as
  /// differentiation. Requires theta(p) strictly inside (0, pi).
  double interpolate(const Eigen::ArrayXd& f, const Point& p, int phi_weight,
                     int theta_count) const;

  void check_same(const QuadratureGrid& other) const;

private:
  void build_theta_ops();
  Eigen::VectorXd trig_kernel(const Eigen::VectorXd& nodes, double value) const;

  GridSpec spec_;
  Eigen::Index n_ = 0;
  Eigen::VectorXd t_nodes_;      // Gauss-Legendre nodes, descending in theta order
  Eigen::VectorXd t_weights_;
  Eigen::VectorXd theta_nodes_;  // acos(t), increasing
  Eigen::VectorXd phi_nodes_, x_nodes_, y_nodes_;
  Eigen::ArrayXd weights_;
  Eigen::ArrayXd sin_theta_, cos_theta_;
  Eigen::VectorXd bary_weights_; // barycentric weights at t nodes
  std::array<Eigen::MatrixXd, 3> theta_ops_; // s = -1, 0, +1
  Eigen::MatrixXd d_phi_, d_x_, d_y_;
  std::vector<Eigen::Index> phi_shift_; // column permutation for phi -> phi + pi
};

/// Gauss-Legendre nodes/weights on [-1, 1], ascending nodes.
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Fourier differentiation matrix for an even-size uniform periodic grid.
Eigen::MatrixXd fourier_diff_matrix(int n, double period);

} // namespace cclab

#endif
