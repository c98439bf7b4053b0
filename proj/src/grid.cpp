#include "cclab/grid.hpp"

#include <cmath>
#include <string>

#include "cclab/summation.hpp"

namespace cclab {

void GridSpec::validate() const {
  auto check_periodic = [](int n, const char* name) {
    if (n < 4) throw ConfigError(std::string(name) + " must be >= 4");
    if (n % 2 != 0) throw ConfigError(std::string(name) + " must be even");
  };
  if (n_theta < 4) throw ConfigError("n_theta must be >= 4");
  check_periodic(n_phi, "n_phi");
  check_periodic(n_x, "n_x");
  check_periodic(n_y, "n_y");
}

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi-type initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // One polishing step keeps nodes at machine accuracy.
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      x -= p1 / pp;
    }
    nodes[n - 1 - i] = x;
    nodes[i] = -x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

Eigen::MatrixXd fourier_diff_matrix(int n, double period) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  const double h = period / n;
  const double scale = 2.0 * kPi / period;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int k = i - j;
      const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = scale * 0.5 * sgn / std::tan(0.5 * k * h * scale);
    }
  }
  return d;
}

QuadratureGrid::QuadratureGrid(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  n_ = static_cast<Eigen::Index>(spec_.n_theta) * spec_.n_phi * spec_.n_x * spec_.n_y;

  Eigen::VectorXd t_asc, w_asc;
  gauss_legendre(spec_.n_theta, t_asc, w_asc);
  // theta ascending means t descending.
  t_nodes_ = t_asc.reverse();
  t_weights_ = w_asc.reverse();
  theta_nodes_.resize(spec_.n_theta);
  for (int i = 0; i < spec_.n_theta; ++i) theta_nodes_[i] = std::acos(t_nodes_[i]);

  auto uniform = [](int n, double period) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = period * i / n;
    return v;
  };
  phi_nodes_ = uniform(spec_.n_phi, 2.0 * kPi);
  x_nodes_ = uniform(spec_.n_x, 2.0 * kPi);
  y_nodes_ = uniform(spec_.n_y, 2.0 * kPi);

  weights_.resize(n_);
  sin_theta_.resize(n_);
  cos_theta_.resize(n_);
  const double h3 = (2.0 * kPi / spec_.n_phi) * (2.0 * kPi / spec_.n_x) * (2.0 * kPi / spec_.n_y);
  for (int it = 0; it < spec_.n_theta; ++it) {
    const double st = std::sin(theta_nodes_[it]);
    const double ct = t_nodes_[it];
    const double w = t_weights_[it] * h3;
    const Eigen::Index base = index(it, 0, 0, 0);
    const Eigen::Index line = static_cast<Eigen::Index>(spec_.n_phi) * spec_.n_x * spec_.n_y;
    weights_.segment(base, line).setConstant(w);
    sin_theta_.segment(base, line).setConstant(st);
    cos_theta_.segment(base, line).setConstant(ct);
  }

  // Barycentric weights for Gauss-Legendre nodes (Wang-Xiang); the common
  // scale cancels in interpolation and differentiation.
  bary_weights_.resize(spec_.n_theta);
  for (int i = 0; i < spec_.n_theta; ++i) {
    const double sgn = (i % 2 == 0) ? 1.0 : -1.0;
    bary_weights_[i] = sgn * std::sqrt((1.0 - t_nodes_[i] * t_nodes_[i]) * t_weights_[i]);
  }

  build_theta_ops();

  d_phi_ = fourier_diff_matrix(spec_.n_phi, 2.0 * kPi);
  d_x_ = fourier_diff_matrix(spec_.n_x, 2.0 * kPi);
  d_y_ = fourier_diff_matrix(spec_.n_y, 2.0 * kPi);

  phi_shift_.resize(static_cast<std::size_t>(spec_.n_phi));
  for (int ip = 0; ip < spec_.n_phi; ++ip)
    phi_shift_[static_cast<std::size_t>(ip)] = (ip + spec_.n_phi / 2) % spec_.n_phi;
}

void QuadratureGrid::build_theta_ops() {
  const int n = spec_.n_theta;
  Eigen::MatrixXd d_t = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      d_t(i, j) = (bary_weights_[j] / bary_weights_[i]) / (t_nodes_[i] - t_nodes_[j]);
      row += d_t(i, j);
    }
    d_t(i, i) = -row;
  }
  // Operator for radial profiles sin(theta)^s * p(t):
  //   d/dtheta [sin^s p] = s cot(theta) f - sin^{s+1}(theta) D_t [sin^{-s} f]
  for (int si = 0; si < 3; ++si) {
    const int s = si - 1;
    Eigen::VectorXd st(n), left(n), right(n), cot(n);
    for (int i = 0; i < n; ++i) {
      const double sth = std::sin(theta_nodes_[i]);
      left[i] = std::pow(sth, s + 1);
      right[i] = std::pow(sth, -s);
      cot[i] = s * t_nodes_[i] / sth;
    }
    theta_ops_[static_cast<std::size_t>(si)] =
        Eigen::MatrixXd(cot.asDiagonal()) - left.asDiagonal() * d_t * right.asDiagonal();
  }
}

Point QuadratureGrid::point(int it, int ip, int ix, int iy) const {
  return Point{theta_nodes_[it], phi_nodes_[ip], x_nodes_[ix], y_nodes_[iy]};
}

Point QuadratureGrid::point(Eigen::Index node) const {
  const int ny = spec_.n_y, nx = spec_.n_x, np = spec_.n_phi;
  const int iy = static_cast<int>(node % ny);
  node /= ny;
  const int ix = static_cast<int>(node % nx);
  node /= nx;
  const int ip = static_cast<int>(node % np);
  const int it = static_cast<int>(node / np);
  return point(it, ip, ix, iy);
}

void QuadratureGrid::check_same(const QuadratureGrid& other) const {
  if (!(spec_ == other.spec_)) throw ShapeError("fields live on different grids");
}

namespace {
int parity_s(int parity, int phi_weight) {
  if (parity == 0) return 0;
  return phi_weight < 0 ? -1 : 1;
}
} // namespace

Eigen::ArrayXd QuadratureGrid::deriv_theta(const Eigen::ArrayXd& f, int phi_weight,
                                           int theta_count) const {
  if (f.size() != n_) throw ShapeError("field size does not match grid");
  const int nt = spec_.n_theta;
  const Eigen::Index rest = n_ / nt;
  const Eigen::Index per_phi = static_cast<Eigen::Index>(spec_.n_x) * spec_.n_y;

  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> m(f.data(), nt, rest);

  // Split into even / odd phi-Fourier parity via the half-period shift.
  RowMat shifted(nt, rest);
  for (int ip = 0; ip < spec_.n_phi; ++ip) {
    const Eigen::Index src = phi_shift_[static_cast<std::size_t>(ip)] * per_phi;
    shifted.middleCols(ip * per_phi, per_phi) = m.middleCols(src, per_phi);
  }
  const RowMat even = 0.5 * (m + shifted);
  const RowMat odd = 0.5 * (m - shifted);

  // Radial parity of the even / odd phi-mode parts is (m + theta_count) % 2.
  const int tq = ((theta_count % 2) + 2) % 2;
  const int s_even = parity_s(tq, phi_weight);
  const int s_odd = parity_s(1 - tq, phi_weight);

  Eigen::ArrayXd out(n_);
  Eigen::Map<RowMat> om(out.data(), nt, rest);
  om = theta_ops_[static_cast<std::size_t>(s_even + 1)] * even +
       theta_ops_[static_cast<std::size_t>(s_odd + 1)] * odd;
  return out;
}

Eigen::ArrayXd QuadratureGrid::deriv_phi(const Eigen::ArrayXd& f) const {
  if (f.size() != n_) throw ShapeError("field size does not match grid");
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Index per_phi = static_cast<Eigen::Index>(spec_.n_x) * spec_.n_y;
  Eigen::ArrayXd out(n_);
  for (int it = 0; it < spec_.n_theta; ++it) {
    const Eigen::Index base = index(it, 0, 0, 0);
    Eigen::Map<const RowMat> m(f.data() + base, spec_.n_phi, per_phi);
    Eigen::Map<RowMat> o(out.data() + base, spec_.n_phi, per_phi);
    o = d_phi_ * m;
  }
  return out;
}

Eigen::ArrayXd QuadratureGrid::deriv_x(const Eigen::ArrayXd& f) const {
  if (f.size() != n_) throw ShapeError("field size does not match grid");
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::ArrayXd out(n_);
  const Eigen::Index planes = static_cast<Eigen::Index>(spec_.n_theta) * spec_.n_phi;
  const Eigen::Index plane = static_cast<Eigen::Index>(spec_.n_x) * spec_.n_y;
  for (Eigen::Index b = 0; b < planes; ++b) {
    Eigen::Map<const RowMat> m(f.data() + b * plane, spec_.n_x, spec_.n_y);
    Eigen::Map<RowMat> o(out.data() + b * plane, spec_.n_x, spec_.n_y);
    o = d_x_ * m;
  }
  return out;
}

Eigen::ArrayXd QuadratureGrid::deriv_y(const Eigen::ArrayXd& f) const {
  if (f.size() != n_) throw ShapeError("field size does not match grid");
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::ArrayXd out(n_);
  const Eigen::Index rows = n_ / spec_.n_y;
  Eigen::Map<const RowMat> m(f.data(), rows, spec_.n_y);
  Eigen::Map<RowMat> o(out.data(), rows, spec_.n_y);
  o = m * d_y_.transpose();
  return out;
}

Eigen::ArrayXd QuadratureGrid::deriv(int dir, const Eigen::ArrayXd& f, int phi_weight,
                                     int theta_count) const {
  switch (dir) {
    case kTheta: return deriv_theta(f, phi_weight, theta_count);
    case kPhi: return deriv_phi(f);
    case kX: return deriv_x(f);
    default: return deriv_y(f);
  }
}

double QuadratureGrid::integrate(const Eigen::ArrayXd& f) const {
  if (f.size() != n_) throw ShapeError("field size does not match grid");
  const Eigen::ArrayXd prod = f * weights_;
  return pairwise_sum(std::span<const double>(prod.data(), static_cast<std::size_t>(prod.size())));
}

Eigen::VectorXd QuadratureGrid::trig_kernel(const Eigen::VectorXd& nodes, double value) const {
  const int n = static_cast<int>(nodes.size());
  Eigen::VectorXd k(n);
  for (int j = 0; j < n; ++j) {
    const double d = std::remainder(value - nodes[j], 2.0 * kPi);
    if (std::abs(d) < 1e-13) {
      k[j] = 1.0;
    } else {
      k[j] = std::sin(0.5 * n * d) / (n * std::tan(0.5 * d));
    }
  }
  return k;
}

double QuadratureGrid::interpolate(const Eigen::ArrayXd& f, const Point& p, int phi_weight,
                                   int theta_count) const {
  if (f.size() != n_) throw ShapeError("field size does not match grid");
  if (!(p.theta > 0.0 && p.theta < kPi))
    throw DomainError("interpolation point touches a pole");

  const int nt = spec_.n_theta, np = spec_.n_phi, nx = spec_.n_x, ny = spec_.n_y;
  const Eigen::VectorXd ky = trig_kernel(y_nodes_, p.y);
  const Eigen::VectorXd kx = trig_kernel(x_nodes_, p.x);
  const Eigen::VectorXd kp = trig_kernel(phi_nodes_, p.phi);
  const Eigen::VectorXd kp2 = trig_kernel(phi_nodes_, p.phi + kPi);

  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::VectorXd at_phi(nt), at_phi_pi(nt);
  Eigen::VectorXd plane(np);
  for (int it = 0; it < nt; ++it) {
    for (int ip = 0; ip < np; ++ip) {
      Eigen::Map<const RowMat> m(f.data() + index(it, ip, 0, 0), nx, ny);
      plane[ip] = kx.dot(m * ky);
    }
    at_phi[it] = kp.dot(plane);
    at_phi_pi[it] = kp2.dot(plane);
  }
  const Eigen::VectorXd even = 0.5 * (at_phi + at_phi_pi);
  const Eigen::VectorXd odd = 0.5 * (at_phi - at_phi_pi);

  const double tstar = std::cos(p.theta);
  const double sstar = std::sin(p.theta);
  const int tq = ((theta_count % 2) + 2) % 2;

  auto radial = [&](const Eigen::VectorXd& part, int parity) {
    const int s = parity_s(parity, phi_weight);
    Eigen::VectorXd q(nt);
    for (int i = 0; i < nt; ++i)
      q[i] = part[i] * std::pow(std::sin(theta_nodes_[i]), -s);
    // Barycentric evaluation at t*.
    for (int i = 0; i < nt; ++i) {
      if (std::abs(tstar - t_nodes_[i]) < 1e-14) return std::pow(sstar, s) * q[i];
    }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < nt; ++i) {
      const double c = bary_weights_[i] / (tstar - t_nodes_[i]);
      num += c * q[i];
      den += c;
    }
    return std::pow(sstar, s) * num / den;
  };

  return radial(even, tq) + radial(odd, 1 - tq);
}

} // namespace cclab
