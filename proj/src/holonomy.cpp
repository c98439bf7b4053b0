#include "cclab/holonomy.hpp"

#include <cmath>

namespace cclab {

void LoopSpec::validate() const {
  if (waypoints.size() < 3) throw ConfigError("loop needs at least 3 waypoints (closed polyline)");
  if (steps_per_segment < 8) throw ConfigError("steps_per_segment must be >= 8");
  const Point& first = waypoints.front();
  const Point& last = waypoints.back();
  if (std::abs(first.theta - last.theta) > 1e-14 || std::abs(first.phi - last.phi) > 1e-14 ||
      std::abs(first.x - last.x) > 1e-14 || std::abs(first.y - last.y) > 1e-14)
    throw ConfigError("loop is not closed (first waypoint != last)");
  for (const Point& p : waypoints)
    if (!(p.theta > 0.0 && p.theta < kPi)) throw DomainError("loop waypoint touches a pole");
}

namespace {

double frame_value(const CurvatureField& r, double sin_theta, int A, int B, int C, int D,
                   Eigen::Index node) {
  static constexpr int coord_of[4] = {kTheta, kPhi, kX, kY};
  const double raw = r.value(coord_of[D], coord_of[C], coord_of[A], coord_of[B], node);
  const int inv_pow = (A == 1) + (B == 1) + (C == 1) - (D == 1);
  return raw * std::pow(sin_theta, -inv_pow);
}

} // namespace

std::vector<Eigen::Matrix4d> curvature_operators_at(const CurvatureField& r, Eigen::Index node) {
  const double st = std::sin(r.grid().point(node).theta);
  std::vector<Eigen::Matrix4d> ops;
  ops.reserve(6);
  for (int A = 0; A < 4; ++A) {
    for (int B = A + 1; B < 4; ++B) {
      Eigen::Matrix4d m;
      for (int C = 0; C < 4; ++C)
        for (int D = 0; D < 4; ++D) m(D, C) = frame_value(r, st, A, B, C, D, node);
      ops.push_back(m);
    }
  }
  return ops;
}

std::vector<Eigen::Matrix4d> curvature_operators_at(const CurvatureField& r, const Point& p) {
  const QuadratureGrid& g = r.grid();
  if (!(p.theta > 0.0 && p.theta < kPi)) throw DomainError("curvature operators at a pole");
  static constexpr int coord_of[4] = {kTheta, kPhi, kX, kY};
  const double st = std::sin(p.theta);
  std::vector<Eigen::Matrix4d> ops;
  ops.reserve(6);
  for (int A = 0; A < 4; ++A) {
    for (int B = A + 1; B < 4; ++B) {
      const int a = coord_of[A], b = coord_of[B];
      Eigen::Matrix4d m;
      for (int C = 0; C < 4; ++C) {
        for (int D = 0; D < 4; ++D) {
          const int c = coord_of[C], d = coord_of[D];
          const int w = (a == kPhi) + (b == kPhi) + (c == kPhi) - (d == kPhi);
          const int q = (a == kTheta) + (b == kTheta) + (c == kTheta) + (d == kTheta);
          const double raw =
              g.interpolate(r.comp(d, c, CurvatureField::pair_index(a, b)), p, w, q);
          const int inv_pow = (A == 1) + (B == 1) + (C == 1) - (D == 1);
          m(D, C) = raw * std::pow(st, -inv_pow);
        }
      }
      ops.push_back(m);
    }
  }
  return ops;
}

std::vector<Eigen::Matrix4d> lie_closure(const std::vector<Eigen::Matrix4d>& generators,
                                         double tol) {
  if (generators.empty()) throw ConfigError("lie_closure needs at least one generator");
  std::vector<Eigen::Matrix4d> basis;
  auto try_add = [&](Eigen::Matrix4d m) {
    for (const auto& b : basis) m -= (b.cwiseProduct(m)).sum() * b;
    const double n = m.norm();
    if (n > tol && basis.size() < 16) {
      basis.push_back(m / n);
      return true;
    }
    return false;
  };
  for (const auto& gen : generators) try_add(gen);
  bool grew = true;
  while (grew && basis.size() < 16) {
    grew = false;
    const std::size_t dim = basis.size();
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i + 1; j < dim; ++j) {
        const Eigen::Matrix4d c = basis[i] * basis[j] - basis[j] * basis[i];
        if (try_add(c)) grew = true;
      }
    }
  }
  return basis;
}

SplittingVerdict splitting_test(const std::vector<Eigen::Matrix4d>& basis, double tol) {
  const Eigen::Matrix4d p1 = Eigen::Vector4d(1, 1, 0, 0).asDiagonal();
  SplittingVerdict v;
  for (const auto& m : basis) {
    const double n = (m * p1 - p1 * m).norm();
    v.commutator_norm = std::max(v.commutator_norm, n);
  }
  v.splitting_violated = v.commutator_norm > tol;
  return v;
}

TransportResult parallel_transport(const ConnectionField& conn, const LoopSpec& loop) {
  loop.validate();
  const Point base = loop.waypoints.front();
  const double st0 = std::sin(base.theta);

  // Coordinate components of the transported frame, columns = vectors.
  Eigen::Matrix4d v = Eigen::Vector4d(1.0, 1.0 / st0, 1.0, 1.0).asDiagonal();

  auto rhs = [&](const Point& p, const Eigen::Vector4d& vel, const Eigen::Matrix4d& state) {
    const Christoffel c = conn.gamma_interpolated(p);
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero(); // a^k_j = -Gamma^k_{ij} vel^i
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) a(k, j) -= c.gamma[k][i][j] * vel[i];
    return Eigen::Matrix4d(a * state);
  };

  for (std::size_t seg = 0; seg + 1 < loop.waypoints.size(); ++seg) {
    const Point& p0 = loop.waypoints[seg];
    const Point& p1 = loop.waypoints[seg + 1];
    const Eigen::Vector4d vel(p1.theta - p0.theta, p1.phi - p0.phi, p1.x - p0.x, p1.y - p0.y);
    const int n = loop.steps_per_segment;
    const double h = 1.0 / n;
    auto at = [&](double s) {
      return Point{p0.theta + s * vel[0], p0.phi + s * vel[1], p0.x + s * vel[2],
                   p0.y + s * vel[3]};
    };
    for (int step = 0; step < n; ++step) {
      const double s = step * h;
      const Eigen::Matrix4d k1 = rhs(at(s), vel, v);
      const Eigen::Matrix4d k2 = rhs(at(s + 0.5 * h), vel, v + 0.5 * h * k1);
      const Eigen::Matrix4d k3 = rhs(at(s + 0.5 * h), vel, v + 0.5 * h * k2);
      const Eigen::Matrix4d k4 = rhs(at(s + h), vel, v + h * k3);
      v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }

  // Express the transported vectors in the base-point orthonormal frame:
  // M(B, A) = g(v_A, E_B).
  TransportResult out;
  const Eigen::Matrix4d to_frame = Eigen::Vector4d(1.0, st0, 1.0, 1.0).asDiagonal();
  out.matrix = to_frame * v;
  out.orthogonality_defect =
      (out.matrix.transpose() * out.matrix - Eigen::Matrix4d::Identity()).norm();
  return out;
}

HolonomyReport holonomy_report(const ConnectionField& conn, const CurvatureField& r,
                               const std::vector<LoopSpec>& loops, double tol) {
  const QuadratureGrid& g = conn.grid();
  const GridSpec& s = g.spec();
  HolonomyReport rep;

  // Deterministic 8-point pool, aligned with the grid.
  std::vector<Eigen::Index> nodes;
  for (int it : {s.n_theta / 4, (3 * s.n_theta) / 4})
    for (int ip : {0, s.n_phi / 2})
      for (int ix : {0, s.n_x / 2}) nodes.push_back(g.index(it, ip, ix, 0));
  rep.base_point = g.point(nodes.front());

  for (Eigen::Index node : nodes) {
    const auto ops = curvature_operators_at(r, node);
    rep.generators.insert(rep.generators.end(), ops.begin(), ops.end());
  }
  const auto basis = lie_closure(rep.generators, tol);
  rep.closure_dim = static_cast<int>(basis.size());

  // The raw generators carry the physical scale; the orthonormal closure
  // basis adds any bracket-generated directions.
  std::vector<Eigen::Matrix4d> pool = rep.generators;
  pool.insert(pool.end(), basis.begin(), basis.end());
  const SplittingVerdict verdict = splitting_test(pool, tol);
  rep.splitting_commutator_norm = verdict.commutator_norm;
  rep.verdict = verdict.splitting_violated ? "splitting-violated" : "reducible-splitting-preserved";

  rep.transports.reserve(loops.size());
  for (const auto& loop : loops) rep.transports.push_back(parallel_transport(conn, loop));
  return rep;
}

} // namespace cclab
