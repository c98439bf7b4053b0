#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "cclab/grid.hpp"
#include "cclab/metric.hpp"
#include "cclab/summation.hpp"

using namespace cclab;

namespace {
Eigen::ArrayXd sample(const QuadratureGrid& g, const std::function<double(const Point&)>& f) {
  Eigen::ArrayXd out(g.size());
  for (Eigen::Index n = 0; n < g.size(); ++n) out[n] = f(g.point(n));
  return out;
}
} // namespace

TEST_CASE("grid spec validation") {
  CHECK_THROWS_AS(QuadratureGrid(GridSpec{3, 8, 8, 8}), ConfigError);
  CHECK_THROWS_AS(QuadratureGrid(GridSpec{8, 5, 8, 8}), ConfigError);
  CHECK_THROWS_AS(QuadratureGrid(GridSpec{8, 8, 7, 8}), ConfigError);
  CHECK_THROWS_AS(QuadratureGrid(GridSpec{8, 8, 8, 2}), ConfigError);
  CHECK_NOTHROW(QuadratureGrid(GridSpec{4, 4, 4, 4}));
}

TEST_CASE("node count and total weight") {
  QuadratureGrid g(GridSpec{24, 48, 8, 8});
  CHECK(g.size() == 73728);
  const double total = g.weights().sum();
  const double vol = 16.0 * kPi * kPi * kPi;
  CHECK(std::abs(total - vol) / vol < 1e-12);
  // No node at a pole.
  CHECK(g.theta_nodes().minCoeff() > 0.0);
  CHECK(g.theta_nodes().maxCoeff() < kPi);
}

TEST_CASE("quadrature of closed-form integrands") {
  QuadratureGrid g(GridSpec{24, 48, 8, 8});
  const double vol = 16.0 * kPi * kPi * kPi;
  CHECK(g.integrate(Eigen::ArrayXd::Ones(g.size())) == doctest::Approx(vol).epsilon(1e-13));
  CHECK(std::abs(g.integrate(g.cos_theta())) < 1e-12);
  // cos^2(theta): int cos^2 sin dtheta = 2/3 -> (4 pi / 3) * 4 pi^2.
  const double expect_cos2 = (4.0 * kPi / 3.0) * 4.0 * kPi * kPi;
  CHECK(g.integrate(g.cos_theta() * g.cos_theta()) ==
        doctest::Approx(expect_cos2).epsilon(1e-12));
  // sin^2(theta) cos^2(x): (8 pi / 3) * 2 pi^2 by factorized exact integrals.
  const auto f = sample(g, [](const Point& p) {
    return std::sin(p.theta) * std::sin(p.theta) * std::cos(p.x) * std::cos(p.x);
  });
  const double expect = (8.0 * kPi / 3.0) * 2.0 * kPi * kPi;
  CHECK(g.integrate(f) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("theta differentiation matrix on cos(theta)") {
  QuadratureGrid g(GridSpec{16, 8, 4, 4});
  Eigen::VectorXd ct(16), expect(16);
  for (int i = 0; i < 16; ++i) {
    ct[i] = std::cos(g.theta_nodes()[i]);
    expect[i] = -std::sin(g.theta_nodes()[i]);
  }
  const Eigen::VectorXd d = g.d_theta_matrix() * ct;
  CHECK((d - expect).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("spectral derivatives of smooth fields") {
  QuadratureGrid g(GridSpec{16, 16, 8, 8});
  // Scalar smooth on S^2 x T^2: sin(theta) cos(phi) cos(x) + cos(theta) sin(2 y).
  const auto f = sample(g, [](const Point& p) {
    return std::sin(p.theta) * std::cos(p.phi) * std::cos(p.x) +
           std::cos(p.theta) * std::sin(2.0 * p.y);
  });
  const auto dft = sample(g, [](const Point& p) {
    return std::cos(p.theta) * std::cos(p.phi) * std::cos(p.x) -
           std::sin(p.theta) * std::sin(2.0 * p.y);
  });
  const auto dfp = sample(g, [](const Point& p) {
    return -std::sin(p.theta) * std::sin(p.phi) * std::cos(p.x);
  });
  const auto dfx = sample(g, [](const Point& p) {
    return -std::sin(p.theta) * std::cos(p.phi) * std::sin(p.x);
  });
  const auto dfy = sample(g, [](const Point& p) {
    return 2.0 * std::cos(p.theta) * std::cos(2.0 * p.y);
  });
  CHECK((g.deriv_theta(f, 0, 0) - dft).abs().maxCoeff() < 1e-11);
  CHECK((g.deriv_phi(f) - dfp).abs().maxCoeff() < 1e-11);
  CHECK((g.deriv_x(f) - dfx).abs().maxCoeff() < 1e-11);
  CHECK((g.deriv_y(f) - dfy).abs().maxCoeff() < 1e-11);
}

TEST_CASE("weighted theta derivative handles sin^{-1} components") {
  QuadratureGrid g(GridSpec{12, 8, 4, 4});
  // f = -1/sin(theta), the phi-upper torsion component profile.
  const auto f = sample(g, [](const Point& p) { return -1.0 / std::sin(p.theta); });
  const auto expect = sample(g, [](const Point& p) {
    return std::cos(p.theta) / (std::sin(p.theta) * std::sin(p.theta));
  });
  CHECK((g.deriv_theta(f, -1, 1) - expect).abs().maxCoeff() < 1e-11);
  // And sin(theta) itself with weight +1 (harmonic 3-form profile).
  const auto f2 = sample(g, [](const Point& p) { return std::sin(p.theta); });
  const auto expect2 = sample(g, [](const Point& p) { return std::cos(p.theta); });
  CHECK((g.deriv_theta(f2, 1, 1) - expect2).abs().maxCoeff() < 1e-12);
}

TEST_CASE("interpolation reproduces band-limited fields off-grid") {
  QuadratureGrid g(GridSpec{12, 12, 8, 8});
  const auto f = sample(g, [](const Point& p) {
    return std::sin(p.theta) * std::sin(p.phi) * std::cos(p.y) + std::cos(p.theta);
  });
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    Point p{0.2 + 2.7 * u(rng), 2.0 * kPi * u(rng), 2.0 * kPi * u(rng), 2.0 * kPi * u(rng)};
    const double expect = std::sin(p.theta) * std::sin(p.phi) * std::cos(p.y) + std::cos(p.theta);
    CHECK(g.interpolate(f, p, 0, 0) == doctest::Approx(expect).epsilon(1e-10));
  }
  // Grid nodes reproduce exactly.
  const Point pn = g.point(g.index(3, 5, 2, 7));
  CHECK(g.interpolate(f, pn, 0, 0) == doctest::Approx(f[g.index(3, 5, 2, 7)]).epsilon(1e-13));
}

TEST_CASE("pairwise sum is deterministic and accurate") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(100001);
  for (auto& x : v) x = u(rng);
  const double s1 = pairwise_sum(v);
  const double s2 = pairwise_sum(v);
  CHECK(s1 == s2);
  long double ref = 0.0L;
  for (double x : v) ref += static_cast<long double>(x);
  CHECK(std::abs(s1 - static_cast<double>(ref)) < 1e-10);
}

TEST_CASE("metric and frame") {
  CHECK_THROWS_AS(metric_at(Point{0.0, 0.0, 0.0, 0.0}), DomainError);
  const auto m = metric_at(Point{kPi / 2.0, 0.3, 0.1, 0.2});
  CHECK((m.g - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  const auto m6 = metric_at(Point{kPi / 6.0, 0.0, 0.0, 0.0});
  CHECK(m6.g(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(m6.det == doctest::Approx(0.25).epsilon(1e-14));

  const auto fr = orthonormal_frame(Point{kPi / 6.0, 0.0, 0.0, 0.0});
  CHECK(fr.vectors(1, 1) == doctest::Approx(2.0).epsilon(1e-14));
  // Gram matrix identity at 1000 random points.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    Point p{1e-3 + (kPi - 2e-3) * u(rng), 2.0 * kPi * u(rng), 2.0 * kPi * u(rng), 2.0 * kPi * u(rng)};
    const auto mm = metric_at(p);
    const auto ff = orthonormal_frame(p);
    const Eigen::Matrix4d gram = ff.vectors.transpose() * mm.g * ff.vectors;
    worst = std::max(worst, (gram - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-13);
}
