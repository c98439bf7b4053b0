#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cclab/curvature.hpp"

using namespace cclab;

namespace {

const double kVol = 16.0 * kPi * kPi * kPi;

AdmissibleTorsion seeded_torsion(const QuadratureGrid& g, const CalibrationClass& cls,
                                 double amplitude, std::uint64_t seed) {
  const Potentials pot = sample_potentials(g, PotentialSpec{1, 1, amplitude, seed});
  return build_admissible_torsion(g, cls, pot.eta, pot.mu);
}

} // namespace

TEST_CASE("Christoffel symbols of the product metric") {
  const Point p{0.7, 1.3, 2.0, 3.0};
  const Christoffel c = levi_civita(p);
  CHECK(c.gamma[kTheta][kPhi][kPhi] ==
        doctest::Approx(-std::sin(0.7) * std::cos(0.7)).epsilon(1e-14));
  CHECK(c.gamma[kPhi][kTheta][kPhi] == doctest::Approx(1.0 / std::tan(0.7)).epsilon(1e-14));
  CHECK(c.gamma[kPhi][kPhi][kTheta] == doctest::Approx(1.0 / std::tan(0.7)).epsilon(1e-14));
  int nonzero = 0;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (c.gamma[k][i][j] != 0.0) ++nonzero;
  CHECK(nonzero == 3);
}

TEST_CASE("harmonic torsion is parallel for the Levi-Civita connection") {
  QuadratureGrid g(GridSpec{10, 16, 6, 6});
  const FormField omega = harmonic_representative(g, CalibrationClass{1.0, -2.0});
  const TorsionField t = form_to_torsion(omega);
  double sup = 0.0;
  for (int dir = 0; dir < 4; ++dir)
    for (int l = 0; l < 4; ++l)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          sup = std::max(sup,
                         covariant_derivative_torsion_component(t, dir, l, j, k).abs().maxCoeff());
  CHECK(sup < 1e-11);

  // Linearity of the covariant derivative in the torsion argument.
  const AdmissibleTorsion adm = seeded_torsion(g, CalibrationClass{1.0, 0.0}, 0.1, 4);
  const auto all = covariant_derivative_torsion(adm.tensor);
  REQUIRE(all.size() == 256);
  TorsionField doubled = adm.tensor;
  doubled *= 2.0;
  const auto all2 = covariant_derivative_torsion(doubled);
  double lin = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i)
    lin = std::max(lin, (all2[i] - 2.0 * all[i]).abs().maxCoeff());
  CHECK(lin < 1e-12);
}

TEST_CASE("Levi-Civita curvature matches the closed form") {
  QuadratureGrid g(GridSpec{8, 12, 6, 6});
  const CurvatureField r = levi_civita_curvature(g);

  // Sphere factor has sectional curvature 1: R(e1, e2) e2 = e1.
  CHECK((r.frame_component(0, 1, 1, 0) - 1.0).abs().maxCoeff() < 1e-13);
  CHECK((r.frame_component(0, 1, 0, 1) + 1.0).abs().maxCoeff() < 1e-13);

  // Everything involving the flat factor vanishes.
  double flat_sup = 0.0;
  for (int A = 0; A < 4; ++A)
    for (int B = A + 1; B < 4; ++B)
      for (int C = 0; C < 4; ++C)
        for (int D = 0; D < 4; ++D)
          if (A >= 2 || B >= 2 || C >= 2 || D >= 2)
            flat_sup = std::max(flat_sup, r.frame_component(A, B, C, D).abs().maxCoeff());
  CHECK(flat_sup < 1e-13);

  // Dual-path agreement and Ricci = diag(1, 1, 0, 0).
  const ConnectionField lc = ConnectionField::levi_civita_connection(g);
  CHECK(curvature_from_eq1(lc).sup_diff(r) < 1e-12);
  CHECK(curvature_from_gamma(lc).sup_diff(r) < 1e-10);

  const RicciField ric = ricci(r);
  CHECK(ric.mixed_sup < 1e-13);
  CHECK(ric.antisym_sup < 1e-13);
  const Eigen::Matrix4d m = ric.at(g.index(2, 3, 1, 1));
  CHECK((m - Eigen::Vector4d(1, 1, 0, 0).asDiagonal().toDenseMatrix()).norm() < 1e-12);
}

TEST_CASE("purely harmonic torsion: off-diagonal block values and scaling") {
  QuadratureGrid g(GridSpec{8, 12, 6, 6});
  const CalibrationClass cls{1.0, 0.0};
  QuadratureGrid& gr = g;
  const Potentials zero = sample_potentials(gr, PotentialSpec{1, 1, 0.0, 0});
  const AdmissibleTorsion adm = build_admissible_torsion(gr, cls, zero.eta, zero.mu);
  const ConnectionField conn = ConnectionField::from_torsion(gr, adm, Convention::kStandard);
  const CurvatureField r = curvature_from_eq1(conn, true);

  // The torsion part pairs sphere and torus directions:
  // g(R(e1, f1) e1, f1) = 1 for class (1, 0).
  CHECK((r.split_th->frame_component(0, 2, 0, 2) - 1.0).abs().maxCoeff() < 1e-12);
  CHECK((r.split_th->frame_component(1, 2, 1, 2) - 1.0).abs().maxCoeff() < 1e-12);
  CHECK(r.split_th->frame_component(0, 3, 0, 3).abs().maxCoeff() < 1e-12);
  CHECK(r.split_tnh->sup_norm() < 1e-12);

  const BlockReport rep = block_report(*r.split_th);
  CHECK(rep.offdiag_sup == doctest::Approx(1.0).epsilon(1e-10));
  // Two unit frame entries, (e1,f1,e1,f1) and (e2,f1,e2,f1), share each block.
  CHECK(rep.l2[0][1] == doctest::Approx(std::sqrt(2.0 * kVol)).epsilon(1e-10));
  CHECK(rep.l2[1][0] == doctest::Approx(std::sqrt(2.0 * kVol)).epsilon(1e-10));

  // Scaling the class by lambda scales the harmonic curvature by lambda^2.
  const AdmissibleTorsion adm2 =
      build_admissible_torsion(gr, CalibrationClass{2.0, 0.0}, zero.eta, zero.mu);
  const ConnectionField conn2 = ConnectionField::from_torsion(gr, adm2, Convention::kStandard);
  const CurvatureField r2 = curvature_from_eq1(conn2, true);
  CurvatureField scaled = *r.split_th;
  scaled *= 4.0;
  CHECK(r2.split_th->sup_diff(scaled) < 1e-11);
}

TEST_CASE("dual-path curvature agreement for seeded admissible torsion") {
  QuadratureGrid g(GridSpec{12, 20, 8, 8});
  const AdmissibleTorsion adm = seeded_torsion(g, CalibrationClass{1.0, 1.0}, 0.1, 13);
  const ConnectionField conn = ConnectionField::from_torsion(g, adm, Convention::kStandard);

  const CurvatureField r1 = curvature_from_eq1(conn, true);
  const CurvatureField r2 = curvature_from_gamma(conn);
  CHECK(r1.sup_diff(r2) < 1e-8);

  // The three-way split reassembles the total.
  CurvatureField sum = *r1.split_lc;
  sum += *r1.split_th;
  sum += *r1.split_tnh;
  CHECK(r1.sup_diff(sum) < 1e-10);
  CHECK(r1.split_lc->sup_diff(levi_civita_curvature(g)) < 1e-12);

  // Antisymmetry in the bivector slot via the signed lookup.
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<Eigen::Index> pick(0, g.size() - 1);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = pick(rng);
    for (int l = 0; l < 4; ++l)
      for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i) {
          CHECK(r1.value(l, k, i, i, n) == 0.0);
          for (int j = 0; j < 4; ++j)
            CHECK(r1.value(l, k, i, j, n) == -r1.value(l, k, j, i, n));
        }
  }

  // The alternative quadratic-term convention visibly deviates.
  const ConnectionField lit = ConnectionField::from_torsion(g, adm, Convention::kPaperLiteral);
  const CurvatureField rl = curvature_from_eq1(lit);
  CHECK(rl.sup_diff(r1) > 1e-4);
  CHECK(rl.sup_diff(curvature_from_gamma(lit)) > 1e-4);
}

TEST_CASE("metric compatibility holds exactly for antisymmetric torsion") {
  QuadratureGrid g(GridSpec{8, 12, 6, 6});
  const ConnectionField lc = ConnectionField::levi_civita_connection(g);
  CHECK(compat_residual(lc) < 1e-12);

  const AdmissibleTorsion adm = seeded_torsion(g, CalibrationClass{1.0, 0.0}, 0.2, 6);
  const ConnectionField conn = ConnectionField::from_torsion(g, adm, Convention::kStandard);
  CHECK(compat_residual(conn) < 1e-10);

  // A symmetrized (non-antisymmetric) torsion fixture breaks compatibility.
  TorsionField bad(g);
  bad.comp(kX, kTheta, kX).setOnes();
  bad.comp(kX, kX, kTheta).setOnes();
  bad.refresh_nonzero();
  const ConnectionField badc = ConnectionField::from_raw_torsion(g, bad, Convention::kStandard);
  CHECK(compat_residual(badc) > 0.1);
}

TEST_CASE("Ricci contraction is linear in the curvature") {
  QuadratureGrid g(GridSpec{8, 12, 6, 6});
  const AdmissibleTorsion adm = seeded_torsion(g, CalibrationClass{1.0, 2.0}, 0.1, 3);
  const ConnectionField conn = ConnectionField::from_torsion(g, adm, Convention::kStandard);
  const CurvatureField r = curvature_from_eq1(conn);

  CurvatureField r2 = r;
  r2 *= 3.0;
  const RicciField a = ricci(r);
  const RicciField b = ricci(r2);
  double dev = 0.0;
  for (int i = 0; i < 16; ++i) dev = std::max(dev, (b.frame[i] - 3.0 * a.frame[i]).abs().maxCoeff());
  CHECK(dev < 1e-12);
  CHECK(b.mixed_sup == doctest::Approx(3.0 * a.mixed_sup).epsilon(1e-12));
}
