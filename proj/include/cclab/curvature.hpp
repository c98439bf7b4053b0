#ifndef CCLAB_CURVATURE_HPP
#define CCLAB_CURVATURE_HPP

#include <memory>
#include <optional>

#include "cclab/calibration.hpp"
#include "cclab/forms.hpp"

namespace cclab {

/// Quadratic-term convention for the curvature of nabla = nabla^LC + T.
/// kStandard is T(X, T(Y,Z)) - T(Y, T(X,Z)), the unique choice that agrees
/// with the Gamma-based coordinate oracle; kPaperLiteral is
/// T(T(X,Y),Z) - T(T(X,Z),Y), kept behind a flag so its deviation can be
/// reported.
enum class Convention { kStandard, kPaperLiteral };

const char* convention_name(Convention c);
Convention convention_from_name(const std::string& name);

/// Levi-Civita Christoffel symbols of the product metric at a point:
/// Gamma^theta_{phi phi} = -sin cos, Gamma^phi_{theta phi} = cot, rest zero.
struct Christoffel {
  double gamma[4][4][4] = {};
};
Christoffel levi_civita(const Point& p);

/// nabla = nabla^LC + T on the grid. Empty torsion means Levi-Civita.
class ConnectionField {
public:
  static ConnectionField levi_civita_connection(const QuadratureGrid& grid);
  static ConnectionField from_torsion(const QuadratureGrid& grid, const AdmissibleTorsion& t,
                                      Convention convention);
  /// Arbitrary torsion tensor without a harmonic split (test fixtures).
  static ConnectionField from_raw_torsion(const QuadratureGrid& grid, TorsionField t,
                                          Convention convention);

  const QuadratureGrid& grid() const { return *grid_; }
  Convention convention() const { return convention_; }
  bool has_torsion() const { return torsion_ != nullptr; }
  bool has_split() const { return torsion_harmonic_ != nullptr; }
  const TorsionField& torsion() const;
  const TorsionField& torsion_harmonic() const;

  /// Full Gamma^k_{ij} (Levi-Civita plus torsion) at one grid node.
  Christoffel gamma_at(Eigen::Index node) const;
  /// Spectral off-grid evaluation (used by parallel transport).
  Christoffel gamma_interpolated(const Point& p) const;

private:
  ConnectionField(const QuadratureGrid& grid, Convention convention)
      : grid_(&grid), convention_(convention) {}
  const QuadratureGrid* grid_;
  Convention convention_;
  std::shared_ptr<const TorsionField> torsion_;
  std::shared_ptr<const TorsionField> torsion_harmonic_;
};

/// R^l_{kij} on the grid, convention R(d_i, d_j) d_k = R^l_{kij} d_l, stored
/// for i < j (antisymmetric in (i, j)).
class CurvatureField {
public:
  explicit CurvatureField(const QuadratureGrid& grid);

  const QuadratureGrid& grid() const { return *grid_; }

  static int pair_index(int i, int j); // requires i < j
  Eigen::ArrayXd& comp(int l, int k, int pair);
  const Eigen::ArrayXd& comp(int l, int k, int pair) const;
  /// Signed lookup for any (i, j).
  double value(int l, int k, int i, int j, Eigen::Index node) const;

  CurvatureField& operator+=(const CurvatureField& other);
  CurvatureField& operator-=(const CurvatureField& other);
  CurvatureField& operator*=(double s);
  double sup_norm() const;
  double sup_diff(const CurvatureField& other) const;

  /// Frame components g(R(E_A, E_B) E_C, E_D) as a grid function; (A, B) is
  /// any ordered pair.
  Eigen::ArrayXd frame_component(int A, int B, int C, int D) const;

  /// Optional three-way split R = R_LC + R_Th + R_Tnh.
  std::shared_ptr<const CurvatureField> split_lc, split_th, split_tnh;

private:
  const QuadratureGrid* grid_;
  std::vector<Eigen::ArrayXd> comps_; // 6 pairs x 16 (l, k)
};

/// Covariant derivative of the torsion with respect to the Levi-Civita
/// connection, (nabla_i T)^l_{jk}, one component at a time.
Eigen::ArrayXd covariant_derivative_torsion_component(const TorsionField& t, int dir, int l,
                                                      int j, int k);

/// All 256 components, indexed [(dir * 4 + l) * 16 + j * 4 + k]. Intended for
/// small grids (tests); the curvature assembly streams components instead.
std::vector<Eigen::ArrayXd> covariant_derivative_torsion(const TorsionField& t);

/// Curvature via the closed-form product R^LC plus torsion first-order and
/// quadratic terms. with_splits also attaches R_LC, R_Th, R_Tnh (requires the
/// connection to carry the harmonic split).
CurvatureField curvature_from_eq1(const ConnectionField& conn, bool with_splits = false);

/// Independent coordinate-formula oracle on the full Gamma field.
CurvatureField curvature_from_gamma(const ConnectionField& conn);

/// Closed-form Levi-Civita curvature of the product metric.
CurvatureField levi_civita_curvature(const QuadratureGrid& grid);

struct BlockReport {
  // [row][col]: row is the target factor of Proj, col the source factor of
  // the operand; aggregated over all frame pairs (E_A, E_B), A < B.
  double l2[2][2] = {};
  double sup[2][2] = {};
  double offdiag_l2 = 0.0;
  double offdiag_sup = 0.0;
};
BlockReport block_report(const CurvatureField& r);

struct RicciField {
  const QuadratureGrid* grid;
  std::array<Eigen::ArrayXd, 16> frame; // [B * 4 + C] = Ric(E_B, E_C)
  double mixed_sup = 0.0;               // V1-V2 blocks
  double antisym_sup = 0.0;
  Eigen::Matrix4d at(Eigen::Index node) const;
};
RicciField ricci(const CurvatureField& r);

/// Sup norm of (nabla g)_{ijk} over the grid.
double compat_residual(const ConnectionField& conn);

} // namespace cclab

#endif
