#ifndef CCLAB_FORMS_HPP
#define CCLAB_FORMS_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "cclab/grid.hpp"
#include "cclab/metric.hpp"

namespace cclab {

/// Number of components of a k-form on a 4-manifold.
int form_component_count(int degree);

/// Strictly increasing index tuples in lexicographic order; entries beyond
/// the degree are -1. Degree-3 order is (theta phi x), (theta phi y),
/// (theta x y), (phi x y), which is the order used by all golden files.
const std::vector<std::array<int, 4>>& form_index_tuples(int degree);

/// Position of a sorted index tuple within the component list.
int form_component_index(int degree, const std::array<int, 4>& tuple);

/// A k-form sampled on the grid, components in the coordinate basis.
class FormField {
public:
  FormField(const QuadratureGrid& grid, int degree);

  int degree() const { return degree_; }
  const QuadratureGrid& grid() const { return *grid_; }
  int component_count() const { return static_cast<int>(comps_.size()); }

  Eigen::ArrayXd& comp(int i) { return comps_[static_cast<std::size_t>(i)]; }
  const Eigen::ArrayXd& comp(int i) const { return comps_[static_cast<std::size_t>(i)]; }

  /// Count of phi indices in component i (0 or 1); the phi_weight used for
  /// spectral theta-derivatives.
  int phi_weight(int i) const;
  /// Count of theta indices in component i (0 or 1).
  int theta_weight(int i) const;

  FormField& operator+=(const FormField& other);
  FormField& operator-=(const FormField& other);
  FormField& operator*=(double s);
  friend FormField operator+(FormField a, const FormField& b) { return a += b; }
  friend FormField operator-(FormField a, const FormField& b) { return a -= b; }
  friend FormField operator*(double s, FormField a) { return a *= s; }

  double sup_norm() const;

private:
  const QuadratureGrid* grid_;
  int degree_;
  std::vector<Eigen::ArrayXd> comps_;
};

/// Vector field / 1-form pair related by the musical isomorphisms.
struct VectorField {
  const QuadratureGrid* grid;
  std::array<Eigen::ArrayXd, 4> comps; // coordinate basis
};

/// Totally antisymmetric (1,2) torsion tensor T^k_{ij} on the grid.
class TorsionField {
public:
  explicit TorsionField(const QuadratureGrid& grid);

  const QuadratureGrid& grid() const { return *grid_; }

  Eigen::ArrayXd& comp(int k, int i, int j) { return comps_[slot(k, i, j)]; }
  const Eigen::ArrayXd& comp(int k, int i, int j) const { return comps_[slot(k, i, j)]; }
  bool is_nonzero(int k, int i, int j) const { return nonzero_[slot(k, i, j)]; }
  void refresh_nonzero();

  /// Net lower-minus-upper phi count of T^k_{ij}; drives theta-derivative and
  /// interpolation bases.
  static int phi_weight(int k, int i, int j) {
    return (i == kPhi ? 1 : 0) + (j == kPhi ? 1 : 0) - (k == kPhi ? 1 : 0);
  }
  /// Total theta-index count of T^k_{ij} (radial-parity input).
  static int theta_count(int k, int i, int j) {
    return (i == kTheta ? 1 : 0) + (j == kTheta ? 1 : 0) + (k == kTheta ? 1 : 0);
  }

  TorsionField& operator+=(const TorsionField& other);
  TorsionField& operator-=(const TorsionField& other);
  TorsionField& operator*=(double s);

  double sup_norm() const;
  bool all_zero() const;

private:
  static std::size_t slot(int k, int i, int j) {
    return static_cast<std::size_t>((k * 4 + i) * 4 + j);
  }
  const QuadratureGrid* grid_;
  std::vector<Eigen::ArrayXd> comps_; // 64
  std::vector<bool> nonzero_;
};

// --- operations -----------------------------------------------------------

FormField wedge(const FormField& a, const FormField& b);
FormField exterior_derivative(const FormField& a);
FormField hodge_star(const FormField& a);
FormField codifferential(const FormField& a);
double l2_inner(const FormField& a, const FormField& b);
double l2_norm(const FormField& a);

VectorField sharp(const FormField& one_form);
FormField flat(const VectorField& v);

/// T^k_{ij} = g^{kl} tau_{ijl} for a 3-form tau.
TorsionField form_to_torsion(const FormField& tau);

/// Value of the fully antisymmetric extension tau_{i j k} (signed lookup).
double form_value_3(const FormField& tau, Eigen::Index node, int i, int j, int k);

/// Column-ordered debug dump (node index, coordinates, components).
void dump_form_csv(const FormField& a, const std::string& path);

} // namespace cclab

#endif
