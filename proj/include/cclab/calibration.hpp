#ifndef CCLAB_CALIBRATION_HPP
#define CCLAB_CALIBRATION_HPP

#include <cstdint>

#include "cclab/forms.hpp"

namespace cclab {

/// Mixed third-cohomology class on S^2 x T^2, coordinates (a, b) in the
/// Kunneth basis vol_{S^2} ^ dx, vol_{S^2} ^ dy.
struct CalibrationClass {
  double a = 1.0;
  double b = 0.0;

  bool trivial() const { return a == 0.0 && b == 0.0; }
  /// Throws ConfigError for the trivial class.
  void require_nontrivial() const;
};

/// Seeded dictionary parameters for the exact / co-exact perturbations.
struct PotentialSpec {
  int sphere_degree = 1;    // max degree in the embedding coordinates
  int torus_kmax = 1;       // max Fourier wavenumber on x, y
  double amplitude = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Harmonic representative omega = sin(theta) dtheta ^ dphi ^ (a dx + b dy).
FormField harmonic_representative(const QuadratureGrid& grid, const CalibrationClass& c);

struct Potentials {
  FormField eta; // 2-form
  FormField mu;  // 4-form
};

/// Seeded smooth potentials. eta is a keyed-counter random combination of
/// globally smooth 2-forms built from embedding-coordinate polynomials and
/// torus Fourier modes; mu = h vol_g with h from the same scalar dictionary.
/// Identical spec => bit-identical fields, independent of evaluation order.
Potentials sample_potentials(const QuadratureGrid& grid, const PotentialSpec& spec);

/// L^2 projection of a 3-form onto span{omega_(1,0), omega_(0,1)}.
FormField hodge_project(const FormField& tau);

/// Coefficients of that projection in the harmonic basis.
CalibrationClass harmonic_coefficients(const FormField& tau);

struct AdmissibleTorsion {
  CalibrationClass cls;
  FormField t_flat;        // omega + d eta + delta mu
  FormField harmonic_part; // omega
  FormField eta;
  FormField mu;
  TorsionField tensor;          // from t_flat
  TorsionField tensor_harmonic; // from omega
};

AdmissibleTorsion build_admissible_torsion(const QuadratureGrid& grid, const CalibrationClass& c,
                                           const FormField& eta, const FormField& mu);

/// Keyed counter-based generator: uniform double in [-1, 1) from (seed, tag,
/// counter), independent of call order.
double keyed_uniform(std::uint64_t seed, std::uint64_t tag, std::uint64_t counter);

} // namespace cclab

#endif
