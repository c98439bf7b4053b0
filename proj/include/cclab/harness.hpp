#ifndef CCLAB_HARNESS_HPP
#define CCLAB_HARNESS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cclab/curvature.hpp"

namespace cclab {

/// The V2-valued off-diagonal curvature block, stored as the 16 frame
/// components g(R(e_a, f_j) e_b, f_k) with a, j, b, k in {0, 1}.
struct OffDiagonalBlockField {
  const QuadratureGrid* grid = nullptr;
  std::array<Eigen::ArrayXd, 16> comps; // [((a * 2 + j) * 2 + b) * 2 + k]

  double l2() const;  // sqrt of the integrated squared Frobenius norm
  double sup() const; // sup over nodes of the pointwise Frobenius norm
};

OffDiagonalBlockField offdiagonal_block(const CurvatureField& r);

/// Frame-invariant L^2 pairing of two blocks on the same grid.
double block_inner(const OffDiagonalBlockField& a, const OffDiagonalBlockField& b);

/// One row of the off-diagonal slot scan. Factors are 1 (sphere) or 2
/// (torus); the projection factor is always opposite the operand factor.
struct ScanRow {
  int arg1 = 1;
  int arg2 = 1;
  int operand = 1;
  std::string split; // "full", "lc", "th", "tnh"
  double sup = 0.0;
  double l2 = 0.0;
  bool flagged = false;
};

/// Scans all 8 slot families (ordered argument factors x operand factor) for
/// the full curvature and, when present, each split component.
std::vector<ScanRow> offdiagonal_scan(const CurvatureField& r, double tol = 1e-8);

struct ExperimentConfig {
  CalibrationClass cls{1.0, 0.0};
  GridSpec grid{};
  Convention convention = Convention::kStandard;
  std::vector<PotentialSpec> potential_specs;
};

/// Everything measured for one potential sample.
struct SampleRecord {
  int sample_id = 0;
  std::uint64_t seed = 0;
  double amplitude = 0.0;
  double norm_rh = 0.0;
  double norm_rnh = 0.0;
  double cross = 0.0;
  double norm_rfull = 0.0;
  double c = 0.0;              // normalized cross term
  bool skipped = false;        // norm_rnh == 0, lemma undefined
  bool flagged = false;        // norm_rfull < 0.9 * norm_rh
  bool scan_flag = false;      // some full-curvature slot non-zero
  double splitting_norm = 0.0; // max ||[R(E_A,E_B), P1]||_F over 8 points
  double ricci_mixed_sup = 0.0;
  double riemann_offdiag_sup = 0.0;
};

/// Runs the full per-sample pipeline (torsion, curvature with splits, block
/// norms, scan, splitting test, Ricci probe) for every potential spec.
std::vector<SampleRecord> run_samples(const ExperimentConfig& cfg);

struct ConvergenceRow {
  GridSpec grid;
  double dual_path_gap = 0.0;
  double lemma_c_abs = 0.0;
  double adjointness_residual = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double order_c = 0.0;       // fitted decay order of |c| vs n_theta
  double order_adjoint = 0.0; // fitted decay order of the adjointness residual
};

/// Per-grid values of the key residuals plus fitted log-log decay orders.
/// Values at the floor (<= 1e-12) are clamped before fitting so roundoff
/// noise cannot produce a spurious growth order.
ConvergenceStudy convergence_study(const ExperimentConfig& cfg,
                                   const std::vector<GridSpec>& grids);

/// Base grid plus (count - 1) proportionally refined grids, periodic counts
/// rounded down to even.
std::vector<GridSpec> refinement_ladder(const GridSpec& base, int count = 3);

/// "24x48x8x8"-style tag used in report files.
std::string grid_tag(const GridSpec& spec);

// --- CSV emitters (RFC 4180, header row, 17 significant digits) -----------

void write_noncancellation_csv(const std::vector<SampleRecord>& records,
                               const std::string& path);
void write_lemma_csv(const std::vector<SampleRecord>& records, const std::string& tag,
                     const std::string& path);
void write_ricci_csv(const std::vector<SampleRecord>& records, const std::string& path);
void write_scan_csv(const std::vector<ScanRow>& rows, const std::string& path);
void write_convergence_csv(const ConvergenceStudy& study, const std::string& path);

/// 17-significant-digit float formatting shared by all report writers.
std::string format_float(double v);

} // namespace cclab

#endif
