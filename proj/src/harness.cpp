#include "cclab/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "cclab/holonomy.hpp"

namespace cclab {

namespace {

constexpr double kFloor = 1e-12; // roundoff floor for decay fits

Eigen::ArrayXd block_sq(const OffDiagonalBlockField& f) {
  Eigen::ArrayXd sq = Eigen::ArrayXd::Zero(f.grid->size());
  for (const auto& c : f.comps) sq += c.square();
  return sq;
}

} // namespace

double OffDiagonalBlockField::l2() const { return std::sqrt(grid->integrate(block_sq(*this))); }

double OffDiagonalBlockField::sup() const { return std::sqrt(block_sq(*this).maxCoeff()); }

OffDiagonalBlockField offdiagonal_block(const CurvatureField& r) {
  OffDiagonalBlockField out;
  out.grid = &r.grid();
  for (int a = 0; a < 2; ++a)
    for (int j = 0; j < 2; ++j)
      for (int b = 0; b < 2; ++b)
        for (int k = 0; k < 2; ++k)
          out.comps[((a * 2 + j) * 2 + b) * 2 + k] = r.frame_component(a, 2 + j, b, 2 + k);
  return out;
}

double block_inner(const OffDiagonalBlockField& a, const OffDiagonalBlockField& b) {
  a.grid->check_same(*b.grid);
  Eigen::ArrayXd prod = Eigen::ArrayXd::Zero(a.grid->size());
  for (std::size_t i = 0; i < a.comps.size(); ++i) prod += a.comps[i] * b.comps[i];
  return a.grid->integrate(prod);
}

namespace {

void scan_one_split(const CurvatureField& field, const char* split, double tol,
                    std::vector<ScanRow>& rows) {
  const QuadratureGrid& g = field.grid();
  const int factor_idx[2][2] = {{0, 1}, {2, 3}};
  for (int arg1 = 1; arg1 <= 2; ++arg1) {
    for (int arg2 = 1; arg2 <= 2; ++arg2) {
      for (int operand = 1; operand <= 2; ++operand) {
        const int proj = 3 - operand;
        Eigen::ArrayXd sq = Eigen::ArrayXd::Zero(g.size());
        double entry_sup = 0.0;
        for (int A : factor_idx[arg1 - 1]) {
          for (int B : factor_idx[arg2 - 1]) {
            if (A == B) continue;
            for (int C : factor_idx[operand - 1])
              for (int D : factor_idx[proj - 1]) {
                const Eigen::ArrayXd f = field.frame_component(A, B, C, D);
                sq += f.square();
                entry_sup = std::max(entry_sup, f.abs().maxCoeff());
              }
          }
        }
        ScanRow row;
        row.arg1 = arg1;
        row.arg2 = arg2;
        row.operand = operand;
        row.split = split;
        row.sup = entry_sup; // largest single frame entry in the family
        row.l2 = std::sqrt(g.integrate(sq));
        row.flagged = row.sup > tol;
        rows.push_back(std::move(row));
      }
    }
  }
}

} // namespace

std::vector<ScanRow> offdiagonal_scan(const CurvatureField& r, double tol) {
  std::vector<ScanRow> rows;
  scan_one_split(r, "full", tol, rows);
  if (r.split_lc) scan_one_split(*r.split_lc, "lc", tol, rows);
  if (r.split_th) scan_one_split(*r.split_th, "th", tol, rows);
  if (r.split_tnh) scan_one_split(*r.split_tnh, "tnh", tol, rows);
  return rows;
}

std::vector<SampleRecord> run_samples(const ExperimentConfig& cfg) {
  cfg.cls.require_nontrivial();
  cfg.grid.validate();
  const QuadratureGrid grid(cfg.grid);

  std::vector<SampleRecord> records;
  records.reserve(cfg.potential_specs.size());
  int id = 0;
  for (const PotentialSpec& spec : cfg.potential_specs) {
    SampleRecord rec;
    rec.sample_id = id++;
    rec.seed = spec.seed;
    rec.amplitude = spec.amplitude;

    const Potentials pot = sample_potentials(grid, spec);
    const AdmissibleTorsion torsion = build_admissible_torsion(grid, cfg.cls, pot.eta, pot.mu);
    const ConnectionField conn = ConnectionField::from_torsion(grid, torsion, cfg.convention);
    const CurvatureField r = curvature_from_eq1(conn, /*with_splits=*/true);

    const OffDiagonalBlockField bh = offdiagonal_block(*r.split_th);
    const OffDiagonalBlockField bnh = offdiagonal_block(*r.split_tnh);
    const OffDiagonalBlockField bfull = offdiagonal_block(r);
    rec.norm_rh = bh.l2();
    rec.norm_rnh = bnh.l2();
    rec.norm_rfull = bfull.l2();
    rec.cross = block_inner(bh, bnh);
    if (rec.norm_rnh > 0.0 && rec.norm_rh > 0.0) {
      rec.c = rec.cross / (rec.norm_rh * rec.norm_rnh);
    } else {
      rec.skipped = true;
    }
    rec.flagged = rec.norm_rfull < 0.9 * rec.norm_rh;

    for (const ScanRow& row : offdiagonal_scan(r)) {
      if (row.split == "full" && row.flagged) rec.scan_flag = true;
    }

    const GridSpec& s = cfg.grid;
    std::vector<Eigen::Matrix4d> generators;
    for (int it : {s.n_theta / 4, (3 * s.n_theta) / 4})
      for (int ip : {0, s.n_phi / 2})
        for (int ix : {0, s.n_x / 2}) {
          const auto ops = curvature_operators_at(r, grid.index(it, ip, ix, 0));
          generators.insert(generators.end(), ops.begin(), ops.end());
        }
    rec.splitting_norm = splitting_test(generators).commutator_norm;

    rec.ricci_mixed_sup = ricci(r).mixed_sup;
    rec.riemann_offdiag_sup = block_report(r).offdiag_sup;

    records.push_back(rec);
  }
  return records;
}

namespace {

/// Least-squares slope of log(value) vs log(n_theta); returns the decay
/// order (positive = decreasing).
double fitted_order(const std::vector<double>& n, const std::vector<double>& v) {
  const std::size_t m = n.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(n[i]);
    const double y = std::log(std::max(v[i], kFloor));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return -(m * sxy - sx * sy) / denom;
}

} // namespace

ConvergenceStudy convergence_study(const ExperimentConfig& cfg,
                                   const std::vector<GridSpec>& grids) {
  if (grids.size() < 3) throw ConfigError("convergence study needs at least 3 grids");
  for (std::size_t i = 1; i < grids.size(); ++i)
    if (grids[i].n_theta <= grids[i - 1].n_theta)
      throw ConfigError("convergence grids must strictly increase in n_theta");
  if (cfg.potential_specs.empty()) throw ConfigError("convergence study needs a potential spec");
  cfg.cls.require_nontrivial();

  const PotentialSpec& spec = cfg.potential_specs.front();
  ConvergenceStudy study;
  for (const GridSpec& gs : grids) {
    gs.validate();
    const QuadratureGrid grid(gs);
    const Potentials pot = sample_potentials(grid, spec);
    const AdmissibleTorsion torsion = build_admissible_torsion(grid, cfg.cls, pot.eta, pot.mu);
    const ConnectionField conn = ConnectionField::from_torsion(grid, torsion, cfg.convention);

    ConvergenceRow row;
    row.grid = gs;
    {
      const CurvatureField r = curvature_from_eq1(conn, /*with_splits=*/true);
      const OffDiagonalBlockField bh = offdiagonal_block(*r.split_th);
      const OffDiagonalBlockField bnh = offdiagonal_block(*r.split_tnh);
      const double nh = bh.l2(), nnh = bnh.l2();
      row.lemma_c_abs = (nh > 0.0 && nnh > 0.0) ? std::abs(block_inner(bh, bnh)) / (nh * nnh) : 0.0;
    }
    {
      const CurvatureField r1 = curvature_from_eq1(conn);
      const CurvatureField r2 = curvature_from_gamma(conn);
      row.dual_path_gap = r1.sup_diff(r2);
    }
    {
      const FormField deta = exterior_derivative(pot.eta);
      const double lhs = l2_inner(deta, torsion.t_flat);
      const double rhs = l2_inner(pot.eta, codifferential(torsion.t_flat));
      row.adjointness_residual = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
    }
    study.rows.push_back(row);
  }

  std::vector<double> ns, cs, as;
  for (const ConvergenceRow& row : study.rows) {
    ns.push_back(static_cast<double>(row.grid.n_theta));
    cs.push_back(row.lemma_c_abs);
    as.push_back(row.adjointness_residual);
  }
  study.order_c = fitted_order(ns, cs);
  study.order_adjoint = fitted_order(ns, as);
  return study;
}

std::vector<GridSpec> refinement_ladder(const GridSpec& base, int count) {
  base.validate();
  std::vector<GridSpec> out;
  for (int level = 0; level < count; ++level) {
    GridSpec g = base;
    g.n_theta = base.n_theta + 8 * level;
    const double ratio = static_cast<double>(g.n_theta) / base.n_theta;
    auto scale_even = [&](int n) {
      int m = static_cast<int>(n * ratio);
      if (m % 2 != 0) --m;
      return std::max(m, n);
    };
    g.n_phi = scale_even(base.n_phi);
    g.n_x = scale_even(base.n_x);
    g.n_y = scale_even(base.n_y);
    out.push_back(g);
  }
  return out;
}

std::string grid_tag(const GridSpec& spec) {
  return std::to_string(spec.n_theta) + "x" + std::to_string(spec.n_phi) + "x" +
         std::to_string(spec.n_x) + "x" + std::to_string(spec.n_y);
}

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_report(const std::string& path) {
  std::ofstream out(path, std::ios::binary); // binary: fixed newline bytes
  if (!out) throw ConfigError("cannot open report file: " + path);
  return out;
}

} // namespace

void write_noncancellation_csv(const std::vector<SampleRecord>& records,
                               const std::string& path) {
  std::ofstream out = open_report(path);
  out << "sample_id,seed,norm_Rh,norm_Rnh,cross,norm_Rfull,flag\r\n";
  for (const SampleRecord& r : records)
    out << r.sample_id << ',' << r.seed << ',' << format_float(r.norm_rh) << ','
        << format_float(r.norm_rnh) << ',' << format_float(r.cross) << ','
        << format_float(r.norm_rfull) << ',' << (r.flagged ? 1 : 0) << "\r\n";
}

void write_lemma_csv(const std::vector<SampleRecord>& records, const std::string& tag,
                     const std::string& path) {
  std::ofstream out = open_report(path);
  out << "sample_id,c,grid_tag,skipped\r\n";
  for (const SampleRecord& r : records)
    out << r.sample_id << ',' << format_float(r.c) << ',' << tag << ',' << (r.skipped ? 1 : 0)
        << "\r\n";
}

void write_ricci_csv(const std::vector<SampleRecord>& records, const std::string& path) {
  std::ofstream out = open_report(path);
  out << "sample_id,seed,ricci_mixed_sup,riemann_offdiag_sup\r\n";
  for (const SampleRecord& r : records)
    out << r.sample_id << ',' << r.seed << ',' << format_float(r.ricci_mixed_sup) << ','
        << format_float(r.riemann_offdiag_sup) << "\r\n";
}

void write_scan_csv(const std::vector<ScanRow>& rows, const std::string& path) {
  std::ofstream out = open_report(path);
  out << "arg1,arg2,operand,split,sup,l2,flagged\r\n";
  for (const ScanRow& r : rows)
    out << r.arg1 << ',' << r.arg2 << ',' << r.operand << ',' << r.split << ','
        << format_float(r.sup) << ',' << format_float(r.l2) << ',' << (r.flagged ? 1 : 0)
        << "\r\n";
}

void write_convergence_csv(const ConvergenceStudy& study, const std::string& path) {
  std::ofstream out = open_report(path);
  out << "grid,dual_path_gap,lemma_c_abs,adjointness_residual\r\n";
  for (const ConvergenceRow& r : study.rows)
    out << grid_tag(r.grid) << ',' << format_float(r.dual_path_gap) << ','
        << format_float(r.lemma_c_abs) << ',' << format_float(r.adjointness_residual) << "\r\n";
  out << "decay_order,," << format_float(study.order_c) << ','
      << format_float(study.order_adjoint) << "\r\n";
}

} // namespace cclab
