#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cclab/config.hpp"
#include "cclab/holonomy.hpp"
#include "cclab/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cclab;

namespace {

struct Options {
  std::string config_path;
  std::string output_dir;
  std::string convention;
  int workers = 1;
  std::uint64_t seed_override = 0;
  bool has_seed_override = false;
};

RunConfig resolve_config(const Options& opt) {
  RunConfig cfg = opt.config_path.empty() ? RunConfig{} : load_run_config(opt.config_path);
  if (!opt.output_dir.empty()) cfg.output_dir = opt.output_dir;
  if (!opt.convention.empty()) cfg.convention = convention_from_name(opt.convention);
  if (opt.has_seed_override) cfg.potentials.seed = opt.seed_override;
  cfg.validate();
  fs::create_directories(cfg.output_dir);
  return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

void write_json(const RunConfig& cfg, const std::string& name, json body) {
  body["config"] = run_config_to_json(cfg);
  std::ofstream out(out_path(cfg, name), std::ios::binary);
  if (!out) throw ConfigError("cannot write report: " + name);
  out << body.dump(2) << "\n";
}

void line(bool pass, const std::string& what, double value, double tol) {
  std::printf("%s %s = %.3e (tol %.1e)\n", pass ? "PASS" : "FAIL", what.c_str(), value, tol);
}

void report(const std::string& what, double value) {
  std::printf("REPORT %s = %.6e\n", what.c_str(), value);
}

/// First (lowest-amplitude skipped) sample of the expanded matrix: full
/// amplitude, base seed.
PotentialSpec primary_spec(const RunConfig& cfg) {
  const PotentialMatrix& m = cfg.potentials;
  return PotentialSpec{m.sphere_degree, m.torus_kmax, m.amplitude, m.seed};
}

int cmd_verify_calculus(const RunConfig& cfg) {
  const double tol = cfg.tolerance("calculus", 1e-8);
  const QuadratureGrid grid(cfg.grid);
  const Potentials pot = sample_potentials(grid, primary_spec(cfg));
  const CalibrationClass cls = cfg.cls.trivial() ? CalibrationClass{1.0, 0.0} : cfg.cls;
  const AdmissibleTorsion torsion = build_admissible_torsion(grid, cls, pot.eta, pot.mu);
  const FormField& tau = torsion.t_flat;

  const double dd = exterior_derivative(exterior_derivative(pot.eta)).sup_norm();
  const double deldel = codifferential(codifferential(tau)).sup_norm();
  const FormField one = codifferential(pot.eta); // generic 1-form
  const double star2 = (hodge_star(hodge_star(one)) + one).sup_norm();
  const double lhs = l2_inner(exterior_derivative(pot.eta), tau);
  const double rhs = l2_inner(pot.eta, codifferential(tau));
  const double adj = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));

  bool ok = true;
  for (auto [name, value] : {std::pair<const char*, double>{"dd_sup", dd},
                             {"deltadelta_sup", deldel},
                             {"star_star_defect_sup", star2},
                             {"adjointness_rel", adj}}) {
    const bool pass = value <= tol;
    ok = ok && pass;
    line(pass, name, value, tol);
  }
  write_json(cfg, "calculus_report.json",
             json{{"dd_sup", dd},
                  {"deltadelta_sup", deldel},
                  {"star_star_defect_sup", star2},
                  {"adjointness_rel", adj},
                  {"tolerance", tol},
                  {"pass", ok}});
  return ok ? 0 : 1;
}

int cmd_curvature_report(const RunConfig& cfg) {
  cfg.cls.require_nontrivial();
  const QuadratureGrid grid(cfg.grid);
  const PotentialSpec spec = primary_spec(cfg);
  const Potentials pot = sample_potentials(grid, spec);
  const AdmissibleTorsion torsion = build_admissible_torsion(grid, cfg.cls, pot.eta, pot.mu);
  const ConnectionField conn = ConnectionField::from_torsion(grid, torsion, cfg.convention);

  const CurvatureField r = curvature_from_eq1(conn, /*with_splits=*/true);
  const BlockReport blocks = block_report(r);
  const RicciField ric = ricci(r);
  const double compat = compat_residual(conn);
  const double gap = r.sup_diff(curvature_from_gamma(conn));

  json jb;
  for (int row = 0; row < 2; ++row)
    for (int col = 0; col < 2; ++col) {
      const std::string key = "P" + std::to_string(row + 1) + "RP" + std::to_string(col + 1);
      jb[key] = {{"l2", blocks.l2[row][col]}, {"sup", blocks.sup[row][col]}};
    }
  write_json(cfg, "curvature_report.json",
             json{{"blocks", jb},
                  {"offdiag_l2", blocks.offdiag_l2},
                  {"offdiag_sup", blocks.offdiag_sup},
                  {"ricci_mixed_sup", ric.mixed_sup},
                  {"ricci_antisym_sup", ric.antisym_sup},
                  {"compat_residual", compat},
                  {"dual_path_gap", gap},
                  {"seed", spec.seed}});

  report("offdiag_l2", blocks.offdiag_l2);
  report("offdiag_sup", blocks.offdiag_sup);
  report("ricci_mixed_sup", ric.mixed_sup);
  report("compat_residual", compat);
  if (cfg.convention == Convention::kStandard) {
    const double tol = cfg.tolerance("dual_path", 1e-8);
    const bool pass = gap <= tol;
    line(pass, "dual_path_gap", gap, tol);
    return pass ? 0 : 1;
  }
  report("dual_path_gap", gap);
  return 0;
}

std::vector<LoopSpec> default_loops() {
  const double q = kPi / 2.0;
  auto rect = [](Point a, Point b, Point c, Point d) {
    return LoopSpec{{a, b, c, d, a}, 48};
  };
  std::vector<LoopSpec> loops;
  // torus-factor rectangle (flat-holonomy baseline for T = 0)
  loops.push_back(rect({q, 0.5, 0.0, 0.0}, {q, 0.5, 0.5, 0.0}, {q, 0.5, 0.5, 0.5},
                       {q, 0.5, 0.0, 0.5}));
  // spherical rectangle at the equator
  loops.push_back(rect({q, 0.5, 0.0, 0.0}, {q + 0.25, 0.5, 0.0, 0.0},
                       {q + 0.25, 0.75, 0.0, 0.0}, {q, 0.75, 0.0, 0.0}));
  // mixed (theta, x) rectangle: off-diagonal transport for mixed classes
  loops.push_back(rect({q, 0.5, 0.0, 0.0}, {q + 0.25, 0.5, 0.0, 0.0},
                       {q + 0.25, 0.5, 0.25, 0.0}, {q, 0.5, 0.25, 0.0}));
  return loops;
}

double offdiag_block_norm(const Eigen::Matrix4d& m) {
  const Eigen::Matrix4d d = m - Eigen::Matrix4d::Identity();
  return std::sqrt(d.topRightCorner<2, 2>().squaredNorm() +
                   d.bottomLeftCorner<2, 2>().squaredNorm());
}

int cmd_holonomy(const RunConfig& cfg) {
  const QuadratureGrid grid(cfg.grid);
  const bool baseline = cfg.cls.trivial();
  ConnectionField conn = ConnectionField::levi_civita_connection(grid);
  if (!baseline) {
    const Potentials pot = sample_potentials(grid, primary_spec(cfg));
    const AdmissibleTorsion torsion = build_admissible_torsion(grid, cfg.cls, pot.eta, pot.mu);
    conn = ConnectionField::from_torsion(grid, torsion, cfg.convention);
  }
  const CurvatureField r = curvature_from_eq1(conn);
  const double tol = cfg.tolerance("splitting", 1e-6);
  const HolonomyReport rep = holonomy_report(conn, r, default_loops(), tol);

  {
    std::ofstream out(out_path(cfg, "loops.csv"), std::ios::binary);
    out << "loop_id,area,offdiag_block_norm,orthogonality_defect\r\n";
    const double areas[3] = {0.25, 0.0625, 0.0625};
    for (std::size_t i = 0; i < rep.transports.size(); ++i)
      out << i << ',' << format_float(areas[i]) << ','
          << format_float(offdiag_block_norm(rep.transports[i].matrix)) << ','
          << format_float(rep.transports[i].orthogonality_defect) << "\r\n";
  }
  json jt = json::array();
  for (const TransportResult& t : rep.transports) {
    json jm = json::array();
    for (int row = 0; row < 4; ++row) {
      json jr = json::array();
      for (int col = 0; col < 4; ++col) jr.push_back(t.matrix(row, col));
      jm.push_back(jr);
    }
    jt.push_back(json{{"matrix", jm}, {"orthogonality_defect", t.orthogonality_defect}});
  }
  write_json(cfg, "holonomy_report.json",
             json{{"base_point",
                   {rep.base_point.theta, rep.base_point.phi, rep.base_point.x, rep.base_point.y}},
                  {"generator_count", rep.generators.size()},
                  {"closure_dim", rep.closure_dim},
                  {"splitting_commutator_norm", rep.splitting_commutator_norm},
                  {"verdict", rep.verdict},
                  {"transports", jt}});

  const bool expect_violated = !baseline;
  const bool violated = rep.verdict == "splitting-violated";
  const bool pass = violated == expect_violated;
  std::printf("%s verdict = %s (commutator norm %.3e, closure dim %d)\n", pass ? "PASS" : "FAIL",
              rep.verdict.c_str(), rep.splitting_commutator_norm, rep.closure_dim);
  return pass ? 0 : 1;
}

int cmd_scan(const RunConfig& cfg) {
  cfg.cls.require_nontrivial();
  const QuadratureGrid grid(cfg.grid);
  const Potentials pot = sample_potentials(grid, primary_spec(cfg));
  const AdmissibleTorsion torsion = build_admissible_torsion(grid, cfg.cls, pot.eta, pot.mu);
  const ConnectionField conn = ConnectionField::from_torsion(grid, torsion, cfg.convention);
  const CurvatureField r = curvature_from_eq1(conn, /*with_splits=*/true);

  const double tol = cfg.tolerance("scan", 1e-8);
  const std::vector<ScanRow> rows = offdiagonal_scan(r, tol);
  write_scan_csv(rows, out_path(cfg, "scan.csv"));

  int full_flags = 0;
  json jr = json::array();
  for (const ScanRow& row : rows) {
    if (row.split == "full" && row.flagged) ++full_flags;
    jr.push_back(json{{"arg1", row.arg1},
                      {"arg2", row.arg2},
                      {"operand", row.operand},
                      {"split", row.split},
                      {"sup", row.sup},
                      {"l2", row.l2},
                      {"flagged", row.flagged}});
  }
  write_json(cfg, "scan_report.json",
             json{{"rows", jr}, {"full_flag_count", full_flags}, {"tolerance", tol}});
  const bool pass = full_flags >= 1;
  line(pass, "full_curvature_flagged_slots", full_flags, 1);
  return pass ? 0 : 1;
}

int cmd_lemma(const RunConfig& cfg) {
  const std::vector<SampleRecord> records = run_samples(experiment_config(cfg));
  write_lemma_csv(records, grid_tag(cfg.grid), out_path(cfg, "lemma.csv"));
  const double tol = cfg.tolerance("lemma_c", 1e-6);
  bool ok = true;
  json offenders = json::array();
  for (const SampleRecord& r : records) {
    if (r.skipped) {
      std::printf("SKIP sample %d (zero non-harmonic block)\n", r.sample_id);
      continue;
    }
    if (std::abs(r.c) > tol) {
      ok = false;
      offenders.push_back(json{{"sample_id", r.sample_id}, {"seed", r.seed}, {"c", r.c}});
    }
  }
  if (!ok)
    write_json(cfg, "lemma_counterexample.json",
               json{{"offenders", offenders}, {"tolerance", tol}});
  double max_c = 0.0;
  for (const SampleRecord& r : records)
    if (!r.skipped) max_c = std::max(max_c, std::abs(r.c));
  line(ok, "max_abs_c", max_c, tol);
  return ok ? 0 : 1;
}

int cmd_noncancel(const RunConfig& cfg) {
  const std::vector<SampleRecord> records = run_samples(experiment_config(cfg));
  write_noncancellation_csv(records, out_path(cfg, "noncancellation.csv"));
  int flags = 0;
  double min_ratio = 1e300;
  for (const SampleRecord& r : records) {
    if (r.flagged) ++flags;
    if (r.norm_rh > 0.0) min_ratio = std::min(min_ratio, r.norm_rfull / r.norm_rh);
  }
  const bool pass = flags == 0;
  std::printf("%s noncancellation flags = %d (min ratio %.6f, %zu samples)\n",
              pass ? "PASS" : "FAIL", flags, min_ratio, records.size());
  return pass ? 0 : 1;
}

int cmd_ricci(const RunConfig& cfg) {
  const std::vector<SampleRecord> records = run_samples(experiment_config(cfg));
  write_ricci_csv(records, out_path(cfg, "ricci.csv"));
  for (const SampleRecord& r : records) {
    std::printf("REPORT sample %d: ricci_mixed_sup = %.6e, riemann_offdiag_sup = %.6e\n",
                r.sample_id, r.ricci_mixed_sup, r.riemann_offdiag_sup);
  }
  return 0;
}

int cmd_converge(const RunConfig& cfg) {
  const std::vector<GridSpec> grids = refinement_ladder(cfg.grid, 3);
  const ConvergenceStudy study = convergence_study(experiment_config(cfg), grids);
  write_convergence_csv(study, out_path(cfg, "convergence.csv"));

  const double gap_tol = cfg.tolerance("dual_path", 1e-8);
  const double c_tol = cfg.tolerance("lemma_c", 1e-6);
  const double floor = 1e-12;
  bool ok = true;
  double prev_c = 1e300;
  for (const ConvergenceRow& row : study.rows) {
    const bool gap_ok = row.dual_path_gap <= gap_tol;
    // The decrease check tolerates last-digit jitter of converged values.
    const bool c_ok = row.lemma_c_abs <= c_tol &&
                      row.lemma_c_abs <= std::max(prev_c * (1.0 + 1e-9) + floor, floor);
    prev_c = row.lemma_c_abs;
    ok = ok && gap_ok && c_ok;
    std::printf("%s grid %s: gap = %.3e, |c| = %.3e, adjointness = %.3e\n",
                (gap_ok && c_ok) ? "PASS" : "FAIL", grid_tag(row.grid).c_str(),
                row.dual_path_gap, row.lemma_c_abs, row.adjointness_residual);
  }
  double max_adj = 0.0;
  for (const ConvergenceRow& row : study.rows) max_adj = std::max(max_adj, row.adjointness_residual);
  const bool adj_ok = max_adj <= 1e-10 || study.order_adjoint >= 4.0;
  ok = ok && adj_ok;
  line(adj_ok, "adjointness_residual_max", max_adj, 1e-10);
  return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"calibrated-connection laboratory on S^2 x T^2"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--config", opt.config_path, "JSON config file");
  app.add_option("--output", opt.output_dir, "output directory (overrides config)");
  app.add_option("--workers", opt.workers, "data-parallel worker cap")->check(CLI::PositiveNumber);
  app.add_option("--convention", opt.convention, "standard | paper-literal");
  app.add_option("--seed-override", opt.seed_override, "replace the base potential seed")
      ->each([&](const std::string&) { opt.has_seed_override = true; });

  int (*handler)(const RunConfig&) = nullptr;
  const std::pair<const char*, int (*)(const RunConfig&)> commands[] = {
      {"verify-calculus", cmd_verify_calculus},
      {"curvature-report", cmd_curvature_report},
      {"holonomy", cmd_holonomy},
      {"scan", cmd_scan},
      {"lemma", cmd_lemma},
      {"noncancel", cmd_noncancel},
      {"ricci", cmd_ricci},
      {"converge", cmd_converge}};
  for (const auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->fallthrough(); // shared options may follow the subcommand
    sub->callback([&handler, fn = fn]() { handler = fn; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    set_worker_count(opt.workers);
    const RunConfig cfg = resolve_config(opt);
    return handler(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
