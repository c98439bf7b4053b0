#include "cclab/curvature.hpp"

#include <cmath>

namespace cclab {

const char* convention_name(Convention c) {
  return c == Convention::kStandard ? "standard" : "paper-literal";
}

Convention convention_from_name(const std::string& name) {
  if (name == "standard") return Convention::kStandard;
  if (name == "paper-literal") return Convention::kPaperLiteral;
  throw ConfigError("convention must be 'standard' or 'paper-literal'");
}

Christoffel levi_civita(const Point& p) {
  if (!(p.theta > 0.0 && p.theta < kPi))
    throw DomainError("Christoffel symbols evaluated at a pole");
  Christoffel c;
  const double st = std::sin(p.theta);
  const double ct = std::cos(p.theta);
  c.gamma[kTheta][kPhi][kPhi] = -st * ct;
  c.gamma[kPhi][kTheta][kPhi] = ct / st;
  c.gamma[kPhi][kPhi][kTheta] = ct / st;
  return c;
}

ConnectionField ConnectionField::levi_civita_connection(const QuadratureGrid& grid) {
  return ConnectionField(grid, Convention::kStandard);
}

ConnectionField ConnectionField::from_torsion(const QuadratureGrid& grid,
                                              const AdmissibleTorsion& t, Convention convention) {
  grid.check_same(t.tensor.grid());
  ConnectionField c(grid, convention);
  c.torsion_ = std::make_shared<TorsionField>(t.tensor);
  c.torsion_harmonic_ = std::make_shared<TorsionField>(t.tensor_harmonic);
  return c;
}

ConnectionField ConnectionField::from_raw_torsion(const QuadratureGrid& grid, TorsionField t,
                                                  Convention convention) {
  grid.check_same(t.grid());
  ConnectionField c(grid, convention);
  c.torsion_ = std::make_shared<TorsionField>(std::move(t));
  return c;
}

const TorsionField& ConnectionField::torsion() const {
  if (!torsion_) throw ConfigError("connection carries no torsion");
  return *torsion_;
}

const TorsionField& ConnectionField::torsion_harmonic() const {
  if (!torsion_harmonic_) throw ConfigError("connection carries no harmonic/non-harmonic split");
  return *torsion_harmonic_;
}

Christoffel ConnectionField::gamma_at(Eigen::Index node) const {
  Christoffel c = levi_civita(grid_->point(node));
  if (torsion_) {
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if (torsion_->is_nonzero(k, i, j)) c.gamma[k][i][j] += torsion_->comp(k, i, j)[node];
  }
  return c;
}

Christoffel ConnectionField::gamma_interpolated(const Point& p) const {
  Christoffel c = levi_civita(p);
  if (torsion_) {
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if (torsion_->is_nonzero(k, i, j))
            c.gamma[k][i][j] +=
                grid_->interpolate(torsion_->comp(k, i, j), p, TorsionField::phi_weight(k, i, j),
                                   TorsionField::theta_count(k, i, j));
  }
  return c;
}

// --- curvature field ------------------------------------------------------

CurvatureField::CurvatureField(const QuadratureGrid& grid) : grid_(&grid) {
  comps_.resize(96);
  for (auto& c : comps_) c = Eigen::ArrayXd::Zero(grid.size());
}

int CurvatureField::pair_index(int i, int j) {
  static constexpr int table[4][4] = {{-1, 0, 1, 2}, {-1, -1, 3, 4}, {-1, -1, -1, 5}, {-1, -1, -1, -1}};
  const int p = table[i][j];
  if (p < 0) throw DomainError("pair_index requires i < j");
  return p;
}

Eigen::ArrayXd& CurvatureField::comp(int l, int k, int pair) {
  return comps_[static_cast<std::size_t>((pair * 4 + l) * 4 + k)];
}

const Eigen::ArrayXd& CurvatureField::comp(int l, int k, int pair) const {
  return comps_[static_cast<std::size_t>((pair * 4 + l) * 4 + k)];
}

double CurvatureField::value(int l, int k, int i, int j, Eigen::Index node) const {
  if (i == j) return 0.0;
  if (i < j) return comp(l, k, pair_index(i, j))[node];
  return -comp(l, k, pair_index(j, i))[node];
}

CurvatureField& CurvatureField::operator+=(const CurvatureField& other) {
  grid_->check_same(other.grid());
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += other.comps_[i];
  return *this;
}

CurvatureField& CurvatureField::operator-=(const CurvatureField& other) {
  grid_->check_same(other.grid());
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= other.comps_[i];
  return *this;
}

CurvatureField& CurvatureField::operator*=(double s) {
  for (auto& c : comps_) c *= s;
  return *this;
}

double CurvatureField::sup_norm() const {
  double m = 0.0;
  for (const auto& c : comps_) m = std::max(m, c.abs().maxCoeff());
  return m;
}

double CurvatureField::sup_diff(const CurvatureField& other) const {
  grid_->check_same(other.grid());
  double m = 0.0;
  for (std::size_t i = 0; i < comps_.size(); ++i)
    m = std::max(m, (comps_[i] - other.comps_[i]).abs().maxCoeff());
  return m;
}

namespace {
constexpr int frame_coord[4] = {kTheta, kPhi, kX, kY};
} // namespace

Eigen::ArrayXd CurvatureField::frame_component(int A, int B, int C, int D) const {
  const int a = frame_coord[A], b = frame_coord[B], c = frame_coord[C], d = frame_coord[D];
  Eigen::ArrayXd out;
  if (a == b) return Eigen::ArrayXd::Zero(grid_->size());
  if (a < b) {
    out = comp(d, c, pair_index(a, b));
  } else {
    out = -comp(d, c, pair_index(b, a));
  }
  // Frame scalings: 1/sin(theta) per phi frame argument, and the metric
  // pairing g(., E_D) contributes sin(theta) when D is the phi leg.
  int inv_pow = (A == 1 ? 1 : 0) + (B == 1 ? 1 : 0) + (C == 1 ? 1 : 0) - (D == 1 ? 1 : 0);
  if (inv_pow > 0)
    for (int k = 0; k < inv_pow; ++k) out /= grid_->sin_theta();
  if (inv_pow < 0)
    for (int k = 0; k < -inv_pow; ++k) out *= grid_->sin_theta();
  return out;
}

// --- Levi-Civita data on the grid ----------------------------------------

namespace {

/// Grid-sampled Levi-Civita Christoffel component, or nullptr when zero.
struct LcGammaGrid {
  Eigen::ArrayXd theta_phiphi; // -sin cos
  Eigen::ArrayXd phi_thetaphi; // cot
  const Eigen::ArrayXd* get(int k, int i, int j) const {
    if (k == kTheta && i == kPhi && j == kPhi) return &theta_phiphi;
    if (k == kPhi && ((i == kTheta && j == kPhi) || (i == kPhi && j == kTheta)))
      return &phi_thetaphi;
    return nullptr;
  }
};

LcGammaGrid make_lc_gamma(const QuadratureGrid& g) {
  LcGammaGrid lc;
  lc.theta_phiphi = -g.sin_theta() * g.cos_theta();
  lc.phi_thetaphi = g.cos_theta() / g.sin_theta();
  return lc;
}

} // namespace

Eigen::ArrayXd covariant_derivative_torsion_component(const TorsionField& t, int dir, int l,
                                                      int j, int k) {
  const QuadratureGrid& g = t.grid();
  const LcGammaGrid lc = make_lc_gamma(g);
  Eigen::ArrayXd out = t.is_nonzero(l, j, k)
                           ? g.deriv(dir, t.comp(l, j, k), TorsionField::phi_weight(l, j, k),
                                     TorsionField::theta_count(l, j, k))
                           : Eigen::ArrayXd::Zero(g.size());
  for (int m = 0; m < 4; ++m) {
    if (const auto* gm = lc.get(l, dir, m); gm && t.is_nonzero(m, j, k)) out += *gm * t.comp(m, j, k);
    if (const auto* gm = lc.get(m, dir, j); gm && t.is_nonzero(l, m, k)) out -= *gm * t.comp(l, m, k);
    if (const auto* gm = lc.get(m, dir, k); gm && t.is_nonzero(l, j, m)) out -= *gm * t.comp(l, j, m);
  }
  return out;
}

std::vector<Eigen::ArrayXd> covariant_derivative_torsion(const TorsionField& t) {
  std::vector<Eigen::ArrayXd> out;
  out.reserve(256);
  for (int dir = 0; dir < 4; ++dir)
    for (int l = 0; l < 4; ++l)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          out.push_back(covariant_derivative_torsion_component(t, dir, l, j, k));
  return out;
}

CurvatureField levi_civita_curvature(const QuadratureGrid& grid) {
  CurvatureField r(grid);
  // Unit round sphere: R^l_{kij} = delta^l_i g_{jk} - delta^l_j g_{ik} on the
  // sphere indices; torus and cross blocks vanish.
  const int p = CurvatureField::pair_index(kTheta, kPhi);
  r.comp(kTheta, kPhi, p) = grid.sin_theta() * grid.sin_theta(); // R^theta_{phi theta phi}
  r.comp(kPhi, kTheta, p) = Eigen::ArrayXd::Constant(grid.size(), -1.0);
  return r;
}

namespace {

/// First-order plus quadratic torsion terms of Eq.-style curvature (no R^LC).
CurvatureField torsion_curvature(const QuadratureGrid& g, const TorsionField& t,
                                 Convention convention) {
  CurvatureField r(g);
  static constexpr int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  for (int p = 0; p < 6; ++p) {
    const int i = pairs[p][0], j = pairs[p][1];
    for (int l = 0; l < 4; ++l) {
      for (int k = 0; k < 4; ++k) {
        Eigen::ArrayXd acc = covariant_derivative_torsion_component(t, i, l, j, k);
        acc -= covariant_derivative_torsion_component(t, j, l, i, k);
        for (int m = 0; m < 4; ++m) {
          if (convention == Convention::kStandard) {
            // T(X, T(Y,Z)) - T(Y, T(X,Z))
            if (t.is_nonzero(l, i, m) && t.is_nonzero(m, j, k)) acc += t.comp(l, i, m) * t.comp(m, j, k);
            if (t.is_nonzero(l, j, m) && t.is_nonzero(m, i, k)) acc -= t.comp(l, j, m) * t.comp(m, i, k);
          } else {
            // T(T(X,Y),Z) - T(T(X,Z),Y), the paper-literal reading
            if (t.is_nonzero(m, i, j) && t.is_nonzero(l, m, k)) acc += t.comp(m, i, j) * t.comp(l, m, k);
            if (t.is_nonzero(m, i, k) && t.is_nonzero(l, m, j)) acc -= t.comp(m, i, k) * t.comp(l, m, j);
          }
        }
        r.comp(l, k, p) = std::move(acc);
      }
    }
  }
  return r;
}

} // namespace

CurvatureField curvature_from_eq1(const ConnectionField& conn, bool with_splits) {
  const QuadratureGrid& g = conn.grid();
  CurvatureField r_lc = levi_civita_curvature(g);
  if (!conn.has_torsion()) {
    if (with_splits) {
      CurvatureField r = r_lc;
      r.split_lc = std::make_shared<CurvatureField>(r_lc);
      r.split_th = std::make_shared<CurvatureField>(g);
      r.split_tnh = std::make_shared<CurvatureField>(g);
      return r;
    }
    return r_lc;
  }

  CurvatureField r = torsion_curvature(g, conn.torsion(), conn.convention());
  r += r_lc;
  if (with_splits) {
    auto th = std::make_shared<CurvatureField>(
        torsion_curvature(g, conn.torsion_harmonic(), conn.convention()));
    auto tnh = std::make_shared<CurvatureField>(r);
    *tnh -= r_lc;
    *tnh -= *th;
    r.split_lc = std::make_shared<CurvatureField>(std::move(r_lc));
    r.split_th = std::move(th);
    r.split_tnh = std::move(tnh);
  }
  return r;
}

CurvatureField curvature_from_gamma(const ConnectionField& conn) {
  const QuadratureGrid& g = conn.grid();
  const LcGammaGrid lc = make_lc_gamma(g);
  const bool has_t = conn.has_torsion();

  // Full Gamma^k_{ij}, precomputed once.
  std::vector<Eigen::ArrayXd> gam(64);
  std::vector<bool> gam_nz(64, false);
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const std::size_t s = static_cast<std::size_t>((k * 4 + i) * 4 + j);
        gam[s] = Eigen::ArrayXd::Zero(g.size());
        if (const auto* p = lc.get(k, i, j)) {
          gam[s] = *p;
          gam_nz[s] = true;
        }
        if (has_t && conn.torsion().is_nonzero(k, i, j)) {
          gam[s] += conn.torsion().comp(k, i, j);
          gam_nz[s] = true;
        }
      }
    }
  }
  auto gamma = [&](int k, int i, int j) -> const Eigen::ArrayXd& {
    return gam[static_cast<std::size_t>((k * 4 + i) * 4 + j)];
  };
  auto gamma_nz = [&](int k, int i, int j) {
    return gam_nz[static_cast<std::size_t>((k * 4 + i) * 4 + j)];
  };
  // d_dir Gamma^k_{ij}: the Levi-Civita part analytically (it is singular at
  // the poles in t = cos theta), the torsion part spectrally.
  auto dgamma = [&](int dir, int k, int i, int j) -> Eigen::ArrayXd {
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(g.size());
    if (dir == kTheta) {
      if (k == kTheta && i == kPhi && j == kPhi) {
        out = -(g.cos_theta() * g.cos_theta() - g.sin_theta() * g.sin_theta()); // d(-sin cos)
      } else if (k == kPhi && ((i == kTheta && j == kPhi) || (i == kPhi && j == kTheta))) {
        out = -1.0 / (g.sin_theta() * g.sin_theta()); // d(cot)
      }
    }
    if (has_t && conn.torsion().is_nonzero(k, i, j))
      out += g.deriv(dir, conn.torsion().comp(k, i, j), TorsionField::phi_weight(k, i, j),
                     TorsionField::theta_count(k, i, j));
    return out;
  };

  CurvatureField r(g);
  static constexpr int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  for (int p = 0; p < 6; ++p) {
    const int i = pairs[p][0], j = pairs[p][1];
    for (int l = 0; l < 4; ++l) {
      for (int k = 0; k < 4; ++k) {
        Eigen::ArrayXd acc = dgamma(i, l, j, k) - dgamma(j, l, i, k);
        for (int m = 0; m < 4; ++m) {
          if (gamma_nz(l, i, m) && gamma_nz(m, j, k)) acc += gamma(l, i, m) * gamma(m, j, k);
          if (gamma_nz(l, j, m) && gamma_nz(m, i, k)) acc -= gamma(l, j, m) * gamma(m, i, k);
        }
        r.comp(l, k, p) = std::move(acc);
      }
    }
  }
  return r;
}

BlockReport block_report(const CurvatureField& r) {
  const QuadratureGrid& g = r.grid();
  Eigen::ArrayXd sq[2][2];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) sq[a][b] = Eigen::ArrayXd::Zero(g.size());

  BlockReport rep;
  for (int A = 0; A < 4; ++A) {
    for (int B = A + 1; B < 4; ++B) {
      for (int C = 0; C < 4; ++C) {
        for (int D = 0; D < 4; ++D) {
          const Eigen::ArrayXd f = r.frame_component(A, B, C, D);
          sq[D / 2][C / 2] += f * f;
          // sup is the largest single frame entry within the block, so the
          // closed-form harmonic value a^2 is reported as-is.
          rep.sup[D / 2][C / 2] = std::max(rep.sup[D / 2][C / 2], f.abs().maxCoeff());
        }
      }
    }
  }
  Eigen::ArrayXd off = Eigen::ArrayXd::Zero(g.size());
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      rep.l2[a][b] = std::sqrt(std::max(0.0, g.integrate(sq[a][b])));
      if (a != b) {
        off += sq[a][b];
        rep.offdiag_sup = std::max(rep.offdiag_sup, rep.sup[a][b]);
      }
    }
  }
  rep.offdiag_l2 = std::sqrt(std::max(0.0, g.integrate(off)));
  return rep;
}

RicciField ricci(const CurvatureField& r) {
  const QuadratureGrid& g = r.grid();
  RicciField out{&g, {}, 0.0, 0.0};
  for (int B = 0; B < 4; ++B) {
    for (int C = 0; C < 4; ++C) {
      Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(g.size());
      for (int A = 0; A < 4; ++A) {
        if (A == B) continue;
        acc += r.frame_component(A, B, C, A);
      }
      if ((B / 2) != (C / 2)) out.mixed_sup = std::max(out.mixed_sup, acc.abs().maxCoeff());
      out.frame[static_cast<std::size_t>(B * 4 + C)] = std::move(acc);
    }
  }
  for (int B = 0; B < 4; ++B)
    for (int C = B + 1; C < 4; ++C)
      out.antisym_sup = std::max(out.antisym_sup,
                                 0.5 * (out.frame[static_cast<std::size_t>(B * 4 + C)] -
                                        out.frame[static_cast<std::size_t>(C * 4 + B)])
                                           .abs()
                                           .maxCoeff());
  return out;
}

Eigen::Matrix4d RicciField::at(Eigen::Index node) const {
  Eigen::Matrix4d m;
  for (int B = 0; B < 4; ++B)
    for (int C = 0; C < 4; ++C) m(B, C) = frame[static_cast<std::size_t>(B * 4 + C)][node];
  return m;
}

double compat_residual(const ConnectionField& conn) {
  const QuadratureGrid& g = conn.grid();
  const LcGammaGrid lc = make_lc_gamma(g);
  const bool has_t = conn.has_torsion();
  const Eigen::ArrayXd s2 = g.sin_theta() * g.sin_theta();

  auto gamma_comp = [&](int k, int i, int j) -> Eigen::ArrayXd {
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(g.size());
    if (const auto* p = lc.get(k, i, j)) out = *p;
    if (has_t && conn.torsion().is_nonzero(k, i, j)) out += conn.torsion().comp(k, i, j);
    return out;
  };
  auto g_diag = [&](int i) -> Eigen::ArrayXd {
    if (i == kPhi) return s2;
    return Eigen::ArrayXd::Ones(g.size());
  };

  double sup = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        Eigen::ArrayXd res = -gamma_comp(k, i, j) * g_diag(k) - gamma_comp(j, i, k) * g_diag(j);
        if (i == kTheta && j == kPhi && k == kPhi)
          res += 2.0 * g.sin_theta() * g.cos_theta(); // d_theta g_phiphi
        sup = std::max(sup, res.abs().maxCoeff());
      }
    }
  }
  return sup;
}

} // namespace cclab
