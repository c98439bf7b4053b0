#include "cclab/calibration.hpp"

#include <cmath>
#include <vector>

namespace cclab {

void CalibrationClass::require_nontrivial() const {
  if (trivial())
    throw ConfigError("class must be non-trivial: (a, b) != (0, 0)");
}

void PotentialSpec::validate() const {
  if (sphere_degree < 0) throw ConfigError("sphere_degree must be >= 0");
  if (torus_kmax < 0) throw ConfigError("torus_kmax must be >= 0");
  if (amplitude < 0.0) throw ConfigError("amplitude must be >= 0");
}

FormField harmonic_representative(const QuadratureGrid& grid, const CalibrationClass& c) {
  FormField omega(grid, 3);
  // Component order (theta phi x, theta phi y, theta x y, phi x y).
  omega.comp(0) = c.a * grid.sin_theta();
  omega.comp(1) = c.b * grid.sin_theta();
  return omega;
}

double keyed_uniform(std::uint64_t seed, std::uint64_t tag, std::uint64_t counter) {
  // splitmix64 over a mixed key.
  std::uint64_t z = seed ^ (tag * 0x9E3779B97F4A7C15ULL) ^ (counter * 0xBF58476D1CE4E5B9ULL);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z = z ^ (z >> 31);
  return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
}

namespace {

/// Scalar dictionary: embedding-coordinate monomials times torus Fourier
/// modes. Smooth across the poles by construction.
struct ScalarDictionary {
  std::vector<Eigen::ArrayXd> entries;
};

ScalarDictionary build_scalars(const QuadratureGrid& g, const PotentialSpec& spec) {
  const Eigen::Index n = g.size();
  Eigen::ArrayXd u(n), v(n), w(n), xs(n), ys(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point p = g.point(i);
    u[i] = std::sin(p.theta) * std::cos(p.phi);
    v[i] = std::sin(p.theta) * std::sin(p.phi);
    w[i] = std::cos(p.theta);
    xs[i] = p.x;
    ys[i] = p.y;
  }
  // Monomials u^p v^q w^r with p+q+r <= D, lexicographic in (p,q,r).
  std::vector<Eigen::ArrayXd> monos;
  for (int p = 0; p <= spec.sphere_degree; ++p) {
    for (int q = 0; p + q <= spec.sphere_degree; ++q) {
      for (int r = 0; p + q + r <= spec.sphere_degree; ++r) {
        Eigen::ArrayXd m = Eigen::ArrayXd::Ones(n);
        for (int k = 0; k < p; ++k) m *= u;
        for (int k = 0; k < q; ++k) m *= v;
        for (int k = 0; k < r; ++k) m *= w;
        monos.push_back(std::move(m));
      }
    }
  }
  // Torus modes 1, cos(jx), sin(jx) for j = 1..K, per coordinate.
  auto modes = [&](const Eigen::ArrayXd& coord) {
    std::vector<Eigen::ArrayXd> out;
    out.push_back(Eigen::ArrayXd::Ones(n));
    for (int j = 1; j <= spec.torus_kmax; ++j) {
      out.push_back((static_cast<double>(j) * coord).cos());
      out.push_back((static_cast<double>(j) * coord).sin());
    }
    return out;
  };
  const auto mx = modes(xs);
  const auto my = modes(ys);

  ScalarDictionary dict;
  dict.entries.reserve(monos.size() * mx.size() * my.size());
  for (const auto& m : monos)
    for (const auto& fx : mx)
      for (const auto& fy : my) dict.entries.push_back(m * fx * fy);
  return dict;
}

/// The eight 2-form families multiplying each dictionary scalar:
/// sin(theta) dtheta^dphi, dx^dy, and d(alpha_s)^dx, d(alpha_s)^dy for the
/// embedding coordinates alpha_s in {u, v, w}.
std::vector<FormField> build_eta_bases(const QuadratureGrid& g) {
  const Eigen::Index n = g.size();
  Eigen::ArrayXd cphi(n), sphi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point p = g.point(i);
    cphi[i] = std::cos(p.phi);
    sphi[i] = std::sin(p.phi);
  }
  FormField du(g, 1), dv(g, 1), dw(g, 1);
  du.comp(kTheta) = g.cos_theta() * cphi;
  du.comp(kPhi) = -g.sin_theta() * sphi;
  dv.comp(kTheta) = g.cos_theta() * sphi;
  dv.comp(kPhi) = g.sin_theta() * cphi;
  dw.comp(kTheta) = -g.sin_theta();

  FormField dx(g, 1), dy(g, 1);
  dx.comp(kX).setOnes();
  dy.comp(kY).setOnes();

  std::vector<FormField> bases;
  FormField vol_s2(g, 2); // index (theta, phi) is component 0
  vol_s2.comp(0) = g.sin_theta();
  bases.push_back(vol_s2);
  FormField dxdy(g, 2); // component (x, y) is index 5
  dxdy.comp(5).setOnes();
  bases.push_back(dxdy);
  for (const FormField* a : {&du, &dv, &dw}) {
    bases.push_back(wedge(*a, dx));
    bases.push_back(wedge(*a, dy));
  }
  return bases;
}

} // namespace

Potentials sample_potentials(const QuadratureGrid& grid, const PotentialSpec& spec) {
  spec.validate();
  const ScalarDictionary dict = build_scalars(grid, spec);
  const std::vector<FormField> bases = build_eta_bases(grid);
  const double scale =
      spec.amplitude / std::sqrt(static_cast<double>(dict.entries.size() * bases.size()));

  FormField eta(grid, 2);
  if (spec.amplitude > 0.0) {
    for (std::size_t fam = 0; fam < bases.size(); ++fam) {
      const FormField& base = bases[fam];
      for (std::size_t s = 0; s < dict.entries.size(); ++s) {
        const double c = scale * keyed_uniform(spec.seed, fam + 1, s);
        for (int comp = 0; comp < base.component_count(); ++comp) {
          if (base.comp(comp).abs().maxCoeff() == 0.0) continue;
          eta.comp(comp) += c * (dict.entries[s] * base.comp(comp));
        }
      }
    }
  }

  FormField mu(grid, 4);
  if (spec.amplitude > 0.0) {
    const double mscale = spec.amplitude / std::sqrt(static_cast<double>(dict.entries.size()));
    for (std::size_t s = 0; s < dict.entries.size(); ++s) {
      const double c = mscale * keyed_uniform(spec.seed, 101, s);
      mu.comp(0) += c * (dict.entries[s] * grid.sin_theta());
    }
  }
  return Potentials{std::move(eta), std::move(mu)};
}

CalibrationClass harmonic_coefficients(const FormField& tau) {
  if (tau.degree() != 3) throw DomainError("hodge_project expects a 3-form");
  const QuadratureGrid& g = tau.grid();
  const FormField h1 = harmonic_representative(g, CalibrationClass{1.0, 0.0});
  const FormField h2 = harmonic_representative(g, CalibrationClass{0.0, 1.0});
  const double n1 = l2_inner(h1, h1);
  const double n2 = l2_inner(h2, h2);
  return CalibrationClass{l2_inner(tau, h1) / n1, l2_inner(tau, h2) / n2};
}

FormField hodge_project(const FormField& tau) {
  const CalibrationClass c = harmonic_coefficients(tau);
  return harmonic_representative(tau.grid(), c);
}

AdmissibleTorsion build_admissible_torsion(const QuadratureGrid& grid, const CalibrationClass& c,
                                           const FormField& eta, const FormField& mu) {
  c.require_nontrivial();
  grid.check_same(eta.grid());
  grid.check_same(mu.grid());
  if (eta.degree() != 2) throw ShapeError("eta must be a 2-form");
  if (mu.degree() != 4) throw ShapeError("mu must be a 4-form");

  FormField omega = harmonic_representative(grid, c);
  FormField t_flat = omega;
  t_flat += exterior_derivative(eta);
  t_flat += codifferential(mu);

  AdmissibleTorsion out{c,
                        std::move(t_flat),
                        std::move(omega),
                        eta,
                        mu,
                        TorsionField(grid),
                        TorsionField(grid)};
  out.tensor = form_to_torsion(out.t_flat);
  out.tensor_harmonic = form_to_torsion(out.harmonic_part);
  return out;
}

} // namespace cclab
