#include "cclab/forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

namespace cclab {

namespace {

int binomial4(int k) {
  static constexpr int c[5] = {1, 4, 6, 4, 1};
  return c[k];
}

std::vector<std::array<int, 4>> make_tuples(int degree) {
  std::vector<std::array<int, 4>> out;
  // Lexicographic enumeration of strictly increasing tuples from {0,1,2,3}.
  std::array<int, 4> idx{-1, -1, -1, -1};
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == degree) {
      out.push_back(idx);
      return;
    }
    for (int v = start; v < 4; ++v) {
      idx[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, v + 1);
    }
  };
  if (degree == 0) {
    out.push_back(idx);
  } else {
    rec(0, 0);
  }
  return out;
}

/// Sign of the permutation given as a sequence of distinct ints; 0 if repeats.
int permutation_sign(const int* seq, int n) {
  int sign = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (seq[i] == seq[j]) return 0;
      if (seq[i] > seq[j]) sign = -sign;
    }
  }
  return sign;
}

} // namespace

int form_component_count(int degree) {
  if (degree < 0 || degree > 4) throw DomainError("form degree must be in 0..4");
  return binomial4(degree);
}

const std::vector<std::array<int, 4>>& form_index_tuples(int degree) {
  if (degree < 0 || degree > 4) throw DomainError("form degree must be in 0..4");
  static const std::array<std::vector<std::array<int, 4>>, 5> tables = [] {
    std::array<std::vector<std::array<int, 4>>, 5> t;
    for (int k = 0; k <= 4; ++k) t[static_cast<std::size_t>(k)] = make_tuples(k);
    return t;
  }();
  return tables[static_cast<std::size_t>(degree)];
}

int form_component_index(int degree, const std::array<int, 4>& tuple) {
  const auto& tuples = form_index_tuples(degree);
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    bool same = true;
    for (int d = 0; d < degree; ++d)
      if (tuples[i][static_cast<std::size_t>(d)] != tuple[static_cast<std::size_t>(d)]) same = false;
    if (same) return static_cast<int>(i);
  }
  throw DomainError("index tuple not found");
}

FormField::FormField(const QuadratureGrid& grid, int degree) : grid_(&grid), degree_(degree) {
  const int nc = form_component_count(degree);
  comps_.resize(static_cast<std::size_t>(nc));
  for (auto& c : comps_) c = Eigen::ArrayXd::Zero(grid.size());
}

int FormField::phi_weight(int i) const {
  const auto& tup = form_index_tuples(degree_)[static_cast<std::size_t>(i)];
  int w = 0;
  for (int d = 0; d < degree_; ++d)
    if (tup[static_cast<std::size_t>(d)] == kPhi) ++w;
  return w;
}

int FormField::theta_weight(int i) const {
  const auto& tup = form_index_tuples(degree_)[static_cast<std::size_t>(i)];
  int q = 0;
  for (int d = 0; d < degree_; ++d)
    if (tup[static_cast<std::size_t>(d)] == kTheta) ++q;
  return q;
}

FormField& FormField::operator+=(const FormField& other) {
  grid_->check_same(other.grid());
  if (degree_ != other.degree_) throw ShapeError("form degrees differ");
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += other.comps_[i];
  return *this;
}

FormField& FormField::operator-=(const FormField& other) {
  grid_->check_same(other.grid());
  if (degree_ != other.degree_) throw ShapeError("form degrees differ");
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= other.comps_[i];
  return *this;
}

FormField& FormField::operator*=(double s) {
  for (auto& c : comps_) c *= s;
  return *this;
}

double FormField::sup_norm() const {
  double m = 0.0;
  for (const auto& c : comps_) m = std::max(m, c.abs().maxCoeff());
  return m;
}

TorsionField::TorsionField(const QuadratureGrid& grid) : grid_(&grid) {
  comps_.resize(64);
  nonzero_.assign(64, false);
  for (auto& c : comps_) c = Eigen::ArrayXd::Zero(grid.size());
}

void TorsionField::refresh_nonzero() {
  for (std::size_t i = 0; i < comps_.size(); ++i)
    nonzero_[i] = comps_[i].abs().maxCoeff() > 0.0;
}

TorsionField& TorsionField::operator+=(const TorsionField& other) {
  grid_->check_same(other.grid());
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += other.comps_[i];
  refresh_nonzero();
  return *this;
}

TorsionField& TorsionField::operator-=(const TorsionField& other) {
  grid_->check_same(other.grid());
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= other.comps_[i];
  refresh_nonzero();
  return *this;
}

TorsionField& TorsionField::operator*=(double s) {
  for (auto& c : comps_) c *= s;
  refresh_nonzero();
  return *this;
}

double TorsionField::sup_norm() const {
  double m = 0.0;
  for (const auto& c : comps_) m = std::max(m, c.abs().maxCoeff());
  return m;
}

bool TorsionField::all_zero() const {
  return std::none_of(nonzero_.begin(), nonzero_.end(), [](bool b) { return b; });
}

FormField wedge(const FormField& a, const FormField& b) {
  a.grid().check_same(b.grid());
  const int p = a.degree(), q = b.degree();
  if (p + q > 4) throw DomainError("wedge degree overflow");
  FormField out(a.grid(), p + q);
  const auto& ta = form_index_tuples(p);
  const auto& tb = form_index_tuples(q);
  for (int ia = 0; ia < a.component_count(); ++ia) {
    for (int ib = 0; ib < b.component_count(); ++ib) {
      int seq[4];
      for (int d = 0; d < p; ++d) seq[d] = ta[static_cast<std::size_t>(ia)][static_cast<std::size_t>(d)];
      for (int d = 0; d < q; ++d) seq[p + d] = tb[static_cast<std::size_t>(ib)][static_cast<std::size_t>(d)];
      const int sign = permutation_sign(seq, p + q);
      if (sign == 0) continue;
      std::array<int, 4> sorted{-1, -1, -1, -1};
      for (int d = 0; d < p + q; ++d) sorted[static_cast<std::size_t>(d)] = seq[d];
      std::sort(sorted.begin(), sorted.begin() + (p + q));
      const int ic = form_component_index(p + q, sorted);
      out.comp(ic) += sign * (a.comp(ia) * b.comp(ib));
    }
  }
  return out;
}

FormField exterior_derivative(const FormField& a) {
  const int k = a.degree();
  if (k >= 4) throw DomainError("exterior derivative of a top form");
  const QuadratureGrid& g = a.grid();
  FormField out(g, k + 1);
  const auto& ta = form_index_tuples(k);
  for (int ia = 0; ia < a.component_count(); ++ia) {
    const auto& tup = ta[static_cast<std::size_t>(ia)];
    const int w = a.phi_weight(ia);
    const int q = a.theta_weight(ia);
    for (int dir = 0; dir < 4; ++dir) {
      bool present = false;
      for (int d = 0; d < k; ++d)
        if (tup[static_cast<std::size_t>(d)] == dir) present = true;
      if (present) continue;
      // dx^dir ^ dx^I: insertion position fixes the sign.
      int pos = 0;
      std::array<int, 4> merged{-1, -1, -1, -1};
      for (int d = 0; d < k; ++d)
        if (tup[static_cast<std::size_t>(d)] < dir) ++pos;
      int m = 0;
      for (int d = 0; d < k; ++d) {
        if (d == pos) merged[static_cast<std::size_t>(m++)] = dir;
        merged[static_cast<std::size_t>(m++)] = tup[static_cast<std::size_t>(d)];
      }
      if (m == k) merged[static_cast<std::size_t>(m)] = dir;
      const double sign = (pos % 2 == 0) ? 1.0 : -1.0;
      const int ic = form_component_index(k + 1, merged);
      out.comp(ic) += sign * g.deriv(dir, a.comp(ia), w, q);
    }
  }
  return out;
}

FormField hodge_star(const FormField& a) {
  const int k = a.degree();
  const QuadratureGrid& g = a.grid();
  FormField out(g, 4 - k);
  const auto& ta = form_index_tuples(k);
  for (int ia = 0; ia < a.component_count(); ++ia) {
    const auto& tup = ta[static_cast<std::size_t>(ia)];
    std::array<int, 4> comp_tuple{-1, -1, -1, -1};
    int seq[4];
    int m = 0;
    bool in_i[4] = {false, false, false, false};
    for (int d = 0; d < k; ++d) {
      seq[d] = tup[static_cast<std::size_t>(d)];
      in_i[seq[d]] = true;
    }
    for (int v = 0; v < 4; ++v)
      if (!in_i[v]) {
        comp_tuple[static_cast<std::size_t>(m)] = v;
        seq[k + m] = v;
        ++m;
      }
    const int sign = permutation_sign(seq, 4);
    const int ic = form_component_index(4 - k, comp_tuple);
    // sqrt(det g) times the inverse-metric factors of the picked indices;
    // with the diagonal metric only a phi index contributes 1/sin^2.
    if (in_i[kPhi]) {
      out.comp(ic) += sign * (a.comp(ia) / g.sin_theta());
    } else {
      out.comp(ic) += sign * (a.comp(ia) * g.sin_theta());
    }
  }
  return out;
}

FormField codifferential(const FormField& a) {
  if (a.degree() < 1) throw DomainError("codifferential of a 0-form");
  // delta = -*d* on a 4-dimensional Riemannian manifold, every degree.
  FormField out = hodge_star(exterior_derivative(hodge_star(a)));
  out *= -1.0;
  return out;
}

double l2_inner(const FormField& a, const FormField& b) {
  a.grid().check_same(b.grid());
  if (a.degree() != b.degree()) throw DomainError("l2_inner degree mismatch");
  const FormField top = wedge(a, hodge_star(b));
  // Top-form coefficient carries the sin(theta) volume density already
  // contained in the quadrature weights.
  const Eigen::ArrayXd density = top.comp(0) / a.grid().sin_theta();
  return a.grid().integrate(density);
}

double l2_norm(const FormField& a) { return std::sqrt(std::max(0.0, l2_inner(a, a))); }

VectorField sharp(const FormField& one_form) {
  if (one_form.degree() != 1) throw DomainError("sharp expects a 1-form");
  const QuadratureGrid& g = one_form.grid();
  VectorField v{&g, {}};
  for (int i = 0; i < 4; ++i) {
    if (i == kPhi) {
      v.comps[static_cast<std::size_t>(i)] = one_form.comp(i) / (g.sin_theta() * g.sin_theta());
    } else {
      v.comps[static_cast<std::size_t>(i)] = one_form.comp(i);
    }
  }
  return v;
}

FormField flat(const VectorField& v) {
  const QuadratureGrid& g = *v.grid;
  FormField a(g, 1);
  for (int i = 0; i < 4; ++i) {
    if (i == kPhi) {
      a.comp(i) = v.comps[static_cast<std::size_t>(i)] * g.sin_theta() * g.sin_theta();
    } else {
      a.comp(i) = v.comps[static_cast<std::size_t>(i)];
    }
  }
  return a;
}

TorsionField form_to_torsion(const FormField& tau) {
  if (tau.degree() != 3) throw DomainError("form_to_torsion expects a 3-form");
  const QuadratureGrid& g = tau.grid();
  TorsionField t(g);
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        int seq[3] = {i, j, k};
        const int sign = permutation_sign(seq, 3);
        if (sign == 0) continue;
        std::array<int, 4> sorted{i, j, k, -1};
        std::sort(sorted.begin(), sorted.begin() + 3);
        const int ic = form_component_index(3, sorted);
        if (k == kPhi) {
          t.comp(k, i, j) = sign * tau.comp(ic) / (g.sin_theta() * g.sin_theta());
        } else {
          t.comp(k, i, j) = sign * tau.comp(ic);
        }
      }
    }
  }
  t.refresh_nonzero();
  return t;
}

double form_value_3(const FormField& tau, Eigen::Index node, int i, int j, int k) {
  if (tau.degree() != 3) throw DomainError("form_value_3 expects a 3-form");
  int seq[3] = {i, j, k};
  const int sign = permutation_sign(seq, 3);
  if (sign == 0) return 0.0;
  std::array<int, 4> sorted{i, j, k, -1};
  std::sort(sorted.begin(), sorted.begin() + 3);
  const int ic = form_component_index(3, sorted);
  return sign * tau.comp(ic)[node];
}

void dump_form_csv(const FormField& a, const std::string& path) {
  std::ofstream out(path);
  out << "node,theta,phi,x,y";
  const auto& tuples = form_index_tuples(a.degree());
  static const char* names = "tpxy";
  for (int c = 0; c < a.component_count(); ++c) {
    out << ",c";
    for (int d = 0; d < a.degree(); ++d) out << names[tuples[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)]];
    if (a.degree() == 0) out << "0";
  }
  out << "\n";
  char buf[64];
  for (Eigen::Index n = 0; n < a.grid().size(); ++n) {
    const Point p = a.grid().point(n);
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g,%.17g",
                  static_cast<long long>(n), p.theta, p.phi, p.x, p.y);
    out << buf;
    for (int c = 0; c < a.component_count(); ++c) {
      std::snprintf(buf, sizeof(buf), ",%.17g", a.comp(c)[n]);
      out << buf;
    }
    out << "\n";
  }
}

} // namespace cclab
