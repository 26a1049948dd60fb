#include "watatani/group.hpp"

#include <algorithm>
#include <set>

namespace wat {

FiniteGroup::FiniteGroup(std::vector<std::string> labels, std::vector<std::vector<int>> table)
    : labels_(std::move(labels)), table_(std::move(table)) {
  const int n = static_cast<int>(table_.size());
  if (n == 0) throw Error("group table is empty");
  if (static_cast<int>(labels_.size()) != n) throw Error("group needs one label per element");
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size())
    throw Error("group labels must be distinct");
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n) throw Error("group table must be square");
    for (int v : row)
      if (v < 0 || v >= n) throw Error("group table entry out of range");
  }
  identity_ = -1;
  for (int e = 0; e < n && identity_ < 0; ++e) {
    bool ok = true;
    for (int g = 0; g < n && ok; ++g) ok = table_[e][g] == g && table_[g][e] == g;
    if (ok) identity_ = e;
  }
  if (identity_ < 0) throw Error("group table has no identity element");
  inverse_.assign(n, -1);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      if (table_[g][h] == identity_ && table_[h][g] == identity_) inverse_[g] = h;
  for (int g = 0; g < n; ++g)
    if (inverse_[g] < 0) throw Error("group element " + labels_[g] + " has no inverse");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          throw Error("group table is not associative at (" + labels_[a] + ", " + labels_[b] + ", " + labels_[c] + ")");
}

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw Error("cyclic group needs n >= 1");
  std::vector<std::string> labels;
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    labels.push_back(std::to_string(a));
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  }
  return FiniteGroup(labels, t);
}

FiniteGroup FiniteGroup::klein() {
  std::vector<std::vector<int>> t(4, std::vector<int>(4));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) t[a][b] = a ^ b;
  return FiniteGroup({"e", "a", "b", "ab"}, t);
}

FiniteGroup FiniteGroup::dihedral(int n) {
  if (n < 1) throw Error("dihedral group needs n >= 1");
  // r^k s^m at index k + n m.
  std::vector<std::string> labels;
  for (int m = 0; m < 2; ++m)
    for (int k = 0; k < n; ++k) labels.push_back("r" + std::to_string(k) + (m ? "s" : ""));
  std::vector<std::vector<int>> t(2 * n, std::vector<int>(2 * n));
  for (int x = 0; x < 2 * n; ++x)
    for (int y = 0; y < 2 * n; ++y) {
      const int a = x % n, b = x / n, c = y % n, d = y / n;
      const int k = ((a + (b ? -c : c)) % n + n) % n;
      t[x][y] = k + n * ((b + d) % 2);
    }
  return FiniteGroup(labels, t);
}

FiniteGroup FiniteGroup::quaternion() {
  // Units 1, i, j, k at 0..3; index 4 + q is -q.
  static const int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int unit_sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      const int p = x % 4, q = y % 4;
      int s = unit_sign[p][q] * (x >= 4 ? -1 : 1) * (y >= 4 ? -1 : 1);
      t[x][y] = unit_mul[p][q] + (s < 0 ? 4 : 0);
    }
  return FiniteGroup({"1", "i", "j", "k", "-1", "-i", "-j", "-k"}, t);
}

FiniteGroup FiniteGroup::product(const FiniteGroup& a, const FiniteGroup& b) {
  const int na = a.order(), nb = b.order();
  std::vector<std::string> labels;
  std::vector<std::vector<int>> t(na * nb, std::vector<int>(na * nb));
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < nb; ++y) labels.push_back("(" + a.labels()[x] + "," + b.labels()[y] + ")");
  for (int p = 0; p < na * nb; ++p)
    for (int q = 0; q < na * nb; ++q) t[p][q] = a.mul(p / nb, q / nb) * nb + b.mul(p % nb, q % nb);
  return FiniteGroup(labels, t);
}

int FiniteGroup::element_order(int g) const {
  int k = 1;
  for (int x = g; x != identity_; x = mul(x, g)) ++k;
  return k;
}

int FiniteGroup::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw Error("unknown group element '" + label + "'");
  return static_cast<int>(it - labels_.begin());
}

namespace {

bool extend_iso(const FiniteGroup& a, const FiniteGroup& b, std::vector<int>& f, std::vector<bool>& used, int next) {
  const int n = a.order();
  if (next == n) return true;
  for (int y = 0; y < n; ++y) {
    if (used[y] || a.element_order(next) != b.element_order(y)) continue;
    f[next] = y;
    // Products of assigned elements must map to products of images.
    bool ok = true;
    for (int x = 0; x <= next && ok; ++x)
      for (int z = 0; z <= next && ok; ++z) {
        const int p = a.mul(x, z);
        if (p <= next && f[p] != b.mul(f[x], f[z])) ok = false;
      }
    if (ok) {
      used[y] = true;
      if (extend_iso(a, b, f, used, next + 1)) return true;
      used[y] = false;
    }
    f[next] = -1;
  }
  return false;
}

}  // namespace

std::optional<std::vector<int>> find_isomorphism(const FiniteGroup& a, const FiniteGroup& b) {
  if (a.order() != b.order()) return std::nullopt;
  std::vector<int> f(a.order(), -1);
  std::vector<bool> used(a.order(), false);
  if (!extend_iso(a, b, f, used, 0)) return std::nullopt;
  return f;
}

StarHomomorphism inner_automorphism(const MultiMatrixAlgebra& c, const Element& u) {
  if (!c.contains(u)) throw Error("unitary does not belong to the algebra");
  if ((u * u.adjoint() - c.identity()).norm() > 1e-9) throw Error("Ad(u) needs a unitary u");
  std::vector<std::vector<Frame>> frames(c.block_count());
  for (int i = 0; i < c.block_count(); ++i) frames[i].push_back(Frame{i, u.blocks[i]});
  return StarHomomorphism(c, c, frames);
}

CocycleAction trivial_action(const FiniteGroup& g, const MultiMatrixAlgebra& c) {
  CocycleAction a{g, c, {}, {}};
  a.alpha.assign(g.order(), StarHomomorphism::identity(c));
  a.sigma.assign(static_cast<std::size_t>(g.order() * g.order()), c.identity());
  return a;
}

CocycleAction inner_action(const FiniteGroup& g, const MultiMatrixAlgebra& c, const std::vector<Element>& u,
                           const std::vector<cd>& scalar_cocycle) {
  if (static_cast<int>(u.size()) != g.order()) throw Error("inner action needs one unitary per group element");
  CocycleAction a = trivial_action(g, c);
  for (int k = 0; k < g.order(); ++k) a.alpha[k] = inner_automorphism(c, u[k]);
  if (!scalar_cocycle.empty()) {
    if (scalar_cocycle.size() != a.sigma.size()) throw Error("scalar cocycle needs |G|^2 entries");
    for (std::size_t k = 0; k < a.sigma.size(); ++k) a.sigma[k] = scalar_cocycle[k] * c.identity();
  }
  return a;
}

CocycleAction permutation_action(const FiniteGroup& g, int k, const std::vector<std::vector<int>>& perm) {
  if (static_cast<int>(perm.size()) != g.order()) throw Error("permutation action needs one permutation per element");
  const MultiMatrixAlgebra c(std::vector<int>(k, 1));
  CocycleAction a = trivial_action(g, c);
  for (int x = 0; x < g.order(); ++x) {
    if (static_cast<int>(perm[x].size()) != k) throw Error("permutation has the wrong length");
    std::vector<std::vector<Frame>> frames(k);
    for (int i = 0; i < k; ++i) {
      if (perm[x][i] < 0 || perm[x][i] >= k) throw Error("permutation entry out of range");
      frames[i].push_back(Frame{perm[x][i], Mat::Identity(1, 1)});
    }
    a.alpha[x] = StarHomomorphism(c, c, frames);
  }
  return a;
}

bool CocycleReport::ok(double tol) const { return failing(tol).empty(); }

std::string CocycleReport::failing(double tol) const {
  if (automorphism > tol) return "automorphism";
  if (unitary > tol) return "unitary sigma";
  if (normalization > tol) return "normalization sigma(g,e) = sigma(e,g) = 1";
  if (composition > tol) return "composition alpha_g alpha_h = Ad(sigma(g,h)) alpha_gh";
  if (cocycle > tol) return "cocycle sigma(g,h) sigma(gh,k) = alpha_g(sigma(h,k)) sigma(g,hk)";
  return {};
}

CocycleReport verify_cocycle_action(const CocycleAction& a) {
  const auto& g = a.group;
  const auto& c = a.algebra;
  const int n = g.order();
  if (static_cast<int>(a.alpha.size()) != n || static_cast<int>(a.sigma.size()) != n * n)
    throw Error("action needs |G| automorphisms and |G|^2 cocycle values");
  CocycleReport r;
  const Element one = c.identity();
  const auto units = matrix_units(c);
  for (const auto& al : a.alpha) {
    if (!(al.source() == c) || !(al.target() == c)) throw Error("alpha must map C to C");
    r.automorphism = std::max(r.automorphism, al.relation_residual());
    const Eigen::MatrixXi m = al.multiplicities();
    for (int i = 0; i < c.block_count(); ++i)
      if (m.row(i).sum() != 1 || m.col(i).sum() != 1) r.automorphism = std::max(r.automorphism, 1.0);
  }
  for (const auto& s : a.sigma) {
    if (!c.contains(s)) throw Error("sigma value does not belong to C");
    r.unitary = std::max({r.unitary, (s * s.adjoint() - one).norm(), (s.adjoint() * s - one).norm()});
  }
  const int e = g.identity();
  for (int x = 0; x < n; ++x)
    r.normalization = std::max({r.normalization, (a.sig(x, e) - one).norm(), (a.sig(e, x) - one).norm()});
  for (const auto& u : units) r.normalization = std::max(r.normalization, (a.alpha[e].apply(u) - u).norm());

  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const Element& s = a.sig(x, y);
      const Element sa = s.adjoint();
      for (const auto& u : units) {
        const Element lhs = a.alpha[x].apply(a.alpha[y].apply(u));
        const Element rhs = s * a.alpha[g.mul(x, y)].apply(u) * sa;
        r.composition = std::max(r.composition, (lhs - rhs).norm());
      }
      for (int z = 0; z < n; ++z) {
        const Element lhs = s * a.sig(g.mul(x, y), z);
        const Element rhs = a.alpha[x].apply(a.sig(y, z)) * a.sig(x, g.mul(y, z));
        r.cocycle = std::max(r.cocycle, (lhs - rhs).norm());
      }
    }
  return r;
}

AutomorphismReport classify_automorphism(const StarHomomorphism& theta, double tol) {
  const auto& c = theta.source();
  if (!(theta.target() == c)) throw Error("automorphism must map an algebra to itself");
  if (theta.relation_residual() > tol) throw Error("map is not a *-automorphism");
  const Eigen::MatrixXi m = theta.multiplicities();
  for (int i = 0; i < c.block_count(); ++i)
    if (m.row(i).sum() != 1 || m.col(i).sum() != 1) throw Error("map is not bijective");

  const int d = c.total_dim();
  const auto gens = c.generators();
  Mat sys(static_cast<Eigen::Index>(gens.size()) * d, d);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const Element tx = theta.apply(gens[k]);
    for (int col = 0; col < d; ++col) {
      Vec v = Vec::Zero(d);
      v(col) = 1.0;
      const Element y = c.from_coords(v);
      sys.block(static_cast<Eigen::Index>(k) * d, col, d, 1) = c.coords(y * gens[k] - tx * y);
    }
  }
  const Mat ker = null_space(sys);
  AutomorphismReport r;
  r.intertwiner_dim = static_cast<int>(ker.cols());
  r.free = r.intertwiner_dim == 0;
  r.trivial_center = c.block_count() == 1;
  if (!r.free) {
    Rng rng(0xA11CE);
    for (int attempt = 0; attempt < 4 && !r.inner; ++attempt) {
      Vec coef(ker.cols());
      for (Eigen::Index k = 0; k < coef.size(); ++k) coef(k) = rng.complex_normal();
      const Element y = c.from_coords(ker * coef);
      bool invertible = true;
      for (const auto& b : y.blocks) {
        Eigen::JacobiSVD<Mat> svd(b);
        const auto& s = svd.singularValues();
        if (s(s.size() - 1) <= 1e-8 * std::max(1.0, s(0))) invertible = false;
      }
      if (!invertible) continue;
      // y x y^{-1} = θ(x) with θ *-preserving forces y*y central, so the
      // polar part implements θ.
      Element w;
      for (const auto& b : y.blocks) w.blocks.push_back(polar_unitary(b));
      double res = 0.0;
      for (const auto& u : matrix_units(c)) res = std::max(res, (theta.apply(u) - w * u * w.adjoint()).norm());
      r.witness_residual = res;
      if (res <= tol) {
        r.inner = true;
        r.witness = w;
      }
    }
  }
  if (r.trivial_center) r.consistent = (r.inner != r.free);
  return r;
}

}  // namespace wat
