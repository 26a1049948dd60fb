#include "watatani/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace wat {

SubalgebraBasis::SubalgebraBasis(MultiMatrixAlgebra ambient, Mat orthonormal_coords)
    : ambient_(std::move(ambient)), q_(std::move(orthonormal_coords)) {
  if (q_.rows() != ambient_.total_dim()) throw Error("basis coordinates have wrong length");
}

SubalgebraBasis SubalgebraBasis::from_spanning(const MultiMatrixAlgebra& ambient, const std::vector<Element>& spanning) {
  Mat m(ambient.total_dim(), static_cast<Eigen::Index>(spanning.size()));
  for (std::size_t k = 0; k < spanning.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = ambient.coords(spanning[k]);
  return SubalgebraBasis(ambient, column_span(m));
}

std::vector<Element> SubalgebraBasis::elements() const {
  std::vector<Element> out;
  for (int k = 0; k < dim(); ++k) out.push_back(element(k));
  return out;
}

Element SubalgebraBasis::project(const Element& x) const {
  const Vec v = ambient_.coords(x);
  return ambient_.from_coords(q_ * (q_.adjoint() * v));
}

double SubalgebraBasis::residual(const Element& x) const {
  const Vec v = ambient_.coords(x);
  return (v - q_ * (q_.adjoint() * v)).norm();
}

bool SubalgebraBasis::contains(const Element& x, double tol) const {
  return residual(x) <= tol * std::max(1.0, x.norm());
}

double SubalgebraBasis::closure_residual() const {
  double worst = residual(ambient_.identity());
  const auto el = elements();
  for (const auto& a : el) {
    worst = std::max(worst, residual(a.adjoint()));
    for (const auto& b : el) worst = std::max(worst, residual(a * b));
  }
  return worst;
}

SpanComparison compare_spans(const SubalgebraBasis& a, const SubalgebraBasis& b, double tol) {
  if (!(a.ambient() == b.ambient())) throw Error("spans live in different algebras");
  SpanComparison c;
  c.dim_a = a.dim();
  c.dim_b = b.dim();
  const Mat& qa = a.coords();
  const Mat& qb = b.coords();
  const double ra = qa.cols() ? (qa - qb * (qb.adjoint() * qa)).norm() : 0.0;
  const double rb = qb.cols() ? (qb - qa * (qa.adjoint() * qb)).norm() : 0.0;
  c.residual = std::max(ra, rb);
  c.equal = c.dim_a == c.dim_b && c.residual <= tol * std::max(1.0, std::sqrt(static_cast<double>(c.dim_a)));
  return c;
}

// vec_row(Y Z - Z Y) = (Y ⊗ I - I ⊗ Y^T) vec_row(Z).
static Mat commutator_operator(const Mat& y) {
  const Eigen::Index n = y.rows();
  const Mat id = Mat::Identity(n, n);
  return kron(y, id) - kron(id, y.transpose());
}

SubalgebraBasis relative_commutant(const UnitalInclusion& inc) {
  const auto& a = inc.ambient();
  const auto& b = inc.sub();
  std::vector<Element> gens;
  for (const auto& g : b.generators()) gens.push_back(inc.embed(g));

  std::vector<Vec> cols;
  for (int j = 0; j < a.block_count(); ++j) {
    const int n = a.block_size(j);
    Mat stacked(static_cast<Eigen::Index>(gens.size()) * n * n, n * n);
    for (std::size_t g = 0; g < gens.size(); ++g)
      stacked.middleRows(static_cast<Eigen::Index>(g) * n * n, n * n) = commutator_operator(gens[g].blocks[j]);
    const Mat ker = null_space(stacked);
    for (Eigen::Index k = 0; k < ker.cols(); ++k) {
      Vec v = Vec::Zero(a.total_dim());
      v.segment(a.offset(j), n * n) = ker.col(k);
      cols.push_back(v);
    }
  }
  Mat q(a.total_dim(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) q.col(static_cast<Eigen::Index>(k)) = cols[k];
  return SubalgebraBasis(a, q);
}

UnitalInclusion relative_commutant_decomposed(const StarHomomorphism& emb) {
  const auto& a = emb.target();
  const auto& b = emb.source();
  std::vector<int> dims;
  std::vector<std::vector<Frame>> frames;
  for (int j = 0; j < a.block_count(); ++j)
    for (int i = 0; i < b.block_count(); ++i) {
      std::vector<const Mat*> copies;
      for (const auto& f : emb.frames()[i])
        if (f.target_block == j) copies.push_back(&f.isometry);
      if (copies.empty()) continue;
      const int r = static_cast<int>(copies.size());
      dims.push_back(r);
      std::vector<Frame> fr;
      for (int kap = 0; kap < b.block_size(i); ++kap) {
        Mat z(a.block_size(j), r);
        for (int rho = 0; rho < r; ++rho) z.col(rho) = copies[rho]->col(kap);
        fr.push_back({j, std::move(z)});
      }
      frames.push_back(std::move(fr));
    }
  return UnitalInclusion(StarHomomorphism(MultiMatrixAlgebra(dims), a, std::move(frames)));
}

SubalgebraBasis center(const MultiMatrixAlgebra& a) {
  std::vector<Element> p;
  for (int i = 0; i < a.block_count(); ++i) p.push_back(a.central_projection(i));
  return SubalgebraBasis::from_spanning(a, p);
}

SubalgebraBasis generated_subalgebra(const MultiMatrixAlgebra& a, const std::vector<Element>& gens) {
  std::vector<Element> g;
  for (const auto& x : gens) {
    if (!a.contains(x)) throw Error("generator is not an element of " + a.describe());
    g.push_back(x);
    g.push_back(x.adjoint());
  }
  SpanBuilder span(a.total_dim());
  std::deque<Element> queue;
  const Element one = a.identity();
  span.add(a.coords(one));
  queue.push_back(one);
  while (!queue.empty()) {
    const Element w = queue.front();
    queue.pop_front();
    for (const auto& x : g) {
      const Element p = w * x;
      const Vec v = a.coords(p);
      if (span.add(v)) queue.push_back(a.from_coords(span.vector(span.size() - 1)));
    }
    if (span.size() == a.total_dim()) break;
  }
  return SubalgebraBasis(a, span.basis());
}

namespace {

/// Generic linear combination of basis elements with real Gaussian weights.
Element random_combination(const SubalgebraBasis& s, Rng& rng, bool complex_weights) {
  Vec w(s.dim());
  for (int k = 0; k < s.dim(); ++k) w(k) = complex_weights ? rng.complex_normal() : cd(rng.normal(), 0.0);
  return s.ambient().from_coords(s.coords() * w);
}

/// Spectral projections of a Hermitian element restricted to the ranges of
/// `support` (an orthonormal basis per ambient block), clustered across
/// blocks.  Each cluster is returned as per-block column sets.
std::vector<Element> spectral_projections(const MultiMatrixAlgebra& amb, const Element& h,
                                          const std::vector<Mat>& support) {
  struct Eig {
    double value;
    int block;
    Vec vec;
  };
  std::vector<Eig> eigs;
  double scale = 0.0;
  for (int j = 0; j < amb.block_count(); ++j) {
    const Mat& u = support[j];
    if (u.cols() == 0) continue;
    const Mat r = u.adjoint() * h.blocks[j] * u;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (r + r.adjoint()));
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      eigs.push_back({es.eigenvalues()(k), j, u * es.eigenvectors().col(k)});
      scale = std::max(scale, std::abs(es.eigenvalues()(k)));
    }
  }
  std::sort(eigs.begin(), eigs.end(), [](const Eig& x, const Eig& y) { return x.value < y.value; });
  std::vector<Element> out;
  const double gap = 1e-6 * std::max(1.0, scale);
  for (std::size_t k = 0; k < eigs.size(); ++k) {
    if (k == 0 || eigs[k].value - eigs[k - 1].value > gap) out.push_back(amb.zero());
    out.back().blocks[eigs[k].block] += eigs[k].vec * eigs[k].vec.adjoint();
  }
  return out;
}

}  // namespace

UnitalInclusion decompose_subalgebra(const SubalgebraBasis& s, double tol) {
  const auto& amb = s.ambient();
  const int m = s.dim();
  if (m == 0) throw Error("cannot decompose the zero subspace");
  if (!s.contains(amb.identity(), 1e-8)) throw Error("subspace does not contain the unit");

  for (int attempt = 0; attempt < 6; ++attempt) {
    Rng rng(0x5EEDULL + static_cast<std::uint64_t>(attempt));

    // Center: elements of S commuting with a few generic elements of S.
    // Generic pairs generate a finite-dimensional C*-algebra.
    std::vector<Element> probes;
    for (int k = 0; k < 3; ++k) probes.push_back(random_combination(s, rng, true));
    std::vector<Element> basis = s.elements();
    Mat stacked(3 * amb.total_dim(), m);
    for (int a = 0; a < m; ++a)
      for (int k = 0; k < 3; ++k)
        stacked.block(k * amb.total_dim(), a, amb.total_dim(), 1) = amb.coords(commutator(basis[a], probes[k]));
    const Mat zc = null_space(stacked);
    const int zdim = static_cast<int>(zc.cols());
    if (zdim == 0) throw NumericalError("center computation failed");

    Element h = amb.zero();
    for (int k = 0; k < zdim; ++k) {
      const Element z = amb.from_coords(s.coords() * zc.col(k));
      h += cd(rng.normal(), 0.0) * (z + z.adjoint());
    }
    std::vector<Mat> full;
    for (int j = 0; j < amb.block_count(); ++j) full.push_back(Mat::Identity(amb.block_size(j), amb.block_size(j)));
    const auto central = spectral_projections(amb, h, full);
    if (static_cast<int>(central.size()) != zdim) continue;

    struct Block {
      int size;
      std::vector<Element> units;  // row-major f_{ab}
      double key;
    };
    std::vector<Block> blocks;
    bool ok = true;
    int total = 0;
    for (const auto& p : central) {
      std::vector<Element> cut;
      for (const auto& x : basis) cut.push_back(p * x);
      const SubalgebraBasis sp = SubalgebraBasis::from_spanning(amb, cut);
      const int d = sp.dim();
      const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
      if (n * n != d) throw Error("central summand of dimension " + std::to_string(d) + " is not a full matrix algebra");
      total += d;

      std::vector<Mat> support;
      for (int j = 0; j < amb.block_count(); ++j) {
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (p.blocks[j] + p.blocks[j].adjoint()));
        std::vector<Eigen::Index> keep;
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
          if (es.eigenvalues()(k) > 0.5) keep.push_back(k);
        Mat u(amb.block_size(j), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t k = 0; k < keep.size(); ++k) u.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
        support.push_back(u);
      }
      const Element y = random_combination(sp, rng, true);
      const auto q = spectral_projections(amb, 0.5 * (y + y.adjoint()), support);
      if (static_cast<int>(q.size()) != n) {
        ok = false;
        break;
      }
      // f_{a1} from q_a S q_1, which is one-dimensional.
      const Element x = random_combination(sp, rng, true);
      std::vector<Element> col(static_cast<std::size_t>(n));
      const double tr1 = frobenius_inner(q[0], q[0]).real();
      for (int a = 0; a < n; ++a) {
        if (a == 0) {
          col[0] = q[0];
          continue;
        }
        const Element w = q[a] * x * q[0];
        const double lam = frobenius_inner(w, w).real() / tr1;
        if (lam < 1e-12) {
          ok = false;
          break;
        }
        col[a] = (1.0 / std::sqrt(lam)) * w;
      }
      if (!ok) break;
      Block blk{n, {}, 0.0};
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) blk.units.push_back(col[a] * col[b].adjoint());
      // Deterministic ordering key: position of the first nonzero coordinate
      // of the central projection.
      const Vec pc = amb.coords(p);
      Eigen::Index first = 0;
      while (first < pc.size() && std::abs(pc(first)) < 0.25) ++first;
      blk.key = static_cast<double>(first);
      blocks.push_back(std::move(blk));
    }
    if (!ok) continue;
    if (total != m) throw Error("subspace is not a *-subalgebra (summands do not exhaust it)");

    std::stable_sort(blocks.begin(), blocks.end(), [](const Block& x, const Block& y) {
      return x.size != y.size ? x.size < y.size : x.key < y.key;
    });
    std::vector<int> dims;
    std::vector<Element> images;
    for (auto& b : blocks) {
      dims.push_back(b.size);
      for (auto& u : b.units) images.push_back(std::move(u));
    }
    const MultiMatrixAlgebra abstract(dims);
    return UnitalInclusion(StarHomomorphism::from_unit_images(abstract, amb, images, std::max(tol, 1e-8)));
  }
  throw NumericalError("could not separate the spectrum of a generic element; subspace may not be a *-subalgebra");
}

}  // namespace wat
