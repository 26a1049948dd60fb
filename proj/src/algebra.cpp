#include "watatani/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace wat {

// ---------------------------------------------------------------- Element

Element Element::adjoint() const {
  Element out;
  out.blocks.reserve(blocks.size());
  for (const auto& b : blocks) out.blocks.push_back(b.adjoint());
  return out;
}

double Element::norm() const {
  double s = 0.0;
  for (const auto& b : blocks) s += b.squaredNorm();
  return std::sqrt(s);
}

bool Element::same_shape(const Element& o) const {
  if (blocks.size() != o.blocks.size()) return false;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (blocks[i].rows() != o.blocks[i].rows()) return false;
  return true;
}

static void require_shape(const Element& a, const Element& b) {
  if (!a.same_shape(b)) throw Error("element shapes differ");
}

Element operator+(const Element& a, const Element& b) {
  require_shape(a, b);
  Element out = a;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) out.blocks[i] += b.blocks[i];
  return out;
}

Element operator-(const Element& a, const Element& b) {
  require_shape(a, b);
  Element out = a;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) out.blocks[i] -= b.blocks[i];
  return out;
}

Element operator*(const Element& a, const Element& b) {
  require_shape(a, b);
  Element out;
  out.blocks.reserve(a.blocks.size());
  for (std::size_t i = 0; i < a.blocks.size(); ++i) out.blocks.push_back(a.blocks[i] * b.blocks[i]);
  return out;
}

Element operator*(cd s, const Element& a) {
  Element out = a;
  for (auto& b : out.blocks) b *= s;
  return out;
}

Element& operator+=(Element& a, const Element& b) {
  require_shape(a, b);
  for (std::size_t i = 0; i < a.blocks.size(); ++i) a.blocks[i] += b.blocks[i];
  return a;
}

cd frobenius_inner(const Element& a, const Element& b) {
  require_shape(a, b);
  cd s = 0.0;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) s += (a.blocks[i].adjoint() * b.blocks[i]).trace();
  return s;
}

double operator_norm(const Element& a) {
  double m = 0.0;
  for (const auto& b : a.blocks) m = std::max(m, operator_norm(b));
  return m;
}

Element commutator(const Element& a, const Element& b) { return a * b - b * a; }

// ---------------------------------------------------- MultiMatrixAlgebra

MultiMatrixAlgebra::MultiMatrixAlgebra(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw Error("algebra needs at least one block");
  int off = 0;
  for (int n : dims_) {
    if (n <= 0) throw Error("block sizes must be positive");
    offsets_.push_back(off);
    off += n * n;
  }
  total_dim_ = off;
}

int MultiMatrixAlgebra::rep_dim() const {
  int s = 0;
  for (int n : dims_) s += n;
  return s;
}

Element MultiMatrixAlgebra::zero() const {
  Element out;
  for (int n : dims_) out.blocks.push_back(Mat::Zero(n, n));
  return out;
}

Element MultiMatrixAlgebra::identity() const {
  Element out;
  for (int n : dims_) out.blocks.push_back(Mat::Identity(n, n));
  return out;
}

Element MultiMatrixAlgebra::unit(int block, int row, int col) const {
  Element out = zero();
  out.blocks[static_cast<std::size_t>(block)](row, col) = 1.0;
  return out;
}

Element MultiMatrixAlgebra::central_projection(int block) const {
  Element out = zero();
  out.blocks[static_cast<std::size_t>(block)].setIdentity();
  return out;
}

Vec MultiMatrixAlgebra::coords(const Element& x) const {
  if (!contains(x)) throw Error("element does not belong to " + describe());
  Vec v(total_dim_);
  for (int i = 0; i < block_count(); ++i) {
    const int n = dims_[i];
    const Mat& b = x.blocks[i];
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) v(offsets_[i] + r * n + c) = b(r, c);
  }
  return v;
}

Element MultiMatrixAlgebra::from_coords(const Vec& v) const {
  if (v.size() != total_dim_) throw Error("coordinate vector has wrong length");
  Element out;
  for (int i = 0; i < block_count(); ++i) {
    const int n = dims_[i];
    Mat b(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) b(r, c) = v(offsets_[i] + r * n + c);
    out.blocks.push_back(std::move(b));
  }
  return out;
}

bool MultiMatrixAlgebra::contains(const Element& x) const {
  if (x.blocks.size() != dims_.size()) return false;
  for (std::size_t i = 0; i < dims_.size(); ++i)
    if (x.blocks[i].rows() != dims_[i] || x.blocks[i].cols() != dims_[i]) return false;
  return true;
}

Mat MultiMatrixAlgebra::standard_rep(const Element& x) const {
  const int n = rep_dim();
  Mat m = Mat::Zero(n, n);
  int pos = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    m.block(pos, pos, dims_[i], dims_[i]) = x.blocks[i];
    pos += dims_[i];
  }
  return m;
}

std::vector<Element> MultiMatrixAlgebra::generators() const {
  std::vector<Element> g;
  for (int i = 0; i < block_count(); ++i) {
    const int n = dims_[i];
    if (n == 1) {
      g.push_back(unit(i, 0, 0));
      continue;
    }
    for (int r = 0; r + 1 < n; ++r) {
      g.push_back(unit(i, r, r + 1));
      g.push_back(unit(i, r + 1, r));
    }
  }
  return g;
}

std::string MultiMatrixAlgebra::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) os << " + ";
    if (dims_[i] == 1)
      os << "C";
    else
      os << "M" << dims_[i];
  }
  return os.str();
}

std::vector<Element> matrix_units(const MultiMatrixAlgebra& a) {
  std::vector<Element> u;
  u.reserve(static_cast<std::size_t>(a.total_dim()));
  for (int i = 0; i < a.block_count(); ++i)
    for (int r = 0; r < a.block_size(i); ++r)
      for (int c = 0; c < a.block_size(i); ++c) u.push_back(a.unit(i, r, c));
  return u;
}

// ------------------------------------------------------ StarHomomorphism

StarHomomorphism::StarHomomorphism(MultiMatrixAlgebra source, MultiMatrixAlgebra target,
                                   std::vector<std::vector<Frame>> frames)
    : source_(std::move(source)), target_(std::move(target)), frames_(std::move(frames)) {
  if (static_cast<int>(frames_.size()) != source_.block_count())
    throw Error("one frame list per source block is required");
  for (int l = 0; l < source_.block_count(); ++l) {
    if (frames_[l].empty()) throw Error("homomorphism is not injective on block " + std::to_string(l));
    for (const auto& f : frames_[l]) {
      if (f.target_block < 0 || f.target_block >= target_.block_count()) throw Error("frame target out of range");
      if (f.isometry.rows() != target_.block_size(f.target_block) || f.isometry.cols() != source_.block_size(l))
        throw Error("frame isometry has wrong shape");
    }
  }
}

StarHomomorphism StarHomomorphism::identity(const MultiMatrixAlgebra& a) {
  std::vector<std::vector<Frame>> fr(static_cast<std::size_t>(a.block_count()));
  for (int l = 0; l < a.block_count(); ++l) fr[l].push_back({l, Mat::Identity(a.block_size(l), a.block_size(l))});
  return StarHomomorphism(a, a, std::move(fr));
}

Element StarHomomorphism::apply(const Element& x) const {
  if (!source_.contains(x)) throw Error("element is not in the source algebra " + source_.describe());
  Element y = target_.zero();
  for (int l = 0; l < source_.block_count(); ++l)
    for (const auto& f : frames_[l])
      y.blocks[f.target_block].noalias() += f.isometry * x.blocks[l] * f.isometry.adjoint();
  return y;
}

Element StarHomomorphism::unit_image(int block, int row, int col) const {
  Element y = target_.zero();
  for (const auto& f : frames_[block])
    y.blocks[f.target_block].noalias() += f.isometry.col(row) * f.isometry.col(col).adjoint();
  return y;
}

std::vector<Element> StarHomomorphism::unit_images() const {
  std::vector<Element> out;
  for (int i = 0; i < source_.block_count(); ++i)
    for (int r = 0; r < source_.block_size(i); ++r)
      for (int c = 0; c < source_.block_size(i); ++c) out.push_back(unit_image(i, r, c));
  return out;
}

Element StarHomomorphism::preimage(const Element& y) const {
  if (!target_.contains(y)) throw Error("element is not in the target algebra " + target_.describe());
  Element x = source_.zero();
  for (int l = 0; l < source_.block_count(); ++l) {
    for (const auto& f : frames_[l])
      x.blocks[l].noalias() += f.isometry.adjoint() * y.blocks[f.target_block] * f.isometry;
    x.blocks[l] /= static_cast<double>(frames_[l].size());
  }
  return x;
}

double StarHomomorphism::image_residual(const Element& y) const {
  return (apply(preimage(y)) - y).norm() / std::max(1.0, y.norm());
}

StarHomomorphism StarHomomorphism::compose_after(const StarHomomorphism& inner) const {
  if (!(inner.target() == source_)) throw Error("cannot compose: intermediate algebras differ");
  std::vector<std::vector<Frame>> fr(inner.frames_.size());
  for (std::size_t l = 0; l < inner.frames_.size(); ++l)
    for (const auto& f1 : inner.frames_[l])
      for (const auto& f2 : frames_[f1.target_block]) fr[l].push_back({f2.target_block, f2.isometry * f1.isometry});
  return StarHomomorphism(inner.source(), target_, std::move(fr));
}

Eigen::MatrixXi StarHomomorphism::multiplicities() const {
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(source_.block_count(), target_.block_count());
  for (int l = 0; l < source_.block_count(); ++l)
    for (const auto& f : frames_[l]) m(l, f.target_block) += 1;
  return m;
}

double StarHomomorphism::relation_residual() const {
  double worst = 0.0;
  for (int j = 0; j < target_.block_count(); ++j) {
    std::vector<const Mat*> ys;
    int cols = 0;
    for (int l = 0; l < source_.block_count(); ++l)
      for (const auto& f : frames_[l])
        if (f.target_block == j) {
          ys.push_back(&f.isometry);
          cols += static_cast<int>(f.isometry.cols());
        }
    const int n = target_.block_size(j);
    if (cols != n) return std::numeric_limits<double>::infinity();
    Mat w(n, cols);
    int pos = 0;
    for (const Mat* y : ys) {
      w.middleCols(pos, y->cols()) = *y;
      pos += static_cast<int>(y->cols());
    }
    worst = std::max(worst, (w.adjoint() * w - Mat::Identity(n, n)).norm());
    worst = std::max(worst, (w * w.adjoint() - Mat::Identity(n, n)).norm());
  }
  return worst;
}

Mat StarHomomorphism::as_matrix() const {
  Mat m(target_.total_dim(), source_.total_dim());
  int k = 0;
  for (int i = 0; i < source_.block_count(); ++i)
    for (int r = 0; r < source_.block_size(i); ++r)
      for (int c = 0; c < source_.block_size(i); ++c) m.col(k++) = target_.coords(unit_image(i, r, c));
  return m;
}

namespace {

struct UnitIndex {
  int block, row, col;
};

std::vector<UnitIndex> unit_index(const MultiMatrixAlgebra& a) {
  std::vector<UnitIndex> u;
  for (int i = 0; i < a.block_count(); ++i)
    for (int r = 0; r < a.block_size(i); ++r)
      for (int c = 0; c < a.block_size(i); ++c) u.push_back({i, r, c});
  return u;
}

}  // namespace

HomomorphismCheck check_unit_images(const MultiMatrixAlgebra& source, const MultiMatrixAlgebra& target,
                                    const std::vector<Element>& images) {
  if (static_cast<int>(images.size()) != source.total_dim())
    throw Error("expected " + std::to_string(source.total_dim()) + " unit images, got " +
                std::to_string(images.size()));
  for (const auto& e : images)
    if (!target.contains(e)) throw Error("unit image is not an element of " + target.describe());

  HomomorphismCheck chk;
  const auto idx = unit_index(source);
  auto img = [&](int b, int r, int c) -> const Element& { return images[static_cast<std::size_t>(source.unit_index(b, r, c))]; };

  double max_block = 0.0;
  for (int n : target.dims()) max_block = std::max(max_block, static_cast<double>(n));
  const double pairs = static_cast<double>(idx.size()) * static_cast<double>(idx.size());
  const bool full = pairs * max_block * max_block * max_block <= 2e8;

  if (full) {
    // Every pair: e_ab e_cd = delta_bc e_ad, cross-block products vanish.
    for (const auto& u : idx)
      for (const auto& v : idx) {
        const Element prod = images[source.unit_index(u.block, u.row, u.col)] * images[source.unit_index(v.block, v.row, v.col)];
        double r;
        if (u.block == v.block && u.col == v.row)
          r = (prod - img(u.block, u.row, v.col)).norm();
        else
          r = prod.norm();
        chk.multiplicative = std::max(chk.multiplicative, r);
      }
  } else {
    // Relations that generate the full set: e_ab = e_a1 e_1b and
    // e_1a e_b1 = delta_ab e_11, with *-closure and unitality below.
    for (int i = 0; i < source.block_count(); ++i) {
      const int n = source.block_size(i);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          chk.multiplicative =
              std::max(chk.multiplicative, (img(i, a, 0) * img(i, 0, b) - img(i, a, b)).norm());
          const Element p = img(i, 0, a) * img(i, b, 0);
          chk.multiplicative = std::max(chk.multiplicative, (a == b ? (p - img(i, 0, 0)) : p).norm());
        }
    }
  }
  for (const auto& u : idx)
    chk.star = std::max(chk.star, (img(u.block, u.row, u.col).adjoint() - img(u.block, u.col, u.row)).norm());

  Element sum = target.zero();
  for (int i = 0; i < source.block_count(); ++i)
    for (int r = 0; r < source.block_size(i); ++r) sum += img(i, r, r);
  chk.unital = (sum - target.identity()).norm();

  // Under the relations, injectivity amounts to every e^{(i)}_{11} having a
  // nonzero image.
  chk.injective = true;
  for (int i = 0; i < source.block_count(); ++i)
    if (img(i, 0, 0).norm() < 0.5) chk.injective = false;
  if (chk.injective) {
    chk.rank = source.total_dim();
  } else {
    Mat m(target.total_dim(), source.total_dim());
    for (std::size_t k = 0; k < images.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = target.coords(images[k]);
    chk.rank = numerical_rank(m);
  }
  return chk;
}

StarHomomorphism StarHomomorphism::from_unit_images(const MultiMatrixAlgebra& source,
                                                    const MultiMatrixAlgebra& target,
                                                    const std::vector<Element>& images, double tol) {
  const HomomorphismCheck chk = check_unit_images(source, target, images);
  if (chk.multiplicative > tol) throw Error("unit images are not multiplicative (residual " + std::to_string(chk.multiplicative) + ")");
  if (chk.star > tol) throw Error("unit images are not *-preserving (residual " + std::to_string(chk.star) + ")");
  if (chk.unital > tol) throw Error("unit images are not unital (residual " + std::to_string(chk.unital) + ")");
  if (!chk.injective) throw Error("unit images define a non-injective map");

  std::vector<std::vector<Frame>> frames(static_cast<std::size_t>(source.block_count()));
  for (int l = 0; l < source.block_count(); ++l) {
    const int nl = source.block_size(l);
    const Element& p = images[static_cast<std::size_t>(source.unit_index(l, 0, 0))];
    for (int j = 0; j < target.block_count(); ++j) {
      const Mat& pj = p.blocks[j];
      if (pj.norm() < 0.5) continue;
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (pj + pj.adjoint()));
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        if (es.eigenvalues()(k) < 0.5) continue;
        const Vec v = es.eigenvectors().col(k);
        Mat y(target.block_size(j), nl);
        for (int kap = 0; kap < nl; ++kap)
          y.col(kap) = images[static_cast<std::size_t>(source.unit_index(l, kap, 0))].blocks[j] * v;
        frames[l].push_back({j, std::move(y)});
      }
    }
  }
  StarHomomorphism h(source, target, std::move(frames));
  const double rel = h.relation_residual();
  if (rel > std::max(tol, 1e-8) * 10.0) throw NumericalError("standard form residual too large: " + std::to_string(rel));
  double worst = 0.0;
  const auto idx = unit_index(source);
  for (std::size_t k = 0; k < images.size(); ++k) {
    const auto& u = idx[k];
    worst = std::max(worst, (h.unit_image(u.block, u.row, u.col) - images[k]).norm());
  }
  if (worst > std::max(tol, 1e-8) * 10.0) throw NumericalError("standard form does not reproduce unit images");
  return h;
}

// ------------------------------------------------------- UnitalInclusion

Eigen::MatrixXi inclusion_matrix(const UnitalInclusion& inc) {
  const auto& b = inc.sub();
  const auto& a = inc.ambient();
  Eigen::MatrixXi lam(b.block_count(), a.block_count());
  for (int i = 0; i < b.block_count(); ++i) {
    const Element p = inc.embedding().apply(b.central_projection(i));
    for (int j = 0; j < a.block_count(); ++j) {
      const double t = p.blocks[j].trace().real() / b.block_size(i);
      const double r = std::round(t);
      if (std::abs(t - r) > 1e-6) throw Error("non-integral multiplicity in inclusion matrix");
      lam(i, j) = static_cast<int>(r);
    }
  }
  for (int j = 0; j < a.block_count(); ++j) {
    int s = 0;
    for (int i = 0; i < b.block_count(); ++i) s += lam(i, j) * b.block_size(i);
    if (s != a.block_size(j)) throw Error("inclusion is not unital on block " + std::to_string(j));
  }
  return lam;
}

UnitalInclusion::UnitalInclusion(StarHomomorphism embedding) : embedding_(std::move(embedding)) {
  lambda_ = wat::inclusion_matrix(*this);
  if (lambda_ != embedding_.multiplicities()) throw NumericalError("inclusion matrix disagrees with frames");
  connected_ = components().size() == 1;
}

std::vector<std::pair<std::vector<int>, std::vector<int>>> UnitalInclusion::components() const {
  const int kb = static_cast<int>(lambda_.rows());
  const int ka = static_cast<int>(lambda_.cols());
  // Vertices 0..kb-1 are B-blocks, kb..kb+ka-1 are A-blocks.
  std::vector<int> comp(static_cast<std::size_t>(kb + ka), -1);
  std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
  for (int s = 0; s < kb + ka; ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::queue<int> q;
    q.push(s);
    comp[s] = id;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      if (v < kb)
        out[id].first.push_back(v);
      else
        out[id].second.push_back(v - kb);
      for (int w = 0; w < kb + ka; ++w) {
        if (comp[w] >= 0) continue;
        bool edge = false;
        if (v < kb && w >= kb) edge = lambda_(v, w - kb) > 0;
        if (v >= kb && w < kb) edge = lambda_(w, v - kb) > 0;
        if (edge) {
          comp[w] = id;
          q.push(w);
        }
      }
    }
  }
  for (auto& c : out) {
    std::sort(c.first.begin(), c.first.end());
    std::sort(c.second.begin(), c.second.end());
  }
  return out;
}

UnitalInclusion compose(const UnitalInclusion& inner, const UnitalInclusion& outer) {
  return UnitalInclusion(outer.embedding().compose_after(inner.embedding()));
}

UnitalInclusion identity_inclusion(const MultiMatrixAlgebra& a) {
  return UnitalInclusion(StarHomomorphism::identity(a));
}

UnitalInclusion scalar_inclusion(const MultiMatrixAlgebra& a) {
  std::vector<std::vector<Frame>> fr(1);
  for (int j = 0; j < a.block_count(); ++j)
    for (int r = 0; r < a.block_size(j); ++r) {
      Mat y = Mat::Zero(a.block_size(j), 1);
      y(r, 0) = 1.0;
      fr[0].push_back({j, y});
    }
  return UnitalInclusion(StarHomomorphism(MultiMatrixAlgebra({1}), a, std::move(fr)));
}

UnitalInclusion diagonal_inclusion(int n) {
  std::vector<std::vector<Frame>> fr(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    Mat y = Mat::Zero(n, 1);
    y(l, 0) = 1.0;
    fr[l].push_back({0, y});
  }
  return UnitalInclusion(StarHomomorphism(MultiMatrixAlgebra(std::vector<int>(n, 1)), MultiMatrixAlgebra({n}), std::move(fr)));
}

UnitalInclusion tensor_inclusion(int k, int m) {
  // Row index of C^k ⊗ C^m is a*m + b.
  std::vector<std::vector<Frame>> fr(1);
  for (int b = 0; b < m; ++b) {
    Mat y = Mat::Zero(k * m, k);
    for (int a = 0; a < k; ++a) y(a * m + b, a) = 1.0;
    fr[0].push_back({0, y});
  }
  return UnitalInclusion(StarHomomorphism(MultiMatrixAlgebra({k}), MultiMatrixAlgebra({k * m}), std::move(fr)));
}

UnitalInclusion inclusion_from_matrix(const std::vector<int>& sub_dims, const Eigen::MatrixXi& lambda) {
  if (static_cast<Eigen::Index>(sub_dims.size()) != lambda.rows()) throw Error("inclusion matrix row count mismatch");
  std::vector<int> amb(static_cast<std::size_t>(lambda.cols()), 0);
  for (Eigen::Index j = 0; j < lambda.cols(); ++j)
    for (Eigen::Index i = 0; i < lambda.rows(); ++i) {
      if (lambda(i, j) < 0) throw Error("negative multiplicity");
      amb[j] += lambda(i, j) * sub_dims[i];
    }
  std::vector<std::vector<Frame>> fr(sub_dims.size());
  for (Eigen::Index j = 0; j < lambda.cols(); ++j) {
    int pos = 0;
    for (Eigen::Index i = 0; i < lambda.rows(); ++i)
      for (int c = 0; c < lambda(i, j); ++c) {
        Mat y = Mat::Zero(amb[j], sub_dims[i]);
        y.block(pos, 0, sub_dims[i], sub_dims[i]).setIdentity();
        pos += sub_dims[i];
        fr[i].push_back({static_cast<int>(j), y});
      }
  }
  return UnitalInclusion(StarHomomorphism(MultiMatrixAlgebra(sub_dims), MultiMatrixAlgebra(amb), std::move(fr)));
}

}  // namespace wat
