#pragma once

// Dense brute-force recomputations used to cross-check the library.  Every
// computation happens in the standard representation on C^N with plain
// Eigen decompositions, so none of the library's span or kernel routines
// are involved.

#include "watatani/algebra.hpp"

#include <vector>

namespace oracle {

using namespace wat;

inline constexpr double kCut = 1e-9;

inline Vec flat(const Mat& m) {
  Vec v(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v(r * m.cols() + c) = m(r, c);
  return v;
}

inline Mat unflat(const Vec& v, Eigen::Index n) {
  Mat m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = v(r * n + c);
  return m;
}

inline int rank_of(const Mat& m) {
  if (m.cols() == 0 || m.rows() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > kCut * std::max(1.0, s(0))) ++r;
  return r;
}

/// Kernel basis via the full SVD of m.
inline Mat kernel(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const int r = rank_of(m);
  return svd.matrixV().rightCols(m.cols() - r);
}

/// Pulls an N x N block-diagonal matrix back to an element of a.
inline Element from_rep(const MultiMatrixAlgebra& a, const Mat& x) {
  std::vector<Mat> blocks;
  int off = 0;
  for (int j = 0; j < a.block_count(); ++j) {
    const int n = a.block_size(j);
    blocks.push_back(x.block(off, off, n, n));
    off += n;
  }
  return Element(std::move(blocks));
}

/// dim of B'∩A from the kernel of all commutators with images of B's matrix
/// units, intersected with the block-diagonal matrices of A.
inline std::vector<Element> relative_commutant(const UnitalInclusion& inc) {
  const auto& a = inc.ambient();
  const int n = a.rep_dim();
  const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
  std::vector<Mat> rows;
  const Mat id = Mat::Identity(n, n);
  for (const auto& e : matrix_units(inc.sub())) {
    const Mat y = a.standard_rep(inc.embed(e));
    rows.push_back(kron(y, id) - kron(id, y.transpose()));
  }
  // Off-diagonal blocks of the standard representation must vanish.
  std::vector<int> owner(static_cast<std::size_t>(n));
  for (int j = 0, off = 0; j < a.block_count(); off += a.block_size(j), ++j)
    for (int k = 0; k < a.block_size(j); ++k) owner[static_cast<std::size_t>(off + k)] = j;
  std::vector<Eigen::Index> off_block;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (owner[static_cast<std::size_t>(r)] != owner[static_cast<std::size_t>(c)]) off_block.push_back(r * n + c);
  Mat sel = Mat::Zero(static_cast<Eigen::Index>(off_block.size()), n2);
  for (std::size_t k = 0; k < off_block.size(); ++k) sel(static_cast<Eigen::Index>(k), off_block[k]) = 1.0;
  Eigen::Index total = sel.rows();
  for (const auto& m : rows) total += m.rows();
  Mat stacked(total, n2);
  Eigen::Index at = 0;
  for (const auto& m : rows) {
    stacked.middleRows(at, m.rows()) = m;
    at += m.rows();
  }
  stacked.middleRows(at, sel.rows()) = sel;
  const Mat ker = kernel(stacked);
  std::vector<Element> out;
  for (Eigen::Index k = 0; k < ker.cols(); ++k) out.push_back(from_rep(a, unflat(ker.col(k), n)));
  return out;
}

/// Span of all words in gens and their adjoints, grown by squaring the
/// current span until its dimension stops changing.
inline std::vector<Element> generated_subalgebra(const MultiMatrixAlgebra& a, const std::vector<Element>& gens) {
  const int n = a.rep_dim();
  std::vector<Mat> words{Mat::Identity(n, n)};
  for (const auto& g : gens) {
    words.push_back(a.standard_rep(g));
    words.push_back(a.standard_rep(g.adjoint()));
  }
  auto span_of = [&](const std::vector<Mat>& ws) {
    Mat m(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(ws.size()));
    for (std::size_t k = 0; k < ws.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = flat(ws[k]);
    return m;
  };
  auto basis_of = [&](const std::vector<Mat>& ws) {
    const Mat m = span_of(ws);
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
    const int r = rank_of(m);
    std::vector<Mat> out;
    for (int k = 0; k < r; ++k) out.push_back(unflat(svd.matrixU().col(k), n));
    return out;
  };
  std::vector<Mat> cur = basis_of(words);
  while (true) {
    std::vector<Mat> next = cur;
    for (const auto& x : cur)
      for (const auto& y : cur) next.push_back(x * y);
    next = basis_of(next);
    if (next.size() == cur.size()) break;
    cur = std::move(next);
  }
  std::vector<Element> out;
  for (const auto& m : cur) out.push_back(from_rep(a, m));
  return out;
}

/// Distance of x from span(s), measured in the standard representation.
inline double span_residual(const MultiMatrixAlgebra& a, const std::vector<Element>& s, const Element& x) {
  const int n = a.rep_dim();
  if (s.empty()) return flat(a.standard_rep(x)).norm();
  Mat m(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = flat(a.standard_rep(s[k]));
  const Vec v = flat(a.standard_rep(x));
  const Vec c = m.completeOrthogonalDecomposition().solve(v);
  return (m * c - v).norm();
}

/// same[i][j] for witnesses i, j, with index 0 standing for the identity:
/// v* u lies in span(c).
inline std::vector<std::vector<bool>> coset_relation(const MultiMatrixAlgebra& a, const std::vector<Element>& c,
                                                     const std::vector<Element>& witnesses) {
  std::vector<Element> w{a.identity()};
  w.insert(w.end(), witnesses.begin(), witnesses.end());
  std::vector<std::vector<bool>> same(w.size(), std::vector<bool>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) {
      const Element p = w[j].adjoint() * w[i];
      same[i][j] = span_residual(a, c, p) < 1e-6 * std::max(1.0, p.norm());
    }
  return same;
}

inline int count_classes(const std::vector<std::vector<bool>>& same) {
  std::vector<bool> seen(same.size());
  int classes = 0;
  for (std::size_t i = 0; i < same.size(); ++i) {
    if (seen[i]) continue;
    ++classes;
    for (std::size_t j = i; j < same.size(); ++j)
      if (same[i][j]) seen[j] = true;
  }
  return classes;
}

}  // namespace oracle
