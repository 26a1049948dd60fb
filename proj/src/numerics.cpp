#include "watatani/numerics.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

namespace wat {

namespace {

// Singular values count when above both the relative cut and an absolute
// floor; matrices here have O(1) entries, so roundoff-only matrices have
// rank zero.
Eigen::Index count_rank(const RVec& s, double rel_cut) {
  if (s.size() == 0) return 0;
  const double cut = std::max(rel_cut * s(0), kAbsFloor);
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > cut) ++rank;
  return rank;
}

}  // namespace

Mat null_space(const Mat& m, double rel_cut) {
  const Eigen::Index n = m.cols();
  if (n == 0) return Mat(0, 0);
  if (m.rows() == 0) return Mat::Identity(n, n);
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeFullV);
  const Eigen::Index rank = count_rank(svd.singularValues(), rel_cut);
  return svd.matrixV().rightCols(n - rank);
}

Mat column_span(const Mat& m, double rel_cut) {
  if (m.cols() == 0 || m.rows() == 0) return Mat(m.rows(), 0);
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU);
  const Eigen::Index rank = count_rank(svd.singularValues(), rel_cut);
  return svd.matrixU().leftCols(rank);
}

int numerical_rank(const Mat& m, double rel_cut) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Mat> svd(m);
  return static_cast<int>(count_rank(svd.singularValues(), rel_cut));
}

Mat sqrt_psd(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  RVec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
}

Mat inv_sqrt_pd(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  const RVec& ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() <= 0.0)
    throw NumericalError("inv_sqrt_pd: matrix is not positive definite");
  RVec inv = ev.cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
}

Mat polar_unitary(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

SpanBuilder::SpanBuilder(Eigen::Index ambient_dim, double rel_cut)
    : basis_(ambient_dim, std::max<Eigen::Index>(ambient_dim, 1)), rel_cut_(rel_cut) {}

double SpanBuilder::residual(const Vec& v) const {
  if (count_ == 0) return v.norm();
  const auto q = basis_.leftCols(count_);
  Vec r = v - q * (q.adjoint() * v);
  return r.norm();
}

bool SpanBuilder::add(const Vec& v) {
  const double nv = v.norm();
  if (nv <= kAbsFloor || count_ >= basis_.rows()) return false;
  Vec r = v;
  // Two passes of classical Gram-Schmidt keep the basis orthonormal to
  // working precision.
  for (int pass = 0; pass < 2 && count_ > 0; ++pass) {
    const auto q = basis_.leftCols(count_);
    r -= q * (q.adjoint() * r);
  }
  const double nr = r.norm();
  if (nr <= std::max(rel_cut_ * nv, kAbsFloor)) return false;
  basis_.col(count_++) = r / nr;
  return true;
}

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

cd Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

Mat random_unitary(int n, Rng& rng) {
  Mat g(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) g(r, c) = rng.complex_normal();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat rdiag = qr.matrixQR().diagonal();
  for (int k = 0; k < n; ++k) {
    const double a = std::abs(rdiag(k));
    if (a > 0.0) q.col(k) *= rdiag(k) / a;
  }
  return q;
}

double operator_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace wat
