#pragma once

// Dense complex linear algebra shared by every module: matrix aliases,
// tolerances, null spaces, orthonormal spans and a deterministic RNG.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wat {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Default absolute residual for equality checks (Frobenius norms).
inline constexpr double kTol = 1e-9;
/// Singular values below kRankCut * sigma_max are treated as zero.
inline constexpr double kRankCut = 1e-8;
/// Singular values at or below this are zero regardless of sigma_max.
inline constexpr double kAbsFloor = 1e-12;

/// Raised when an input violates a documented precondition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical procedure cannot decide or does not converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Orthonormal basis (columns) of the null space of `m`.
Mat null_space(const Mat& m, double rel_cut = kRankCut);

/// Orthonormal basis (columns) of the column span of `m`.
Mat column_span(const Mat& m, double rel_cut = kRankCut);

/// Numerical rank with the relative singular-value cutoff.
int numerical_rank(const Mat& m, double rel_cut = kRankCut);

/// Hermitian square root and inverse square root of a positive definite matrix.
Mat sqrt_psd(const Mat& h);
Mat inv_sqrt_pd(const Mat& h);

/// Nearest unitary (polar factor) of a square matrix.
Mat polar_unitary(const Mat& m);

/// Incremental Gram-Schmidt over a fixed ambient dimension.  A candidate is
/// accepted when its residual after projection exceeds both rel_cut * its
/// norm and kAbsFloor.
class SpanBuilder {
 public:
  explicit SpanBuilder(Eigen::Index ambient_dim, double rel_cut = kRankCut);

  /// Returns true when `v` enlarged the span.
  bool add(const Vec& v);
  /// Norm of the component of `v` orthogonal to the current span.
  double residual(const Vec& v) const;

  Eigen::Index size() const { return count_; }
  Eigen::Index ambient_dim() const { return basis_.rows(); }
  /// Orthonormal basis as columns (ambient_dim x size()).
  Mat basis() const { return basis_.leftCols(count_); }
  Vec vector(Eigen::Index k) const { return basis_.col(k); }

 private:
  Mat basis_;
  Eigen::Index count_ = 0;
  double rel_cut_;
};

/// SplitMix64-based generator; platform independent, so reports are
/// reproducible byte for byte.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();   // [0, 1)
  double normal();    // standard normal, Box-Muller
  cd complex_normal();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-distributed unitary of size n (QR of a complex Ginibre matrix).
Mat random_unitary(int n, Rng& rng);

/// Greatest singular value.
double operator_norm(const Mat& m);

/// Kronecker product.
Mat kron(const Mat& a, const Mat& b);

}  // namespace wat
