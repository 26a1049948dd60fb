#pragma once

// Finite-dimensional C*-algebras presented as direct sums of full matrix
// algebras, their elements, unital *-homomorphisms and inclusions.
//
// Coordinates: an element of M_{n_1} + ... + M_{n_k} is flattened block by
// block, each block row-major, so coordinate index offset(i) + r*n_i + c is
// the coefficient of the matrix unit e^{(i)}_{(r,c)}.  This is also the
// lexicographic (i, kappa, beta) order of matrix_units().

#include "watatani/numerics.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wat {

/// An element of a multi-matrix algebra: one square block per summand.
struct Element {
  std::vector<Mat> blocks;

  Element() = default;
  explicit Element(std::vector<Mat> b) : blocks(std::move(b)) {}

  std::size_t block_count() const { return blocks.size(); }
  Element adjoint() const;
  /// Frobenius norm over all blocks.
  double norm() const;
  bool same_shape(const Element& other) const;
};

Element operator+(const Element& a, const Element& b);
Element operator-(const Element& a, const Element& b);
Element operator*(const Element& a, const Element& b);
Element operator*(cd s, const Element& a);
inline Element operator*(double s, const Element& a) { return cd(s, 0.0) * a; }
Element& operator+=(Element& a, const Element& b);
/// Frobenius inner product sum_i Tr(a_i^* b_i).
cd frobenius_inner(const Element& a, const Element& b);
/// max_i of the largest singular value of each block.
double operator_norm(const Element& a);
/// Commutator ab - ba.
Element commutator(const Element& a, const Element& b);

/// The abstract algebra M_{n_1} + ... + M_{n_k}.
class MultiMatrixAlgebra {
 public:
  MultiMatrixAlgebra() = default;
  explicit MultiMatrixAlgebra(std::vector<int> dims);

  const std::vector<int>& dims() const { return dims_; }
  int block_count() const { return static_cast<int>(dims_.size()); }
  int block_size(int i) const { return dims_[static_cast<std::size_t>(i)]; }
  /// d = sum n_i^2.
  int total_dim() const { return total_dim_; }
  int offset(int i) const { return offsets_[static_cast<std::size_t>(i)]; }
  /// Dimension of the standard representation, sum n_i.
  int rep_dim() const;

  Element zero() const;
  Element identity() const;
  /// e^{(i)}_{(r,c)}.
  Element unit(int block, int row, int col) const;
  int unit_index(int block, int row, int col) const { return offset(block) + row * block_size(block) + col; }
  /// Minimal central projection of block i.
  Element central_projection(int block) const;

  Vec coords(const Element& x) const;
  Element from_coords(const Vec& v) const;
  bool contains(const Element& x) const;

  /// Block diagonal matrix of x in the standard representation on C^{rep_dim}.
  Mat standard_rep(const Element& x) const;

  /// Single-generator-per-relation generating set: e_{r,r+1}, e_{r+1,r} of
  /// every block, plus e_{11} of every 1x1 block.  Generates the algebra.
  std::vector<Element> generators() const;

  bool operator==(const MultiMatrixAlgebra& o) const { return dims_ == o.dims_; }
  std::string describe() const;

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int total_dim_ = 0;
};

/// Matrix units in lexicographic (i, kappa, beta) order.
std::vector<Element> matrix_units(const MultiMatrixAlgebra& a);

/// One copy of a source block inside a target block: x_l |-> Y x_l Y^*,
/// with Y an isometry of shape (n_target x n_source).
struct Frame {
  int target_block = 0;
  Mat isometry;
};

/// Unital *-homomorphism between multi-matrix algebras.  Stored in standard
/// form (an isometry per copy of each source block); unit_images() gives
/// the images of the source matrix units.
class StarHomomorphism {
 public:
  StarHomomorphism() = default;
  StarHomomorphism(MultiMatrixAlgebra source, MultiMatrixAlgebra target,
                   std::vector<std::vector<Frame>> frames);

  /// Builds the homomorphism from images of the source matrix units, after
  /// checking multiplicativity, *-preservation and unitality on all pairs.
  static StarHomomorphism from_unit_images(const MultiMatrixAlgebra& source,
                                           const MultiMatrixAlgebra& target,
                                           const std::vector<Element>& images,
                                           double tol = kTol);
  static StarHomomorphism identity(const MultiMatrixAlgebra& a);

  const MultiMatrixAlgebra& source() const { return source_; }
  const MultiMatrixAlgebra& target() const { return target_; }
  const std::vector<std::vector<Frame>>& frames() const { return frames_; }

  Element apply(const Element& x) const;
  Element unit_image(int block, int row, int col) const;
  std::vector<Element> unit_images() const;

  /// Frobenius-orthogonal projection of y onto the image, pulled back.
  Element preimage(const Element& y) const;
  /// Distance of y from the image, relative to max(1, |y|).
  double image_residual(const Element& y) const;

  /// this o inner.
  StarHomomorphism compose_after(const StarHomomorphism& inner) const;

  /// Lambda(l, j): copies of source block l inside target block j.
  Eigen::MatrixXi multiplicities() const;

  /// Max residual of the standard-form relations (isometries, orthogonal
  /// ranges, ranges summing to the identity).  Zero for an exact unital
  /// injective *-homomorphism.
  double relation_residual() const;

  /// Matrix of the linear map in coordinates (target_dim x source_dim).
  Mat as_matrix() const;

 private:
  MultiMatrixAlgebra source_;
  MultiMatrixAlgebra target_;
  std::vector<std::vector<Frame>> frames_;
};

/// Residuals of the defining relations checked directly on unit images.
struct HomomorphismCheck {
  double multiplicative = 0.0;
  double star = 0.0;
  double unital = 0.0;
  int rank = 0;
  bool injective = false;
  bool ok(double tol = kTol) const { return multiplicative <= tol && star <= tol && unital <= tol && injective; }
};
HomomorphismCheck check_unit_images(const MultiMatrixAlgebra& source, const MultiMatrixAlgebra& target,
                                    const std::vector<Element>& images);

/// B sits inside A through a unital injective *-homomorphism.
class UnitalInclusion {
 public:
  UnitalInclusion() = default;
  explicit UnitalInclusion(StarHomomorphism embedding);

  const MultiMatrixAlgebra& sub() const { return embedding_.source(); }
  const MultiMatrixAlgebra& ambient() const { return embedding_.target(); }
  const StarHomomorphism& embedding() const { return embedding_; }
  /// Lambda(i, j): multiplicity of B-block i in A-block j (k_B x k_A).
  const Eigen::MatrixXi& inclusion_matrix() const { return lambda_; }
  bool connected() const { return connected_; }
  /// Connected components of the bipartite Bratteli diagram as
  /// (B-blocks, A-blocks) index lists.
  std::vector<std::pair<std::vector<int>, std::vector<int>>> components() const;

  Element embed(const Element& b) const { return embedding_.apply(b); }

 private:
  StarHomomorphism embedding_;
  Eigen::MatrixXi lambda_;
  bool connected_ = false;
};

/// Lambda computed from traces of embedded central projections; throws on
/// non-integral multiplicities or a violated dimension count.
Eigen::MatrixXi inclusion_matrix(const UnitalInclusion& inc);

/// Composite B ⊂ C ⊂ A.
UnitalInclusion compose(const UnitalInclusion& inner, const UnitalInclusion& outer);

// Standard inclusions.
UnitalInclusion identity_inclusion(const MultiMatrixAlgebra& a);
/// C·1 ⊂ A.
UnitalInclusion scalar_inclusion(const MultiMatrixAlgebra& a);
/// C^n (diagonal) ⊂ M_n.
UnitalInclusion diagonal_inclusion(int n);
/// M_k ⊗ 1_m ⊂ M_{km}.
UnitalInclusion tensor_inclusion(int k, int m);
/// Inclusion with prescribed inclusion matrix (k_B x k_A); blocks of A
/// are filled in order with copies x |-> diag(..., x, x, ...).
UnitalInclusion inclusion_from_matrix(const std::vector<int>& sub_dims, const Eigen::MatrixXi& lambda);

/// A linear subspace of an ambient algebra with a Frobenius-orthonormal
/// basis (the inner product of the trace with all t_i = 1).
class SubalgebraBasis {
 public:
  SubalgebraBasis() = default;
  SubalgebraBasis(MultiMatrixAlgebra ambient, Mat orthonormal_coords);
  static SubalgebraBasis from_spanning(const MultiMatrixAlgebra& ambient, const std::vector<Element>& spanning);

  const MultiMatrixAlgebra& ambient() const { return ambient_; }
  int dim() const { return static_cast<int>(q_.cols()); }
  /// Coordinates of the basis, one column per element.
  const Mat& coords() const { return q_; }
  Element element(int k) const { return ambient_.from_coords(q_.col(k)); }
  std::vector<Element> elements() const;

  Element project(const Element& x) const;
  double residual(const Element& x) const;
  bool contains(const Element& x, double tol = kTol) const;

  /// Max residual of the *-subalgebra axioms: unit, adjoints, products.
  double closure_residual() const;

 private:
  MultiMatrixAlgebra ambient_;
  Mat q_;
};

/// Two subspaces are equal when dimensions agree and each basis projects
/// onto the other span with residual below tol.
struct SpanComparison {
  bool equal = false;
  int dim_a = 0;
  int dim_b = 0;
  double residual = 0.0;
};
SpanComparison compare_spans(const SubalgebraBasis& a, const SubalgebraBasis& b, double tol = kTol);

/// C_A(B) as the kernel of the stacked commutator map against the images
/// of B's matrix units.  The map decouples across the blocks of A.
SubalgebraBasis relative_commutant(const UnitalInclusion& inc);

/// C_A(B) in decomposed form: the isotypic decomposition of each block of A
/// under B gives C_A(B) ≅ ⊕_{j,i: Λ_ij>0} M_{Λ_ij} together with its
/// embedding into A.  Exact; used for large tower levels.
UnitalInclusion relative_commutant_decomposed(const StarHomomorphism& embedding);

/// Center of A as a subalgebra.
SubalgebraBasis center(const MultiMatrixAlgebra& a);

/// Smallest unital *-subalgebra containing the given elements.
SubalgebraBasis generated_subalgebra(const MultiMatrixAlgebra& a, const std::vector<Element>& gens);

/// Abstract type of a concrete *-subalgebra together with the isomorphism
/// onto it (as an embedding into the ambient algebra).
UnitalInclusion decompose_subalgebra(const SubalgebraBasis& s, double tol = kTol);

}  // namespace wat
