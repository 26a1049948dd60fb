#pragma once

// Trace states on multi-matrix algebras, Markov traces of inclusions and
// index values (positive invertible central elements).

#include "watatani/algebra.hpp"

namespace wat {

/// tr(x) = sum_i t_i Tr(x_i); t_i is the trace of a minimal projection of
/// block i.
struct TraceState {
  MultiMatrixAlgebra algebra;
  RVec t;

  TraceState() = default;
  /// Throws unless sum n_i t_i = 1 within tolerance.
  TraceState(MultiMatrixAlgebra a, RVec t_vec);

  cd operator()(const Element& x) const;
  bool faithful() const { return t.size() > 0 && t.minCoeff() > 0.0; }
  /// tr(p_i) = n_i t_i.
  double projection_trace(int block) const { return algebra.block_size(block) * t(block); }
  /// Row vector r with tr(x) = r . coords(x).
  Eigen::RowVectorXcd functional() const;
  /// max |tr(e f) - tr(f e)| over pairs of matrix units.
  double tracial_residual() const;
};

/// t_i = n_i / dim A: the Markov trace of C ⊂ A.
TraceState markov_trace_of_scalars(const MultiMatrixAlgebra& a);

struct MarkovTrace {
  TraceState trace;
  double modulus = 0.0;   // beta = ||Lambda||^2
  double residual = 0.0;  // ||Lambda^T Lambda t - beta t||
};

/// Perron-Frobenius trace of Lambda^T Lambda.  Throws on disconnected
/// inclusions with the components in the message.
MarkovTrace markov_trace(const UnitalInclusion& inc);

/// Positive invertible central element.
struct IndexValue {
  MultiMatrixAlgebra algebra;
  Element element;
  RVec coefficients;  // coefficient of each central projection
  bool scalar = false;
  double value = 0.0;  // meaningful when scalar
  double central_residual = 0.0;

  std::string describe() const;
};

/// Wraps an element, checks it is central, positive and invertible within
/// tol; scalar when all block coefficients agree to tol.
IndexValue make_index_value(const MultiMatrixAlgebra& a, const Element& x, double tol = 1e-8);

/// sum_i n_i^2 / tr(p_i) p_i.
IndexValue trace_index(const TraceState& tr);

}  // namespace wat
