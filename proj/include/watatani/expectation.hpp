#pragma once

// Conditional expectations E: A -> B for a unital inclusion B ⊂ A.

#include "watatani/traces.hpp"

namespace wat {

/// Stored as the d_B x d_A matrix sending A-coordinates to B-coordinates;
/// the expectation as a map on A is embedding o map.
class ConditionalExpectation {
 public:
  ConditionalExpectation() = default;
  ConditionalExpectation(UnitalInclusion inc, Mat map);

  const UnitalInclusion& inclusion() const { return inc_; }
  const Mat& map() const { return map_; }

  /// E(x) as an element of B.
  Element apply(const Element& x) const;
  /// ι(E(x)) as an element of A.
  Element apply_ambient(const Element& x) const { return inc_.embed(apply(x)); }

  /// Density matrices of omega = tau_B o E with tau_B the Markov trace of
  /// C ⊂ B: omega(x) = sum_j Tr(rho_j x_j).
  std::vector<Mat> state_densities() const;

 private:
  UnitalInclusion inc_;
  Mat map_;
};

struct ExpectationCheck {
  double idempotent = 0.0;  // ||E o ι - id_B||
  double unital = 0.0;      // ||E(1) - 1||
  double bimodule = 0.0;    // over generators of B and all of A
  double positivity = 0.0;  // max(0, -min eigenvalue of E(x*x)) over matrix units
  double min_density_eig = 0.0;  // > 0 iff faithful
  bool faithful = false;
  bool ok(double tol = kTol) const {
    return idempotent <= tol && unital <= tol && bimodule <= tol && positivity <= tol && faithful;
  }
  double worst() const { return std::max({idempotent, unital, bimodule, positivity}); }
};

ExpectationCheck verify_expectation(const ConditionalExpectation& e);

/// Orthogonal projection onto ι(B) for <x, y> = tau(x* y).
ConditionalExpectation trace_preserving_expectation(const UnitalInclusion& inc, const TraceState& tau);

/// E(x) = omega(x) 1 for a state omega on A given by densities per block
/// (omega(x) = sum_j Tr(rho_j x_j)); B must be C.
ConditionalExpectation state_expectation(const UnitalInclusion& scalars, const std::vector<Mat>& densities);

/// Identity expectation for B = A.
ConditionalExpectation identity_expectation(const MultiMatrixAlgebra& a);

struct MinimalityCheck {
  bool minimal = false;
  double tracial_residual = 0.0;  // E(zw) - E(wz) over units of C_A(B)
  double center_residual = 0.0;   // distance of E(C_A(B)) from Z(B)
};

/// Tracial-on-centralizer criterion.
MinimalityCheck is_minimal(const ConditionalExpectation& e, double tol = kTol);

struct MinimalExpectation {
  ConditionalExpectation expectation;
  TraceState trace;         // the trace on A it preserves
  int solution_dim = 0;     // dimension of admissible trace vectors
  bool unique = false;
  MinimalityCheck check;
};

/// Solves for trace vectors on A whose preserving expectation is tracial
/// on C_A(B); among them takes the one nearest the Markov trace.
MinimalExpectation minimal_expectation_info(const UnitalInclusion& inc, double tol = kTol);
inline ConditionalExpectation minimal_expectation(const UnitalInclusion& inc) {
  return minimal_expectation_info(inc).expectation;
}

/// B ⊂ C ⊂ A with C a concrete subalgebra of A.
struct CompatibleExpectation {
  UnitalInclusion c_in_a;
  UnitalInclusion b_in_c;
  ConditionalExpectation f;          // A -> C
  ConditionalExpectation e0_on_c;    // restriction of E0 to C, C -> B
  double compatibility_residual = 0.0;  // ||E0|_C o F - E0||
  double uniqueness_residual = 0.0;     // F from two traces, when available
  bool uniqueness_checked = false;
};

/// Conditional expectation F: A -> C with E0|_C o F = E0.  Throws when no
/// faithful E0-invariant trace exists or the compatibility fails.
CompatibleExpectation compatible_expectation(const UnitalInclusion& inc, const SubalgebraBasis& c,
                                             const ConditionalExpectation& e0, double tol = kTol);

/// E restricted to an intermediate algebra C (given with B ⊂ C ⊂ A).
ConditionalExpectation restrict_expectation(const ConditionalExpectation& e, const UnitalInclusion& b_in_c,
                                            const UnitalInclusion& c_in_a);

/// F o E for E: A -> C and F: C -> B.
ConditionalExpectation compose_expectations(const ConditionalExpectation& outer_e,
                                            const ConditionalExpectation& inner_f);

}  // namespace wat
