#pragma once

// Quasi-bases for conditional expectations and the Watatani index.

#include "watatani/expectation.hpp"

#include <optional>

namespace wat {

/// Elements live in the ambient algebra A of the expectation.
struct QuasiBasis {
  ConditionalExpectation expectation;
  std::vector<Element> elements;
  bool right = false;
  bool left = false;
  bool two_sided = false;
  bool orthonormal = false;
  bool unitary = false;
  double right_residual = 0.0;  // max over matrix units x of ||x - sum E(x l) l*||
  double left_residual = 0.0;   // max over matrix units x of ||x - sum E(x l*) l||
  double orthonormal_residual = 0.0;
  double unitary_residual = 0.0;

  std::size_t size() const { return elements.size(); }
};

/// Checks both reconstruction identities on every matrix unit of A,
/// orthonormality E(l_i* l_j) = delta_ij and unitarity.
QuasiBasis verify_quasi_basis(const ConditionalExpectation& e, std::vector<Element> s, double tol = kTol);

/// sum l l* for a right basis, sum l* l for a left one.  Throws when the
/// basis failed verification.
IndexValue watatani_index(const QuasiBasis& qb, double tol = 1e-8);

/// ||ι E0(x) - Ind^{-1} sum l x l*|| for x in C_A(B).
double averaging_check(const ConditionalExpectation& e0, const QuasiBasis& qb, const Element& x, double tol = kTol);

/// x |-> tr(x) 1 as an expectation onto the scalars.
ConditionalExpectation trace_expectation(const TraceState& tr);

/// { sqrt(n_i / tr(p_i)) e^{(i)}_{kappa beta} }.
QuasiBasis matrix_unit_basis_for_trace(const TraceState& tr);

/// {U^a V^b} for the normalized trace on M_n; U clock, V cyclic shift.
QuasiBasis weyl_clock_shift_basis(int n);

/// Restriction of E0 to C_A(B) as a trace on the abstract centralizer.
/// Requires E0(C_A(B)) ⊆ C·1.
struct CentralizerTrace {
  UnitalInclusion centralizer;  // C_A(B) ⊂ A
  TraceState tau0;
};
CentralizerTrace centralizer_trace(const ConditionalExpectation& e0, double tol = kTol);

/// Re-verifies a basis of C_A(B) (given in A) as a two-sided quasi-basis
/// for E0|_C : C -> B.  Throws when verification fails.
QuasiBasis lift_trace_basis_to_C(const std::vector<Element>& basis_in_a, const CompatibleExpectation& ce,
                                 double tol = kTol);

/// {l_i m_j} for E: A -> C (basis l) and F: C -> B (basis m, elements of C).
QuasiBasis compose_quasi_bases(const QuasiBasis& outer, const QuasiBasis& inner, double tol = kTol);

struct UnitarySearchConfig {
  int max_iterations = 5000;
  int restarts = 64;
  std::uint64_t seed = 0;
  double target_residual = 1e-6;
};

struct UnitarySearchResult {
  bool success = false;
  std::optional<QuasiBasis> basis;
  double best_residual = 0.0;  // Frobenius norm of Gram - identity
  int best_restart = -1;
  int restarts_run = 0;
  bool exact = false;  // clock/shift short-circuit
};

/// Unitary orthonormal quasi-basis for tr (requires the Markov trace of
/// C ⊂ P; throws otherwise).
UnitarySearchResult unitary_basis_search(const TraceState& tr, const UnitarySearchConfig& cfg = {});

}  // namespace wat
