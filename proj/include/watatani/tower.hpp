#pragma once

// Basic construction on the GNS space of tau_B o E, Jones projections,
// dual expectations, towers and depth.

#include "watatani/quasi_basis.hpp"

#include <memory>
#include <optional>

namespace wat {

inline constexpr int kDefaultGnsCap = 4096;

/// GNS space H = ⊕_j C^{n_j} ⊗ C^{n_j} of omega = tau_B o E, with
/// xi(x) = ⊕_j vec_row(x_j S_j), S_j = rho_j^{1/2}.  A_1 is the commutant
/// of the right B-action on H, presented abstractly with its embedding
/// into End(H) = M_D.
struct BasicConstruction {
  UnitalInclusion inclusion;  // B ⊂ A
  ConditionalExpectation expectation;
  int gns_dim = 0;
  std::vector<Mat> sqrt_density;      // S_j
  std::vector<Mat> inv_sqrt_density;  // S_j^{-1}
  MultiMatrixAlgebra endo;            // M_D
  StarHomomorphism lambda;            // A -> M_D, left multiplication
  Element e1;                         // Jones projection in M_D
  UnitalInclusion a1_in_endo;         // A_1 ⊂ M_D
  UnitalInclusion a_in_a1;            // A ⊂ A_1 (abstract λ)
  Element e1_abstract;                // e_1 in A_1
  std::vector<Element> canonical_basis;  // right quasi-basis of E, in A
  IndexValue index;                   // Ind_W(E)
  ConditionalExpectation dual;        // Ẽ: A_1 -> A

  Vec xi(const Element& x) const;
  Element xi_inv(const Vec& v) const;
  /// λ(x) e_1 λ(y) in M_D.
  Element x_e_y(const Element& x, const Element& y) const;
  const MultiMatrixAlgebra& a1() const { return a_in_a1.ambient(); }
};

/// Throws when E is not faithful or D = dim A exceeds gns_cap.
BasicConstruction basic_construction(const UnitalInclusion& inc, const ConditionalExpectation& e,
                                     int gns_cap = kDefaultGnsCap);

struct JonesRelations {
  double projection = 0.0;   // ||e^2 - e|| + ||e - e*||
  double commutes_b = 0.0;   // max ||[e, λ(ι(b))]|| over generators of B
  double compression = 0.0;  // max ||e λ(x) e - λ(E(x)) e|| over matrix units x of A
  double abstract_e1 = 0.0;  // distance of e_1 from π_1(A_1)
  double worst() const { return std::max({projection, commutes_b, compression, abstract_e1}); }
};
JonesRelations verify_jones_relations(const BasicConstruction& bc);

/// ||sum_s λ(s) e_1 λ(s)* - 1||.
double basis_characterization_residual(const BasicConstruction& bc, const std::vector<Element>& s);

struct DualExpectationCheck {
  double consistency = 0.0;  // max ||Ẽ(x e_1 y) - x Ind^{-1} y|| over matrix units x, y
  double e1_value = 0.0;     // ||Ẽ(e_1) - Ind^{-1}||
  ExpectationCheck expectation;
};
DualExpectationCheck verify_dual_expectation(const BasicConstruction& bc);

/// span{λ(x) e_1 λ(y)} computed by closure in M_D (dense; small D only).
SubalgebraBasis a1_by_span(const BasicConstruction& bc);

/// Level k >= 1 holds A_{k-1} ⊂ A_k; level 0 holds B ⊂ A.
struct TowerLevel {
  int k = 0;
  UnitalInclusion inclusion;            // A_{k-1} ⊂ A_k (A_{-1} = B)
  ConditionalExpectation expectation;   // E_k: A_k -> A_{k-1}
  std::optional<Element> jones;         // e_k in A_k (k >= 1)
  std::optional<IndexValue> index;      // Ind_W(E_{k-1}) computed at this level (k >= 1)
  StarHomomorphism from_b;              // B -> A_k
  UnitalInclusion rel_commutant;        // B'∩A_k ⊂ A_k
  std::shared_ptr<const BasicConstruction> bc;  // k >= 1

  const MultiMatrixAlgebra& algebra() const { return inclusion.ambient(); }
};

struct JonesTower {
  std::vector<TowerLevel> levels;
  int gns_cap = kDefaultGnsCap;
  int top() const { return static_cast<int>(levels.size()) - 1; }
};

/// Level 0 only.
JonesTower start_tower(const UnitalInclusion& inc, const ConditionalExpectation& e, int gns_cap = kDefaultGnsCap);
/// Adds one basic construction on top.  Throws, reporting the projected
/// GNS dimension, when it exceeds the cap.
void extend_tower(JonesTower& tower);
/// Levels 0..m.
JonesTower jones_tower(const UnitalInclusion& inc, const ConditionalExpectation& e, int m, int gns_cap = kDefaultGnsCap);

struct DepthStep {
  int k = 0;
  int span_dim = 0;       // dim span{(B'∩A_{k-1}) e_k (B'∩A_{k-1})}
  int commutant_dim = 0;  // dim B'∩A_k
  double residual = 0.0;  // projection residual of the spanning set onto B'∩A_k
  bool equal = false;
};
struct DepthResult {
  std::optional<int> depth;  // empty: "> max_checked"
  int max_checked = 0;
  std::vector<DepthStep> steps;
  std::string describe() const;
};

DepthStep depth_step(const JonesTower& tower, int k, double tol = 1e-8);
/// Uses the levels already built.
DepthResult depth(const JonesTower& tower, double tol = 1e-8);
/// Builds levels lazily up to m, stopping at the first k that passes.
DepthResult find_depth(JonesTower& tower, int m, double tol = 1e-8);

struct IntermediateProjection {
  Element e_c;                 // in M_D
  double projection = 0.0;     // ||e^2 - e|| + ||e - e*||
  double commutes_c = 0.0;     // against λ(C)
  double compression = 0.0;    // ||e_C λ(x) e_C - λ(F(x)) e_C|| over matrix units of A
  double gns_residual = 0.0;   // distance from the GNS projection onto ξ(C)
  double worst() const { return std::max({projection, commutes_c, compression, gns_residual}); }
};

/// e_C = sum l* e_1 l for a quasi-basis of E0|_C (elements of C).  Throws
/// when verification fails.
IntermediateProjection intermediate_jones_projection(const BasicConstruction& bc, const CompatibleExpectation& ce,
                                                     const QuasiBasis& qb_c, double tol = 1e-8);

}  // namespace wat
