#pragma once

// Finite groups, cocycle actions, twisted crossed products, automorphism
// classification, coset partitions and recovery of the crossed-product
// structure of a regular inclusion.

#include "watatani/tower.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wat {

class FiniteGroup {
 public:
  FiniteGroup() = default;
  /// Validates closure, associativity (exhaustively), identity and inverses.
  FiniteGroup(std::vector<std::string> labels, std::vector<std::vector<int>> table);

  static FiniteGroup cyclic(int n);
  static FiniteGroup klein();
  static FiniteGroup dihedral(int n);    // order 2n
  static FiniteGroup quaternion();       // Q8
  static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);

  int order() const { return static_cast<int>(table_.size()); }
  int mul(int g, int h) const { return table_[g][h]; }
  int inv(int g) const { return inverse_[g]; }
  int identity() const { return identity_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::vector<int>>& table() const { return table_; }
  int element_order(int g) const;
  int index_of(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  int identity_ = 0;
};

/// Bijection f with f(gh) = f(g)f(h), found by brute force (order <= 8).
std::optional<std::vector<int>> find_isomorphism(const FiniteGroup& a, const FiniteGroup& b);

/// alpha_g are automorphisms of C; sigma(g,h) unitaries of C.
struct CocycleAction {
  FiniteGroup group;
  MultiMatrixAlgebra algebra;
  std::vector<StarHomomorphism> alpha;
  std::vector<Element> sigma;  // index g * |G| + h

  const Element& sig(int g, int h) const { return sigma[static_cast<std::size_t>(g * group.order() + h)]; }
};

/// Ad(u) as an automorphism (u block-diagonal unitary).
StarHomomorphism inner_automorphism(const MultiMatrixAlgebra& c, const Element& u);
CocycleAction trivial_action(const FiniteGroup& g, const MultiMatrixAlgebra& c);
/// alpha_g = Ad(u_g), sigma = 1 (or the given scalar cocycle).
CocycleAction inner_action(const FiniteGroup& g, const MultiMatrixAlgebra& c, const std::vector<Element>& u,
                           const std::vector<cd>& scalar_cocycle = {});
/// G acting on C^k by permuting coordinates: perm[g][i] = image of i.
CocycleAction permutation_action(const FiniteGroup& g, int k, const std::vector<std::vector<int>>& perm);

struct CocycleReport {
  double automorphism = 0.0;   // relation residual of each alpha_g
  double composition = 0.0;    // alpha_g alpha_h - Ad(sigma) alpha_gh
  double cocycle = 0.0;        // sigma(g,h) sigma(gh,k) - alpha_g(sigma(h,k)) sigma(g,hk)
  double normalization = 0.0;  // sigma(g,e), sigma(e,g), alpha_e
  double unitary = 0.0;        // sigma unitary
  bool ok(double tol = kTol) const;
  /// Name of the first failing identity, empty when all pass.
  std::string failing(double tol = kTol) const;
};
CocycleReport verify_cocycle_action(const CocycleAction& a);

struct CrossedProduct {
  CocycleAction action;
  MultiMatrixAlgebra endo;    // M_{|G| N}, N = rep dim of C
  UnitalInclusion concrete;   // A ⊂ endo
  UnitalInclusion c_in_a;     // C ⊂ A
  std::vector<Element> u;     // u_g in A
  ConditionalExpectation expectation;  // canonical E: A -> C

  const MultiMatrixAlgebra& algebra() const { return c_in_a.ambient(); }
};

/// Twisted regular representation on l^2(G) ⊗ C^N:
/// (π(x)ξ)(h) = α_{h^{-1}}(x) ξ(h), (u_g ξ)(h) = σ(h^{-1}, g) ξ(g^{-1}h).
CrossedProduct crossed_product(const CocycleAction& a);

struct CrossedProductCheck {
  double covariance = 0.0;      // u_g x u_g* = α_g(x)
  double multiplication = 0.0;  // u_g u_h = σ(g,h) u_gh
  double star = 0.0;            // u_g* = u_{g^-1} σ(g,g^-1)*
  bool generates = false;
  double e_of_u = 0.0;          // max ||E(u_g)||, g != e
  double equivariance = 0.0;    // E(u_g x u_g*) = α_g(E(x))
  ExpectationCheck expectation;
  QuasiBasis basis;             // {u_g}
  double index_residual = 0.0;  // ||Ind - |G|||
  bool ok(double tol = 1e-10) const;
};
CrossedProductCheck verify_crossed_product(const CrossedProduct& cp);

struct AutomorphismReport {
  bool inner = false;
  bool free = false;
  int intertwiner_dim = 0;
  std::optional<Element> witness;  // unitary with θ = Ad(witness)
  double witness_residual = 0.0;
  bool trivial_center = false;
  bool consistent = true;  // on trivial-center algebras: outer <=> free
};
AutomorphismReport classify_automorphism(const StarHomomorphism& theta, double tol = 1e-8);

struct CosetPartition {
  std::vector<int> class_of;   // per witness
  std::vector<int> representatives;  // witness index, -1 for the implicit identity
  int classes() const { return static_cast<int>(representatives.size()); }
  double max_ambiguity = 0.0;  // largest value seen inside the (0.1, 0.9) band check
};

/// Classes of witnesses by ||F(v* u)|| > 0.5 (same class).  F maps A onto
/// an intermediate algebra (or B).  The identity's class is first.
CosetPartition coset_partition(const UnitalInclusion& b_in_a, const ConditionalExpectation& f,
                               const std::vector<Element>& witnesses, double tol = 1e-8);

/// Generated by witnesses and unitary generators of ι(B) equals A.
bool verify_regularity(const UnitalInclusion& inc, const std::vector<Element>& witnesses, double tol = 1e-8);

struct ReportLine {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  std::string detail;
  bool applicable = true;  // false when a hypothesis (B simple) is not met
};

struct WeylIndexReport {
  int classes = 0;             // generalized Weyl classes (mod U(B)U(C_A(B)))
  std::optional<int> raw_classes;  // classes mod U(B) via E0, when decidable
  int centralizer_dim = 0;
  int commutant_a1_dim = 0;
  IndexValue index_e0;
  std::vector<ReportLine> lines;
  /// Every applicable line passed.
  bool passed() const;
};

/// Lines (b) and (d) assume B simple and are marked not applicable otherwise.
WeylIndexReport weyl_and_index_report(const UnitalInclusion& inc, const ConditionalExpectation& e0,
                                      const CompatibleExpectation& f, const std::vector<Element>& witnesses,
                                      double tol = 1e-9);

struct RecoveredStructure {
  FiniteGroup group;
  CocycleAction action;      // on the abstract C
  CrossedProduct rebuilt;
  std::vector<Element> reps;  // reordered, identity first
  Mat phi;                   // A-coords -> rebuilt-coords
  double phi_multiplicative = 0.0;
  double phi_star = 0.0;
  double phi_on_c = 0.0;
  int phi_rank = 0;
  CocycleReport cocycle;
  std::vector<AutomorphismReport> restricted_to_b;  // per g
  double worst() const { return std::max({phi_multiplicative, phi_star, phi_on_c}); }
};

/// Throws "witness set does not certify regularity" when the reps and C do
/// not span A.
RecoveredStructure recover_structure(const UnitalInclusion& inc, const CompatibleExpectation& f,
                                     const std::vector<Element>& reps, double tol = 1e-8);

}  // namespace wat
