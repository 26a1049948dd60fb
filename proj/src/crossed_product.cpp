#include "watatani/group.hpp"

namespace wat {

namespace {

// Block matrix on l^2(G) ⊗ C^N from per-(row, col) N x N blocks.
Mat place(int n_group, int n_rep, const std::vector<std::pair<std::pair<int, int>, Mat>>& parts) {
  Mat m = Mat::Zero(n_group * n_rep, n_group * n_rep);
  for (const auto& [rc, b] : parts) m.block(rc.first * n_rep, rc.second * n_rep, n_rep, n_rep) = b;
  return m;
}

}  // namespace

CrossedProduct crossed_product(const CocycleAction& a) {
  const CocycleReport rep = verify_cocycle_action(a);
  if (!rep.ok(1e-8)) throw Error("action verification failed: " + rep.failing(1e-8));
  const auto& g = a.group;
  const auto& c = a.algebra;
  const int n = g.order();
  const int nrep = c.rep_dim();

  CrossedProduct cp;
  cp.action = a;
  cp.endo = MultiMatrixAlgebra({n * nrep});

  auto pi = [&](const Element& x) {
    std::vector<std::pair<std::pair<int, int>, Mat>> parts;
    for (int h = 0; h < n; ++h) parts.push_back({{h, h}, c.standard_rep(a.alpha[g.inv(h)].apply(x))});
    return Element({place(n, nrep, parts)});
  };
  std::vector<Element> u_conc;
  for (int x = 0; x < n; ++x) {
    std::vector<std::pair<std::pair<int, int>, Mat>> parts;
    for (int h = 0; h < n; ++h)
      parts.push_back({{h, g.mul(g.inv(x), h)}, c.standard_rep(a.sig(g.inv(h), x))});
    u_conc.push_back(Element({place(n, nrep, parts)}));
  }

  const auto units = matrix_units(c);
  std::vector<Element> pi_units;
  for (const auto& e : units) pi_units.push_back(pi(e));
  std::vector<Element> span;
  for (int x = 0; x < n; ++x)
    for (const auto& p : pi_units) span.push_back(p * u_conc[x]);
  const SubalgebraBasis basis = SubalgebraBasis::from_spanning(cp.endo, span);
  if (basis.dim() != n * c.total_dim())
    throw NumericalError("crossed product span has dimension " + std::to_string(basis.dim()) + ", expected " +
                         std::to_string(n * c.total_dim()));
  cp.concrete = decompose_subalgebra(basis);
  const auto& emb = cp.concrete.embedding();
  const auto& alg = cp.concrete.sub();

  std::vector<Element> c_images;
  for (const auto& p : pi_units) c_images.push_back(emb.preimage(p));
  cp.c_in_a = UnitalInclusion(StarHomomorphism::from_unit_images(c, alg, c_images, 1e-8));
  for (const auto& uc : u_conc) {
    if (emb.image_residual(uc) > 1e-8) throw NumericalError("u_g is not in the decomposed crossed product");
    cp.u.push_back(emb.preimage(uc));
  }

  // E(ι(e_a) u_g) = δ_{g,e} e_a, inverted on the basis {ι(e_a) u_g}.
  const int dc = c.total_dim();
  const int da = alg.total_dim();
  Mat m(da, da);
  for (int x = 0; x < n; ++x)
    for (int k = 0; k < dc; ++k) m.col(x * dc + k) = alg.coords(cp.c_in_a.embed(units[k]) * cp.u[x]);
  Mat sel = Mat::Zero(dc, da);
  for (int k = 0; k < dc; ++k) sel(k, g.identity() * dc + k) = 1.0;
  Eigen::FullPivLU<Mat> lu(m);
  if (!lu.isInvertible()) throw NumericalError("elements x u_g do not form a basis");
  cp.expectation = ConditionalExpectation(cp.c_in_a, sel * lu.inverse());
  return cp;
}

bool CrossedProductCheck::ok(double tol) const {
  return covariance <= tol && multiplication <= tol && star <= tol && generates && e_of_u <= tol &&
         equivariance <= tol && expectation.ok(tol) && basis.two_sided && basis.orthonormal && index_residual <= tol;
}

CrossedProductCheck verify_crossed_product(const CrossedProduct& cp) {
  const auto& a = cp.action;
  const auto& g = a.group;
  const auto& c = a.algebra;
  const auto& alg = cp.algebra();
  const int n = g.order();
  CrossedProductCheck r;
  const auto units = matrix_units(c);
  std::vector<Element> ua;
  for (const auto& u : cp.u) ua.push_back(u.adjoint());
  for (int x = 0; x < n; ++x) {
    for (const auto& e : units)
      r.covariance = std::max(
          r.covariance, (cp.u[x] * cp.c_in_a.embed(e) * ua[x] - cp.c_in_a.embed(a.alpha[x].apply(e))).norm());
    for (int y = 0; y < n; ++y)
      r.multiplication = std::max(
          r.multiplication, (cp.u[x] * cp.u[y] - cp.c_in_a.embed(a.sig(x, y)) * cp.u[g.mul(x, y)]).norm());
    const int xi = g.inv(x);
    r.star = std::max(r.star, (ua[x] - cp.u[xi] * cp.c_in_a.embed(a.sig(x, xi)).adjoint()).norm());
    if (x != g.identity()) r.e_of_u = std::max(r.e_of_u, cp.expectation.apply(cp.u[x]).norm());
  }
  std::vector<Element> gens;
  for (const auto& e : c.generators()) gens.push_back(cp.c_in_a.embed(e));
  for (const auto& u : cp.u) gens.push_back(u);
  r.generates = generated_subalgebra(alg, gens).dim() == alg.total_dim();

  for (const auto& x : matrix_units(alg))
    for (int k = 0; k < n; ++k) {
      const Element lhs = cp.expectation.apply(cp.u[k] * x * ua[k]);
      const Element rhs = a.alpha[k].apply(cp.expectation.apply(x));
      r.equivariance = std::max(r.equivariance, (lhs - rhs).norm());
    }
  r.expectation = verify_expectation(cp.expectation);
  r.basis = verify_quasi_basis(cp.expectation, cp.u, 1e-8);
  if (r.basis.right) {
    const IndexValue ind = watatani_index(r.basis);
    r.index_residual = (ind.element - static_cast<double>(n) * alg.identity()).norm();
  } else {
    r.index_residual = std::numeric_limits<double>::infinity();
  }
  return r;
}

namespace {

void check_normalizes(const UnitalInclusion& inc, const std::vector<Element>& witnesses, double tol) {
  const auto& a = inc.ambient();
  const auto bunits = matrix_units(inc.sub());
  for (std::size_t k = 0; k < witnesses.size(); ++k) {
    const Element& w = witnesses[k];
    if (!a.contains(w)) throw Error("witness " + std::to_string(k) + " is not in the ambient algebra");
    if ((w * w.adjoint() - a.identity()).norm() > tol || (w.adjoint() * w - a.identity()).norm() > tol)
      throw Error("witness " + std::to_string(k) + " is not unitary");
    for (const auto& e : bunits)
      if (inc.embedding().image_residual(w * inc.embed(e) * w.adjoint()) > tol)
        throw Error("witness " + std::to_string(k) + " does not normalize the subalgebra");
  }
}

// Unitaries generating B: block phases 1 - 2 p_i and clock/shift of each
// block (identity elsewhere).
std::vector<Element> unitary_generators(const MultiMatrixAlgebra& b) {
  std::vector<Element> out;
  for (int i = 0; i < b.block_count(); ++i) {
    const Element p = b.central_projection(i);
    out.push_back(b.identity() - 2.0 * p);
    const int n = b.block_size(i);
    if (n == 1) continue;
    const QuasiBasis cs = weyl_clock_shift_basis(n);
    // Clock is element 1 * n (u^1 v^0), shift is element 1 (u^0 v^1).
    for (const Element* w : {&cs.elements[static_cast<std::size_t>(n)], &cs.elements[1]}) {
      Element x = b.identity() - p;
      x.blocks[i] = w->blocks[0];
      out.push_back(x);
    }
  }
  return out;
}

}  // namespace

CosetPartition coset_partition(const UnitalInclusion& b_in_a, const ConditionalExpectation& f,
                               const std::vector<Element>& witnesses, double tol) {
  check_normalizes(b_in_a, witnesses, tol);
  if (!(f.inclusion().ambient() == b_in_a.ambient())) throw Error("expectation and inclusion have different ambient algebras");
  const Element one = b_in_a.ambient().identity();
  CosetPartition part;
  part.representatives.push_back(-1);
  for (std::size_t k = 0; k < witnesses.size(); ++k) {
    int found = -1;
    for (int cls = 0; cls < part.classes() && found < 0; ++cls) {
      const int r = part.representatives[cls];
      const Element& v = r < 0 ? one : witnesses[r];
      const double val = operator_norm(f.apply(v.adjoint() * witnesses[k]));
      if (val > 0.1 && val < 0.9) {
        part.max_ambiguity = std::max(part.max_ambiguity, val);
        throw NumericalError("witness set numerically degenerate: ||F(v* u)|| = " + std::to_string(val));
      }
      if (val > 0.5) found = cls;
    }
    if (found < 0) {
      found = part.classes();
      part.representatives.push_back(static_cast<int>(k));
    }
    part.class_of.push_back(found);
  }
  return part;
}

bool verify_regularity(const UnitalInclusion& inc, const std::vector<Element>& witnesses, double tol) {
  check_normalizes(inc, witnesses, tol);
  std::vector<Element> gens = witnesses;
  for (const auto& w : unitary_generators(inc.sub())) gens.push_back(inc.embed(w));
  return generated_subalgebra(inc.ambient(), gens).dim() == inc.ambient().total_dim();
}

bool WeylIndexReport::passed() const {
  for (const auto& l : lines)
    if (l.applicable && !l.passed) return false;
  return !lines.empty();
}

WeylIndexReport weyl_and_index_report(const UnitalInclusion& inc, const ConditionalExpectation& e0,
                                      const CompatibleExpectation& f, const std::vector<Element>& witnesses,
                                      double tol) {
  WeylIndexReport rep;
  const auto& a = inc.ambient();
  const CosetPartition part = coset_partition(inc, f.f, witnesses, 1e-8);
  rep.classes = part.classes();
  std::vector<Element> reps;
  for (int r : part.representatives) reps.push_back(r < 0 ? a.identity() : witnesses[r]);
  try {
    rep.raw_classes = coset_partition(inc, e0, witnesses, 1e-8).classes();
  } catch (const NumericalError&) {
    rep.raw_classes.reset();
  }
  rep.centralizer_dim = relative_commutant(inc).dim();
  const double cls = rep.classes;
  const bool simple_b = inc.sub().block_count() == 1;

  {
    ReportLine l{"Ind_W(F) = #classes", false, 0.0, ""};
    const QuasiBasis qb = verify_quasi_basis(f.f, reps, 1e-8);
    if (qb.right) {
      const IndexValue ind = watatani_index(qb);
      l.residual = (ind.element - cls * a.identity()).norm();
      l.passed = ind.scalar && l.residual <= tol * std::max(1.0, cls);
      l.detail = "Ind_W(F) = " + ind.describe() + ", classes = " + std::to_string(rep.classes);
    } else {
      l.residual = qb.right_residual;
      l.detail = "coset representatives are not a quasi-basis for F";
    }
    rep.lines.push_back(l);
  }

  const BasicConstruction bc = basic_construction(inc, e0);
  rep.index_e0 = bc.index;
  {
    const double expected = cls * rep.centralizer_dim;
    ReportLine l{"Ind_W(E0) = #classes * dim C_A(B)", false, 0.0, ""};
    l.residual = (bc.index.element - expected * a.identity()).norm();
    const double integrality = bc.index.scalar ? std::abs(bc.index.value - std::round(bc.index.value)) : 1.0;
    l.passed = bc.index.scalar && l.residual <= tol * std::max(1.0, expected) && integrality <= tol * expected;
    l.detail = "Ind_W(E0) = " + bc.index.describe() + ", product = " + std::to_string(static_cast<int>(expected));
    l.applicable = simple_b;
    rep.lines.push_back(l);
  }
  {
    const Eigen::MatrixXi lam = bc.a_in_a1.embedding().compose_after(inc.embedding()).multiplicities();
    rep.commutant_a1_dim = lam.cwiseProduct(lam).sum();
    ReportLine l{"#classes <= dim B'∩A_1", rep.classes <= rep.commutant_a1_dim, 0.0,
                 std::to_string(rep.classes) + " <= " + std::to_string(rep.commutant_a1_dim)};
    rep.lines.push_back(l);
  }
  {
    ReportLine l{"tau0 is the Markov trace of C ⊂ C_A(B)", false, 0.0, ""};
    try {
      const CentralizerTrace ct = centralizer_trace(e0, 1e-8);
      const TraceState mk = markov_trace_of_scalars(ct.centralizer.sub());
      const IndexValue ti = trace_index(ct.tau0);
      l.residual = std::max((ct.tau0.t - mk.t).norm(), std::abs(ti.value - rep.centralizer_dim));
      l.passed = ti.scalar && l.residual <= tol * std::max(1, rep.centralizer_dim);
      l.detail = "modulus " + ti.describe();
    } catch (const Error& err) {
      l.detail = err.what();
      l.residual = std::numeric_limits<double>::infinity();
    }
    l.applicable = simple_b;
    rep.lines.push_back(l);
  }
  return rep;
}

}  // namespace wat
