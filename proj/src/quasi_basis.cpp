#include "watatani/quasi_basis.hpp"

#include <cmath>
#include <numbers>

namespace wat {

QuasiBasis verify_quasi_basis(const ConditionalExpectation& e, std::vector<Element> s, double tol) {
  const auto& inc = e.inclusion();
  const auto& a = inc.ambient();
  const auto& b = inc.sub();
  for (const auto& x : s)
    if (!a.contains(x)) throw Error("quasi-basis element is not in the ambient algebra");

  QuasiBasis qb;
  qb.expectation = e;
  qb.elements = std::move(s);
  const auto& el = qb.elements;
  std::vector<Element> adj;
  for (const auto& l : el) adj.push_back(l.adjoint());

  for (int j = 0; j < a.block_count(); ++j)
    for (int p = 0; p < a.block_size(j); ++p)
      for (int q = 0; q < a.block_size(j); ++q) {
        const Element x = a.unit(j, p, q);
        Element r = a.zero();
        Element l = a.zero();
        for (std::size_t i = 0; i < el.size(); ++i) {
          r += e.apply_ambient(x * el[i]) * adj[i];
          l += e.apply_ambient(x * adj[i]) * el[i];
        }
        qb.right_residual = std::max(qb.right_residual, (r - x).norm());
        qb.left_residual = std::max(qb.left_residual, (l - x).norm());
      }
  qb.right = qb.right_residual <= tol;
  qb.left = qb.left_residual <= tol;
  qb.two_sided = qb.right && qb.left;

  const Element one_b = b.identity();
  for (std::size_t i = 0; i < el.size(); ++i)
    for (std::size_t k = 0; k < el.size(); ++k) {
      const Element g = e.apply(adj[i] * el[k]);
      qb.orthonormal_residual = std::max(qb.orthonormal_residual, (i == k ? g - one_b : g).norm());
    }
  qb.orthonormal = qb.orthonormal_residual <= tol;

  const Element one_a = a.identity();
  for (std::size_t i = 0; i < el.size(); ++i) {
    qb.unitary_residual = std::max(qb.unitary_residual, (adj[i] * el[i] - one_a).norm());
    qb.unitary_residual = std::max(qb.unitary_residual, (el[i] * adj[i] - one_a).norm());
  }
  qb.unitary = !el.empty() && qb.unitary_residual <= tol;
  return qb;
}

IndexValue watatani_index(const QuasiBasis& qb, double tol) {
  if (!qb.right && !qb.left) throw Error("set is neither a right nor a left quasi-basis");
  const auto& a = qb.expectation.inclusion().ambient();
  Element sum_r = a.zero();
  Element sum_l = a.zero();
  for (const auto& l : qb.elements) {
    sum_r += l * l.adjoint();
    sum_l += l.adjoint() * l;
  }
  if (qb.two_sided && (sum_r - sum_l).norm() > tol * std::max(1.0, sum_r.norm()))
    throw NumericalError("right and left index of a two-sided quasi-basis disagree");
  return make_index_value(a, qb.right ? sum_r : sum_l, tol);
}

double averaging_check(const ConditionalExpectation& e0, const QuasiBasis& qb, const Element& x, double tol) {
  const auto& inc = e0.inclusion();
  for (const auto& g : inc.sub().generators())
    if (commutator(inc.embed(g), x).norm() > tol * std::max(1.0, x.norm()))
      throw Error("element does not lie in the relative commutant");
  const IndexValue ind = watatani_index(qb);
  const auto& a = inc.ambient();
  Element avg = a.zero();
  for (const auto& l : qb.elements) avg += l * x * l.adjoint();
  Element inv = a.zero();
  for (int i = 0; i < a.block_count(); ++i)
    inv.blocks[i] = (1.0 / ind.coefficients(i)) * Mat::Identity(a.block_size(i), a.block_size(i));
  return (e0.apply_ambient(x) - inv * avg).norm();
}

ConditionalExpectation trace_expectation(const TraceState& tr) {
  return ConditionalExpectation(scalar_inclusion(tr.algebra), tr.functional());
}

QuasiBasis matrix_unit_basis_for_trace(const TraceState& tr) {
  if (!tr.faithful()) throw Error("trace is not faithful");
  const auto& p = tr.algebra;
  std::vector<Element> s;
  for (int i = 0; i < p.block_count(); ++i) {
    const double c = std::sqrt(p.block_size(i) / tr.projection_trace(i));
    for (int k = 0; k < p.block_size(i); ++k)
      for (int b = 0; b < p.block_size(i); ++b) s.push_back(c * p.unit(i, k, b));
  }
  return verify_quasi_basis(trace_expectation(tr), std::move(s));
}

QuasiBasis weyl_clock_shift_basis(int n) {
  if (n < 1) throw Error("clock/shift basis needs n >= 1");
  const MultiMatrixAlgebra p({n});
  Mat u = Mat::Zero(n, n);
  Mat v = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    u(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
    v((k + 1) % n, k) = 1.0;
  }
  std::vector<Element> s;
  Mat ua = Mat::Identity(n, n);
  for (int a = 0; a < n; ++a) {
    Mat w = ua;
    for (int b = 0; b < n; ++b) {
      s.push_back(Element({w}));
      w = w * v;
    }
    ua = ua * u;
  }
  RVec t = RVec::Constant(1, 1.0 / n);
  return verify_quasi_basis(trace_expectation(TraceState(p, t)), std::move(s));
}

CentralizerTrace centralizer_trace(const ConditionalExpectation& e0, double tol) {
  CentralizerTrace ct;
  ct.centralizer = relative_commutant_decomposed(e0.inclusion().embedding());
  const auto& c = ct.centralizer.sub();
  const auto& b = e0.inclusion().sub();
  RVec t(c.block_count());
  for (int k = 0; k < c.block_count(); ++k) {
    const Element y = e0.apply(ct.centralizer.embedding().unit_image(k, 0, 0));
    const cd s = y.blocks[0](0, 0);
    if ((y - s * b.identity()).norm() > tol) throw Error("expectation does not map the centralizer into the scalars");
    t(k) = s.real();
  }
  ct.tau0 = TraceState(c, t);
  return ct;
}

QuasiBasis lift_trace_basis_to_C(const std::vector<Element>& basis_in_a, const CompatibleExpectation& ce, double tol) {
  const auto& h = ce.c_in_a.embedding();
  std::vector<Element> in_c;
  for (const auto& x : basis_in_a) {
    if (h.image_residual(x) > 1e-8) throw Error("basis element does not lie in C");
    in_c.push_back(h.preimage(x));
  }
  QuasiBasis qb = verify_quasi_basis(ce.e0_on_c, std::move(in_c), tol);
  if (!qb.two_sided)
    throw Error("lifted basis is not a two-sided quasi-basis for E0 on C (residual " +
                std::to_string(std::max(qb.right_residual, qb.left_residual)) + ")");
  return qb;
}

QuasiBasis compose_quasi_bases(const QuasiBasis& outer, const QuasiBasis& inner, double tol) {
  const ConditionalExpectation fe = compose_expectations(outer.expectation, inner.expectation);
  const auto& emb = outer.expectation.inclusion();
  std::vector<Element> s;
  const bool right = outer.right && inner.right;
  if (!right && !(outer.left && inner.left)) throw Error("quasi-bases must be both right or both left");
  for (const auto& l : outer.elements)
    for (const auto& m : inner.elements) {
      const Element mi = emb.embed(m);
      s.push_back(right ? l * mi : mi * l);
    }
  return verify_quasi_basis(fe, std::move(s), tol);
}

}  // namespace wat
