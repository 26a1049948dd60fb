#include "instances.hpp"

#include <doctest.h>

using namespace wat;
using fixtures::pauli;

namespace {

Element kron_el(const Mat& a, const Mat& b) { return Element({kron(a, b)}); }

Mat unit2(int r, int c) {
  Mat m = Mat::Zero(2, 2);
  m(r, c) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("matrix-unit basis of a trace reproduces the trace index") {
  for (const auto& dims : std::vector<std::vector<int>>{{1, 1}, {1, 2}, {3}}) {
    const MultiMatrixAlgebra p(dims);
    RVec t(p.block_count());
    double mass = 0.0;
    for (int i = 0; i < p.block_count(); ++i) mass += p.block_size(i) * (i + 1.0);
    for (int i = 0; i < p.block_count(); ++i) t(i) = (i + 1.0) / mass;
    const TraceState tr(p, t);
    const auto qb = matrix_unit_basis_for_trace(tr);
    CHECK(qb.two_sided);
    const auto ind = watatani_index(qb);
    CHECK((ind.coefficients - trace_index(tr).coefficients).norm() < 1e-10);
  }
}

TEST_CASE("clock and shift form a unitary orthonormal basis of M_n") {
  for (int n = 1; n <= 5; ++n) {
    CAPTURE(n);
    const auto qb = weyl_clock_shift_basis(n);
    CHECK(qb.size() == static_cast<std::size_t>(n * n));
    CHECK(qb.unitary);
    CHECK(qb.orthonormal);
    CHECK(qb.two_sided);
    CHECK(qb.unitary_residual < 1e-12);
    CHECK(qb.orthonormal_residual < 1e-12);
    CHECK(std::abs(watatani_index(qb).value - n * n) < 1e-12);
  }
}

TEST_CASE("two different bases of diag in M2 give the same index") {
  const auto inc = diagonal_inclusion(2);
  const auto e = minimal_expectation(inc);
  const auto pauli_basis = verify_quasi_basis(e, {Element({pauli('I')}), Element({pauli('X')})});
  std::vector<Element> units;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) units.push_back(Element({unit2(r, c)}));
  const auto unit_basis = verify_quasi_basis(e, units);
  REQUIRE(pauli_basis.right);
  REQUIRE(unit_basis.right);
  const auto a = watatani_index(pauli_basis);
  const auto b = watatani_index(unit_basis);
  CHECK((a.element - b.element).norm() < 1e-9);
  CHECK(a.value == doctest::Approx(2.0));
}

TEST_CASE("two different bases of M2 (x) 1 in M4 give the same index") {
  const auto inc = tensor_inclusion(2, 2);
  const auto e = minimal_expectation(inc);
  std::vector<Element> paulis;
  for (char c : std::string("IXYZ")) paulis.push_back(kron_el(Mat::Identity(2, 2), pauli(c)));
  std::vector<Element> units;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) units.push_back(std::sqrt(2.0) * kron_el(Mat::Identity(2, 2), unit2(r, c)));
  const auto qa = verify_quasi_basis(e, paulis);
  const auto qb = verify_quasi_basis(e, units);
  REQUIRE(qa.two_sided);
  REQUIRE(qb.two_sided);
  CHECK(qa.unitary);
  CHECK_FALSE(qb.unitary);
  CHECK((watatani_index(qa).element - watatani_index(qb).element).norm() < 1e-9);
  CHECK(watatani_index(qa).value == doctest::Approx(4.0));
}

TEST_CASE("an incomplete set is not a quasi-basis") {
  const auto inc = tensor_inclusion(2, 2);
  const auto e = minimal_expectation(inc);
  const auto qb = verify_quasi_basis(e, {kron_el(Mat::Identity(2, 2), pauli('I')), kron_el(Mat::Identity(2, 2), pauli('X'))});
  CHECK_FALSE(qb.right);
  CHECK_FALSE(qb.left);
  CHECK_THROWS_AS(watatani_index(qb), Error);
}

TEST_CASE("averaging over a basis implements E0 on the centralizer") {
  const auto inc = tensor_inclusion(2, 2);
  const auto e = minimal_expectation(inc);
  std::vector<Element> paulis;
  for (char c : std::string("IXYZ")) paulis.push_back(kron_el(Mat::Identity(2, 2), pauli(c)));
  const auto qb = verify_quasi_basis(e, paulis);
  for (const auto& z : relative_commutant(inc).elements()) CHECK(averaging_check(e, qb, z) < 1e-12);
}

TEST_CASE("composing quasi-bases through an intermediate algebra multiplies indices") {
  // C ⊂ M2 ⊗ 1 ⊂ M4 with normalized traces.
  const auto outer_inc = tensor_inclusion(2, 2);
  const auto outer_e = minimal_expectation(outer_inc);
  std::vector<Element> outer_basis;
  for (char c : std::string("IXYZ")) outer_basis.push_back(kron_el(Mat::Identity(2, 2), pauli(c)));
  const auto outer = verify_quasi_basis(outer_e, outer_basis);
  const auto inner_e = trace_expectation(markov_trace_of_scalars(MultiMatrixAlgebra({2})));
  std::vector<Element> inner_basis;
  for (char c : std::string("IXYZ")) inner_basis.push_back(Element({pauli(c)}));
  const auto inner = verify_quasi_basis(inner_e, inner_basis);
  const auto comp = compose_quasi_bases(outer, inner);
  CHECK(comp.size() == 16);
  CHECK(comp.right);
  CHECK(watatani_index(comp).value == doctest::Approx(16.0));
}

TEST_CASE("unitary basis search succeeds on Markov traces") {
  for (const auto& dims : std::vector<std::vector<int>>{{1, 1}, {1, 2}}) {
    const MultiMatrixAlgebra p(dims);
    const auto tr = markov_trace_of_scalars(p);
    const auto res = unitary_basis_search(tr);
    CAPTURE(p.describe());
    CHECK(res.success);
    CHECK(res.best_residual <= 1e-6);
    REQUIRE(res.basis.has_value());
    CHECK(res.basis->unitary);
    CHECK(res.basis->right);
    CHECK(static_cast<int>(res.basis->size()) == p.total_dim());
  }
}

TEST_CASE("unitary basis search is exact for a full matrix algebra") {
  const auto res = unitary_basis_search(markov_trace_of_scalars(MultiMatrixAlgebra({3})));
  CHECK(res.exact);
  CHECK(res.best_residual < 1e-12);
}

TEST_CASE("unitary basis search rejects a non-Markov trace") {
  const MultiMatrixAlgebra p({1, 2});
  const TraceState tr(p, (RVec(2) << 0.5, 0.25).finished());
  CHECK_THROWS_AS(unitary_basis_search(tr), Error);
}

TEST_CASE("unitary basis search is deterministic for a fixed seed") {
  const auto tr = markov_trace_of_scalars(MultiMatrixAlgebra({1, 1}));
  UnitarySearchConfig cfg;
  cfg.seed = 7;
  const auto a = unitary_basis_search(tr, cfg);
  const auto b = unitary_basis_search(tr, cfg);
  REQUIRE(a.basis.has_value());
  REQUIRE(b.basis.has_value());
  CHECK(a.best_restart == b.best_restart);
  CHECK(a.best_residual == b.best_residual);
  for (std::size_t k = 0; k < a.basis->size(); ++k)
    CHECK((a.basis->elements[k] - b.basis->elements[k]).norm() == 0.0);
}
