#include "instances.hpp"

#include <doctest.h>

using namespace wat;
using fixtures::pauli;

TEST_CASE("Jones relations hold for the minimal expectation of every test inclusion") {
  for (const auto& ni : fixtures::inclusions()) {
    if (!ni.inc.connected()) continue;
    CAPTURE(ni.name);
    const auto e = minimal_expectation(ni.inc);
    const auto bc = basic_construction(ni.inc, e);
    const auto jr = verify_jones_relations(bc);
    CHECK(jr.worst() < 1e-9);
    CHECK(basis_characterization_residual(bc, bc.canonical_basis) < 1e-9);
    const auto dual = verify_dual_expectation(bc);
    CHECK(dual.consistency < 1e-9);
    CHECK(dual.e1_value < 1e-9);
    CHECK(dual.expectation.ok());
  }
}

TEST_CASE("A_1 computed abstractly matches the span of A e_1 A") {
  for (const auto& ni : fixtures::inclusions()) {
    if (ni.inc.ambient().total_dim() > 9) continue;
    CAPTURE(ni.name);
    const auto bc = basic_construction(ni.inc, minimal_expectation(ni.inc));
    const auto span = a1_by_span(bc);
    CHECK(span.dim() == bc.a1().total_dim());
    for (const auto& e : matrix_units(bc.a1())) CHECK(span.residual(bc.a1_in_endo.embed(e)) < 1e-9);
  }
}

TEST_CASE("A_1 has inclusion matrix Lambda^T over A") {
  for (const auto& ni : fixtures::inclusions()) {
    CAPTURE(ni.name);
    const auto bc = basic_construction(ni.inc, minimal_expectation_info(ni.inc).expectation);
    // The dimension vector of A_1 is Lambda^T applied to B's, up to block order.
    const Eigen::VectorXi nb = Eigen::Map<const Eigen::VectorXi>(ni.inc.sub().dims().data(), ni.inc.sub().block_count());
    std::vector<int> want;
    for (int i = 0; i < nb.size(); ++i) {
      int n = 0;
      for (int j = 0; j < ni.inc.ambient().block_count(); ++j) n += ni.inc.inclusion_matrix()(i, j) * ni.inc.ambient().block_size(j);
      want.push_back(n);
    }
    std::vector<int> got = bc.a1().dims();
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    CHECK(got == want);
  }
}

TEST_CASE("both bases of diag in M2 characterize e_1") {
  const auto inc = diagonal_inclusion(2);
  const auto bc = basic_construction(inc, minimal_expectation(inc));
  CHECK(basis_characterization_residual(bc, {Element({pauli('I')}), Element({pauli('X')})}) < 1e-9);
  std::vector<Element> units;
  for (const auto& u : matrix_units(inc.ambient())) units.push_back(u);
  CHECK(basis_characterization_residual(bc, units) < 1e-9);
  // A set that is not a basis does not.
  CHECK(basis_characterization_residual(bc, {Element({pauli('I')})}) > 0.1);
}

TEST_CASE("dual expectation of a minimal expectation has the same index") {
  for (const auto& ni : fixtures::inclusions()) {
    if (!ni.inc.connected() || ni.inc.ambient().total_dim() > 9) continue;
    CAPTURE(ni.name);
    const auto bc = basic_construction(ni.inc, minimal_expectation(ni.inc));
    REQUIRE(bc.index.scalar);
    const auto bc2 = basic_construction(bc.a_in_a1, bc.dual);
    REQUIRE(bc2.index.scalar);
    CHECK(std::abs(bc.index.value - bc2.index.value) < 1e-9);
    // Minimal index of a connected inclusion is the Markov modulus.
    CHECK(std::abs(bc.index.value - markov_trace(ni.inc).modulus) < 1e-9);
  }
}

TEST_CASE("the GNS cap is enforced") {
  const auto inc = tensor_inclusion(2, 2);
  CHECK_THROWS_WITH_AS(basic_construction(inc, minimal_expectation(inc), 8), doctest::Contains("16"), Error);
}

TEST_CASE("towers: indices are constant and Jones relations hold at each level") {
  const auto inc = diagonal_inclusion(2);
  const auto tower = jones_tower(inc, minimal_expectation(inc), 3);
  REQUIRE(tower.top() == 3);
  for (int k = 1; k <= 3; ++k) {
    const auto& lv = tower.levels[static_cast<std::size_t>(k)];
    CAPTURE(k);
    REQUIRE(lv.index.has_value());
    CHECK(lv.index->value == doctest::Approx(2.0));
    CHECK(verify_jones_relations(*lv.bc).worst() < 1e-9);
  }
}

TEST_CASE("depth of regular inclusions is at most two") {
  std::vector<UnitalInclusion> cases{identity_inclusion(MultiMatrixAlgebra({2})), diagonal_inclusion(2),
                                     tensor_inclusion(2, 2), tensor_inclusion(2, 1)};
  for (const auto& inc : cases) {
    JonesTower tower = start_tower(inc, minimal_expectation(inc));
    const auto d = find_depth(tower, 3);
    REQUIRE(d.depth.has_value());
    CHECK(*d.depth <= 2);
  }
}

TEST_CASE("scalars inside any algebra have depth one") {
  // B'∩A_1 = A_1 = span A e_1 A when B = C.
  const auto inc = scalar_inclusion(MultiMatrixAlgebra({1, 2}));
  JonesTower tower = start_tower(inc, minimal_expectation(inc));
  const auto d = find_depth(tower, 2);
  REQUIRE(d.depth.has_value());
  CHECK(*d.depth == 1);
}

TEST_CASE("intermediate Jones projection for diag in M2 inside M2") {
  // B = C, C = diag, A = M2.
  const MultiMatrixAlgebra m2({2});
  const auto inc = scalar_inclusion(m2);
  const auto e0 = minimal_expectation(inc);
  const auto bc = basic_construction(inc, e0);
  const auto diag = SubalgebraBasis::from_spanning(m2, {m2.unit(0, 0, 0), m2.unit(0, 1, 1)});
  const auto ce = compatible_expectation(inc, diag, e0);
  CHECK(ce.compatibility_residual < 1e-10);
  const auto qb = verify_quasi_basis(ce.e0_on_c, [&] {
    std::vector<Element> v;
    for (const auto& e : matrix_units(ce.c_in_a.sub())) v.push_back(std::sqrt(2.0) * e);
    return v;
  }());
  REQUIRE(qb.right);
  const auto ip = intermediate_jones_projection(bc, ce, qb);
  CHECK(ip.worst() < 1e-9);
}
