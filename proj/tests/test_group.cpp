#include "instances.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <map>

using namespace wat;
using fixtures::pauli;

namespace {

std::vector<int> sorted_dims(const MultiMatrixAlgebra& a) {
  std::vector<int> d = a.dims();
  std::sort(d.begin(), d.end());
  return d;
}

SubalgebraBasis image_span(const UnitalInclusion& inc) {
  std::vector<Element> v;
  for (const auto& e : matrix_units(inc.sub())) v.push_back(inc.embed(e));
  return SubalgebraBasis::from_spanning(inc.ambient(), v);
}

std::vector<Element> image_units(const UnitalInclusion& inc) {
  std::vector<Element> v;
  for (const auto& e : matrix_units(inc.sub())) v.push_back(inc.embed(e));
  return v;
}

// Type of C x| G worked out by hand for each fixture.
const std::map<std::string, std::vector<int>>& expected_types() {
  static const std::map<std::string, std::vector<int>> t{
      {"C x| Z2", {1, 1}},
      {"C x| Z3", {1, 1, 1}},
      {"C x| Klein, twisted", {2}},
      {"C+C x| Z2 swap", {2}},
      {"C^3 x| Z3 shift", {3}},
      {"C^4 x| Z4 shift", {4}},
      {"M2 x| Z2 Ad Z", {2, 2}},
      {"M2 x| Klein Ad Pauli", {4}},
      {"M2 x| Klein Ad Pauli, twisted", {2, 2, 2, 2}},
  };
  return t;
}

}  // namespace

TEST_CASE("group constructors have the right orders and element orders") {
  CHECK(FiniteGroup::cyclic(5).order() == 5);
  CHECK(FiniteGroup::klein().order() == 4);
  CHECK(FiniteGroup::dihedral(4).order() == 8);
  const auto q = FiniteGroup::quaternion();
  CHECK(q.order() == 8);
  int order_four = 0;
  for (int g = 0; g < 8; ++g) order_four += q.element_order(g) == 4;
  CHECK(order_four == 6);
  CHECK(FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)).order() == 6);
}

TEST_CASE("invalid multiplication tables are rejected") {
  CHECK_THROWS_AS(FiniteGroup({"e", "a"}, {{0, 1}, {1, 1}}), Error);
  CHECK_THROWS_AS(FiniteGroup({"e", "a", "b"}, {{0, 1, 2}, {1, 0, 2}, {2, 2, 0}}), Error);
  CHECK_NOTHROW(FiniteGroup({"e", "a"}, {{0, 1}, {1, 0}}));
}

TEST_CASE("group isomorphism search") {
  CHECK(find_isomorphism(FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)), FiniteGroup::klein()));
  CHECK(find_isomorphism(FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)), FiniteGroup::cyclic(6)));
  CHECK_FALSE(find_isomorphism(FiniteGroup::cyclic(4), FiniteGroup::klein()));
  CHECK_FALSE(find_isomorphism(FiniteGroup::dihedral(4), FiniteGroup::quaternion()));
  CHECK_FALSE(find_isomorphism(FiniteGroup::dihedral(3), FiniteGroup::cyclic(6)));
  const auto f = find_isomorphism(FiniteGroup::dihedral(4), FiniteGroup::dihedral(4));
  REQUIRE(f);
  const auto d = FiniteGroup::dihedral(4);
  for (int g = 0; g < 8; ++g)
    for (int h = 0; h < 8; ++h) CHECK((*f)[static_cast<std::size_t>(d.mul(g, h))] == d.mul((*f)[g], (*f)[h]));
}

TEST_CASE("fixture actions are cocycle actions") {
  for (const auto& na : fixtures::small_actions()) {
    CAPTURE(na.name);
    CHECK(verify_cocycle_action(na.action).ok());
  }
}

TEST_CASE("a corrupted cocycle is caught by the cocycle identity") {
  auto act = fixtures::small_actions()[2].action;  // C x| Klein, twisted
  const int b = 2, a = 1;
  act.sigma[static_cast<std::size_t>(b * 4 + a)] = -1.0 * act.sigma[static_cast<std::size_t>(b * 4 + a)];
  const auto r = verify_cocycle_action(act);
  CHECK_FALSE(r.ok());
  CHECK(r.failing().rfind("cocycle", 0) == 0);
}

TEST_CASE("crossed products have the expected type and satisfy their contracts") {
  for (const auto& na : fixtures::small_actions()) {
    CAPTURE(na.name);
    const auto cp = crossed_product(na.action);
    CHECK(sorted_dims(cp.algebra()) == expected_types().at(na.name));
    CHECK(cp.algebra().total_dim() == na.action.group.order() * na.action.algebra.total_dim());
    const auto k = verify_crossed_product(cp);
    CHECK(k.ok(1e-10));
    CHECK(k.e_of_u < 1e-10);
    CHECK(k.equivariance < 1e-10);
    CHECK(k.basis.right);
    CHECK(k.index_residual < 1e-10);
  }
}

TEST_CASE("crossed products by groups of order eight") {
  const MultiMatrixAlgebra c1({1}), m2({2});
  const auto q = crossed_product(trivial_action(FiniteGroup::quaternion(), c1));
  CHECK(sorted_dims(q.algebra()) == std::vector<int>{1, 1, 1, 1, 2});
  const auto d = crossed_product(trivial_action(FiniteGroup::dihedral(4), c1));
  CHECK(sorted_dims(d.algebra()) == std::vector<int>{1, 1, 1, 1, 2});
  const auto s3 = crossed_product(trivial_action(FiniteGroup::dihedral(3), m2));
  CHECK(sorted_dims(s3.algebra()) == std::vector<int>{2, 2, 4});
  CHECK(verify_crossed_product(q).ok());
  CHECK(verify_crossed_product(s3).ok());
}

TEST_CASE("classification of automorphisms") {
  const auto swap = fixtures::small_actions()[3].action;
  const auto r = classify_automorphism(swap.alpha[1]);
  CHECK_FALSE(r.inner);
  CHECK(r.free);
  CHECK(r.intertwiner_dim == 0);
  const MultiMatrixAlgebra m2({2});
  const auto ad = classify_automorphism(inner_automorphism(m2, Element({pauli('X')})));
  CHECK(ad.inner);
  CHECK_FALSE(ad.free);
  CHECK(ad.intertwiner_dim == 1);
  CHECK(ad.trivial_center);
  CHECK(ad.consistent);
  REQUIRE(ad.witness);
  // Ad(w) = Ad(X) forces w = cX with |c| = 1.
  const Mat w = ad.witness->blocks[0];
  CHECK(std::abs(std::abs((pauli('X').adjoint() * w).trace() / 2.0) - 1.0) < 1e-10);
  // Identity on C+C: inner but not free; the center is not trivial.
  const auto id = classify_automorphism(StarHomomorphism::identity(MultiMatrixAlgebra({1, 1})));
  CHECK(id.inner);
  CHECK_FALSE(id.free);
  CHECK_FALSE(id.trivial_center);
}

TEST_CASE("coset partitions of crossed products match the dense oracle") {
  for (const auto& na : fixtures::small_actions()) {
    CAPTURE(na.name);
    const auto cp = crossed_product(na.action);
    const auto span_c = image_span(cp.c_in_a);
    const auto f = compatible_expectation(cp.c_in_a, span_c, cp.expectation);
    // Two witnesses per group element: u_g and c u_g for a unitary c of C.
    std::vector<Element> wit;
    const auto& alg = na.action.algebra;
    const Element c = cp.c_in_a.embed(alg.identity() - 2.0 * alg.central_projection(0));
    for (int g = 0; g < na.action.group.order(); ++g) {
      wit.push_back(cp.u[static_cast<std::size_t>(g)]);
      wit.push_back(c * cp.u[static_cast<std::size_t>(g)]);
    }
    const auto part = coset_partition(cp.c_in_a, f.f, wit);
    CHECK(part.classes() == na.action.group.order());
    REQUIRE(part.representatives.size() >= 1);
    const auto same = oracle::coset_relation(cp.algebra(), image_units(cp.c_in_a), wit);
    CHECK(oracle::count_classes(same) == part.classes());
    for (std::size_t i = 0; i < wit.size(); ++i)
      for (std::size_t j = 0; j < wit.size(); ++j)
        CHECK((part.class_of[i] == part.class_of[j]) == same[i + 1][j + 1]);
    CHECK(verify_regularity(cp.c_in_a, cp.u));
  }
}

TEST_CASE("regularity fails without enough witnesses") {
  const auto cp = crossed_product(fixtures::small_actions()[3].action);  // C+C x| Z2 = M2
  CHECK_FALSE(verify_regularity(cp.c_in_a, {}));
  CHECK(verify_regularity(cp.c_in_a, {cp.u[1]}));
}

TEST_CASE("structure recovery round trip") {
  std::vector<fixtures::NamedAction> cases = fixtures::small_actions();
  cases.push_back({"C x| Q8", trivial_action(FiniteGroup::quaternion(), MultiMatrixAlgebra({1}))});
  cases.push_back({"C x| D4", trivial_action(FiniteGroup::dihedral(4), MultiMatrixAlgebra({1}))});
  for (const auto& na : cases) {
    CAPTURE(na.name);
    const auto cp = crossed_product(na.action);
    const auto f = compatible_expectation(cp.c_in_a, image_span(cp.c_in_a), cp.expectation);
    const auto rs = recover_structure(cp.c_in_a, f, cp.u);
    CHECK(find_isomorphism(rs.group, na.action.group).has_value());
    CHECK(rs.cocycle.ok());
    CHECK(rs.worst() < 1e-8);
    CHECK(rs.phi_rank == cp.algebra().total_dim());
    CHECK(sorted_dims(rs.rebuilt.algebra()) == sorted_dims(cp.algebra()));
  }
}

TEST_CASE("recovery refuses a witness set that does not span") {
  const auto cp = crossed_product(fixtures::small_actions()[1].action);  // C x| Z3
  const auto f = compatible_expectation(cp.c_in_a, image_span(cp.c_in_a), cp.expectation);
  CHECK_THROWS_WITH_AS(recover_structure(cp.c_in_a, f, {cp.u[0], cp.u[1]}), doctest::Contains("regularity"), Error);
}

TEST_CASE("Weyl classes and the index formula on M2 (x) 1 in M4") {
  const auto inc = tensor_inclusion(2, 2);
  const auto e0 = minimal_expectation(inc);
  std::vector<Element> gens;
  for (const auto& g : inc.sub().generators()) gens.push_back(inc.embed(g));
  for (const auto& z : relative_commutant(inc).elements()) gens.push_back(z);
  const auto c = generated_subalgebra(inc.ambient(), gens);
  CHECK(c.dim() == 16);
  const auto f = compatible_expectation(inc, c, e0);
  std::vector<Element> wit;
  for (char p : std::string("XZ")) wit.push_back(Element({kron(Mat::Identity(2, 2), pauli(p))}));
  const auto rep = weyl_and_index_report(inc, e0, f, wit);
  CHECK(rep.classes == 1);
  CHECK(rep.centralizer_dim == 4);
  CHECK(rep.index_e0.value == doctest::Approx(4.0));
  CHECK(rep.passed());
  for (const auto& l : rep.lines) CHECK(l.applicable);
}
