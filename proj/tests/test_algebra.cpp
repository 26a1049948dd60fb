#include "instances.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace wat;

namespace {

Element random_element(const MultiMatrixAlgebra& a, Rng& rng) {
  Vec v(a.total_dim());
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = rng.complex_normal();
  return a.from_coords(v);
}

int sum_squares(const Eigen::MatrixXi& lam) { return (lam.array() * lam.array()).sum(); }

}  // namespace

TEST_CASE("coordinates are row-major per block") {
  const MultiMatrixAlgebra a({1, 2, 3});
  CHECK(a.total_dim() == 14);
  CHECK(a.rep_dim() == 6);
  CHECK(a.unit_index(2, 1, 2) == 1 + 4 + 5);
  const Vec c = a.coords(a.unit(1, 0, 1));
  CHECK(c.norm() == doctest::Approx(1.0));
  CHECK(std::abs(c(a.unit_index(1, 0, 1)) - cd(1.0)) < 1e-15);
  Rng rng(3);
  const Element x = random_element(a, rng);
  CHECK((a.from_coords(a.coords(x)) - x).norm() < 1e-14);
}

TEST_CASE("matrix units multiply as e_ij e_kl = delta_jk e_il") {
  const MultiMatrixAlgebra a({2, 1});
  const auto units = matrix_units(a);
  REQUIRE(units.size() == 5);
  double worst = 0.0;
  for (int i = 0; i < a.block_count(); ++i)
    for (int r = 0; r < a.block_size(i); ++r)
      for (int c = 0; c < a.block_size(i); ++c)
        for (int j = 0; j < a.block_count(); ++j)
          for (int r2 = 0; r2 < a.block_size(j); ++r2)
            for (int c2 = 0; c2 < a.block_size(j); ++c2) {
              const Element p = a.unit(i, r, c) * a.unit(j, r2, c2);
              const Element want = (i == j && c == r2) ? a.unit(i, r, c2) : a.zero();
              worst = std::max(worst, (p - want).norm());
            }
  CHECK(worst == 0.0);
}

TEST_CASE("generators generate the whole algebra") {
  for (const auto& dims : std::vector<std::vector<int>>{{1}, {3}, {1, 1, 2}, {2, 3}}) {
    const MultiMatrixAlgebra a(dims);
    CHECK(generated_subalgebra(a, a.generators()).dim() == a.total_dim());
  }
}

TEST_CASE("inclusion matrices of the standard inclusions") {
  CHECK(diagonal_inclusion(3).inclusion_matrix() == Eigen::MatrixXi::Ones(3, 1));
  CHECK(tensor_inclusion(2, 3).inclusion_matrix()(0, 0) == 3);
  CHECK(scalar_inclusion(MultiMatrixAlgebra({1, 2})).inclusion_matrix() == (Eigen::MatrixXi(1, 2) << 1, 2).finished());
  Eigen::MatrixXi lam(2, 2);
  lam << 1, 1, 0, 1;
  const auto inc = inclusion_from_matrix({1, 2}, lam);
  CHECK(inc.ambient().dims() == std::vector<int>{1, 3});
  CHECK(inclusion_matrix(inc) == lam);
  CHECK(inc.connected());
}

TEST_CASE("disconnected inclusions are detected") {
  Eigen::MatrixXi lam(2, 2);
  lam << 1, 0, 0, 1;
  const auto inc = inclusion_from_matrix({1, 2}, lam);
  CHECK_FALSE(inc.connected());
  CHECK(inc.components().size() == 2);
}

TEST_CASE("from_unit_images rejects a non-multiplicative map") {
  const MultiMatrixAlgebra c2({1, 1});
  const MultiMatrixAlgebra m2({2});
  Mat p = Mat::Zero(2, 2);
  p(0, 0) = 1.0;
  Mat q = Mat::Zero(2, 2);
  q(0, 0) = 0.5;
  q(0, 1) = 0.5;
  q(1, 0) = 0.5;
  q(1, 1) = 0.5;
  CHECK_THROWS_AS(StarHomomorphism::from_unit_images(c2, m2, {Element({p}), Element({q})}), Error);
  Mat r = Mat::Identity(2, 2) - p;
  const auto h = StarHomomorphism::from_unit_images(c2, m2, {Element({p}), Element({r})});
  CHECK(h.relation_residual() < 1e-14);
}

TEST_CASE("embedding is a unital *-homomorphism on random elements") {
  Rng rng(11);
  for (const auto& ni : fixtures::inclusions()) {
    CAPTURE(ni.name);
    const auto& inc = ni.inc;
    const Element x = random_element(inc.sub(), rng);
    const Element y = random_element(inc.sub(), rng);
    CHECK((inc.embed(x * y) - inc.embed(x) * inc.embed(y)).norm() < 1e-12);
    CHECK((inc.embed(x.adjoint()) - inc.embed(x).adjoint()).norm() < 1e-12);
    CHECK((inc.embed(inc.sub().identity()) - inc.ambient().identity()).norm() < 1e-12);
    CHECK((inc.embedding().preimage(inc.embed(x)) - x).norm() < 1e-11);
  }
}

TEST_CASE("relative commutant dimension is the sum of squared multiplicities") {
  for (const auto& ni : fixtures::inclusions()) {
    CAPTURE(ni.name);
    const auto c = relative_commutant(ni.inc);
    CHECK(c.dim() == sum_squares(ni.inc.inclusion_matrix()));
    CHECK(c.closure_residual() < 1e-10);
    for (const auto& g : ni.inc.sub().generators())
      for (const auto& z : c.elements()) CHECK(commutator(ni.inc.embed(g), z).norm() < 1e-10);
    const auto dec = relative_commutant_decomposed(ni.inc.embedding());
    CHECK(dec.sub().total_dim() == c.dim());
  }
}

TEST_CASE("relative commutant agrees with the dense oracle") {
  for (const auto& ni : fixtures::inclusions()) {
    if (ni.inc.ambient().total_dim() > 16) continue;
    CAPTURE(ni.name);
    const auto lib = relative_commutant(ni.inc);
    const auto dense = oracle::relative_commutant(ni.inc);
    REQUIRE(static_cast<int>(dense.size()) == lib.dim());
    for (const auto& z : dense) CHECK(lib.residual(z) < 1e-9);
  }
}

TEST_CASE("generated subalgebra agrees with the dense oracle") {
  const MultiMatrixAlgebra a({1, 3});
  Mat d = Mat::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  d(2, 2) = 2.0;
  Mat x = Mat::Zero(3, 3);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  const std::vector<std::vector<Element>> cases{
      {Element({Mat::Identity(1, 1), d})},
      {a.unit(1, 0, 1)},
      {a.unit(1, 1, 2), a.unit(0, 0, 0)},
      {Element({Mat::Zero(1, 1), x})},
      {}};
  for (std::size_t k = 0; k < cases.size(); ++k) {
    CAPTURE(k);
    const auto lib = generated_subalgebra(a, cases[k]);
    const auto dense = oracle::generated_subalgebra(a, cases[k]);
    CHECK(lib.dim() == static_cast<int>(dense.size()));
    for (const auto& z : dense) CHECK(lib.residual(z) < 1e-9);
  }
}

TEST_CASE("decompose_subalgebra recovers the block structure") {
  const auto inc = fixtures::inclusions()[6].inc;  // C+M2 in C+M3
  const auto c = relative_commutant(inc);
  const auto dec = decompose_subalgebra(c);
  std::vector<int> dims = dec.sub().dims();
  std::sort(dims.begin(), dims.end());
  CHECK(dims == std::vector<int>{1, 1, 1});
  CHECK(dec.embedding().relation_residual() < 1e-10);
  for (const auto& e : matrix_units(dec.sub())) CHECK(c.residual(dec.embed(e)) < 1e-10);
}

TEST_CASE("composition of inclusions multiplies inclusion matrices") {
  const auto inner = diagonal_inclusion(2);
  const auto outer = tensor_inclusion(2, 2);
  const auto comp = compose(inner, outer);
  CHECK(comp.inclusion_matrix() == inner.inclusion_matrix() * outer.inclusion_matrix());
}

TEST_CASE("roundoff-sized products do not enlarge a generated subalgebra") {
  // Orthogonal projections in a random basis multiply to roundoff, not zero.
  Rng rng(5);
  const Mat u = random_unitary(3, rng);
  const MultiMatrixAlgebra m3({3});
  std::vector<Element> p;
  for (int k = 0; k < 3; ++k) p.push_back(Element({Mat(u.col(k) * u.col(k).adjoint())}));
  CHECK(generated_subalgebra(m3, p).dim() == 3);
  SpanBuilder sb(4);
  CHECK(sb.add(Vec::Ones(4)));
  CHECK_FALSE(sb.add(Vec::Constant(4, cd(1e-16, 0.0))));
}
