#include "instances.hpp"

#include <doctest.h>

using namespace wat;

namespace {

RVec vec2(double a, double b) { return (RVec(2) << a, b).finished(); }

// Direct power iteration on Lambda^T Lambda, normalized by sum n_j t_j = 1.
RVec perron_vector(const UnitalInclusion& inc, double& beta) {
  const Eigen::MatrixXd m = (inc.inclusion_matrix().transpose() * inc.inclusion_matrix()).cast<double>();
  RVec v = RVec::Ones(m.rows());
  for (int it = 0; it < 2000; ++it) {
    RVec w = m * v + v;  // shift keeps the iteration aperiodic
    v = w / w.norm();
  }
  beta = v.dot(m * v) / v.dot(v);
  double mass = 0.0;
  for (int j = 0; j < inc.ambient().block_count(); ++j) mass += inc.ambient().block_size(j) * v(j);
  return v / mass;
}

}  // namespace

TEST_CASE("Markov trace of C in C+M2") {
  const auto inc = scalar_inclusion(MultiMatrixAlgebra({1, 2}));
  const auto mt = markov_trace(inc);
  CHECK(std::abs(mt.trace.t(0) - 0.2) < 1e-12);
  CHECK(std::abs(mt.trace.t(1) - 0.4) < 1e-12);
  CHECK(std::abs(mt.modulus - 5.0) < 1e-12);
  CHECK(mt.residual < 1e-12);
}

TEST_CASE("Markov traces match power iteration on connected inclusions") {
  for (const auto& ni : fixtures::inclusions()) {
    if (!ni.inc.connected()) continue;
    CAPTURE(ni.name);
    double beta = 0.0;
    const RVec t = perron_vector(ni.inc, beta);
    const auto mt = markov_trace(ni.inc);
    CHECK((mt.trace.t - t).norm() < 1e-10);
    CHECK(std::abs(mt.modulus - beta) < 1e-9);
    CHECK(mt.trace.tracial_residual() < 1e-14);
  }
}

TEST_CASE("Markov trace of a disconnected inclusion names the components") {
  Eigen::MatrixXi lam(2, 2);
  lam << 1, 0, 0, 1;
  const auto inc = inclusion_from_matrix({1, 2}, lam);
  CHECK_THROWS_WITH_AS(markov_trace(inc), doctest::Contains("component"), Error);
}

TEST_CASE("trace states must be normalized") {
  CHECK_THROWS_AS(TraceState(MultiMatrixAlgebra({1, 2}), vec2(0.5, 0.5)), Error);
  const TraceState tr(MultiMatrixAlgebra({1, 2}), vec2(0.5, 0.25));
  CHECK(std::abs(tr(tr.algebra.identity()) - cd(1.0)) < 1e-15);
  CHECK(tr.projection_trace(1) == doctest::Approx(0.5));
}

TEST_CASE("trace index is scalar exactly at the Markov vector") {
  for (const auto& dims : std::vector<std::vector<int>>{{1, 1}, {1, 2}}) {
    const MultiMatrixAlgebra p(dims);
    const double dim = p.total_dim();
    const double n0 = dims[0], n1 = dims[1];
    for (int k = 1; k < 30; ++k) {
      const double share = k / 30.0;  // tr(p_0)
      const TraceState tr(p, vec2(share / n0, (1.0 - share) / n1));
      const auto ind = trace_index(tr);
      const bool markov = std::abs(share - n0 * n0 / dim) < 1e-12;
      CAPTURE(share);
      CHECK(ind.scalar == markov);
      if (markov) CHECK(std::abs(ind.value - dim) < 1e-9);
      // n_i^2 / tr(p_i) on each block.
      CHECK(std::abs(ind.coefficients(0) - n0 * n0 / share) < 1e-9);
      CHECK(std::abs(ind.coefficients(1) - n1 * n1 / (1.0 - share)) < 1e-9);
    }
  }
}

TEST_CASE("trace-preserving expectation is a faithful conditional expectation") {
  for (const auto& ni : fixtures::inclusions()) {
    if (!ni.inc.connected()) continue;
    CAPTURE(ni.name);
    const auto tau = markov_trace(ni.inc).trace;
    const auto e = trace_preserving_expectation(ni.inc, tau);
    const auto chk = verify_expectation(e);
    CHECK(chk.ok());
    // tau o E = tau on matrix units.
    double worst = 0.0;
    for (const auto& x : matrix_units(ni.inc.ambient())) worst = std::max(worst, std::abs(tau(e.apply_ambient(x)) - tau(x)));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("minimal expectation is tracial on the centralizer") {
  for (const auto& ni : fixtures::inclusions()) {
    if (!ni.inc.connected()) continue;
    CAPTURE(ni.name);
    const auto info = minimal_expectation_info(ni.inc);
    CHECK(info.check.minimal);
    CHECK(verify_expectation(info.expectation).ok());
  }
}

TEST_CASE("a non-minimal expectation onto the scalars fails the criterion") {
  const auto inc = scalar_inclusion(MultiMatrixAlgebra({2}));
  std::vector<Mat> rho{Mat::Zero(2, 2)};
  rho[0](0, 0) = 0.75;
  rho[0](1, 1) = 0.25;
  const auto e = state_expectation(inc, rho);
  CHECK(verify_expectation(e).ok());
  CHECK_FALSE(is_minimal(e).minimal);
}

TEST_CASE("non-positive state gives a failing expectation check") {
  const auto inc = scalar_inclusion(MultiMatrixAlgebra({2}));
  std::vector<Mat> rho{Mat::Zero(2, 2)};
  rho[0](0, 0) = 1.5;
  rho[0](1, 1) = -0.5;
  const auto e = state_expectation(inc, rho);
  CHECK_FALSE(verify_expectation(e).ok());
}

TEST_CASE("index values must be central and positive") {
  const MultiMatrixAlgebra a({2});
  CHECK_THROWS_AS(make_index_value(a, a.unit(0, 0, 1)), Error);
  CHECK_THROWS_AS(make_index_value(a, -1.0 * a.identity()), Error);
  const auto v = make_index_value(a, 3.0 * a.identity());
  CHECK(v.scalar);
  CHECK(v.value == doctest::Approx(3.0));
}
