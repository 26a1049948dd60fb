#include "watatani/expectation.hpp"

#include <cmath>

namespace wat {

ConditionalExpectation::ConditionalExpectation(UnitalInclusion inc, Mat map) : inc_(std::move(inc)), map_(std::move(map)) {
  if (map_.rows() != inc_.sub().total_dim() || map_.cols() != inc_.ambient().total_dim())
    throw Error("expectation matrix has wrong shape");
}

Element ConditionalExpectation::apply(const Element& x) const {
  return inc_.sub().from_coords(map_ * inc_.ambient().coords(x));
}

std::vector<Mat> ConditionalExpectation::state_densities() const {
  const auto& a = inc_.ambient();
  const Eigen::RowVectorXcd w = markov_trace_of_scalars(inc_.sub()).functional() * map_;
  std::vector<Mat> rho;
  for (int j = 0; j < a.block_count(); ++j) {
    const int n = a.block_size(j);
    Mat r(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) r(q, p) = w(a.unit_index(j, p, q));
    rho.push_back(r);
  }
  return rho;
}

namespace {

/// Left multiplication by b in coordinates: coords(bx) = L coords(x).
Mat left_mult_matrix(const MultiMatrixAlgebra& a, const Element& b) {
  Mat l = Mat::Zero(a.total_dim(), a.total_dim());
  for (int i = 0; i < a.block_count(); ++i) {
    const int n = a.block_size(i);
    l.block(a.offset(i), a.offset(i), n * n, n * n) = kron(b.blocks[i], Mat::Identity(n, n));
  }
  return l;
}

Mat right_mult_matrix(const MultiMatrixAlgebra& a, const Element& b) {
  Mat l = Mat::Zero(a.total_dim(), a.total_dim());
  for (int i = 0; i < a.block_count(); ++i) {
    const int n = a.block_size(i);
    l.block(a.offset(i), a.offset(i), n * n, n * n) = kron(Mat::Identity(n, n), b.blocks[i].transpose());
  }
  return l;
}

/// map * L_a (left = true) or map * R_a, computed row by row.  Each row
/// restricted to block j is a row-major n x n array M; x |-> Tr(M^T a x)
/// has array a^T M and x |-> Tr(M^T x a) has array M a^T.  Working with
/// the transpose keeps rows contiguous: Q = M^T in column-major storage.
Mat map_times_mult(const Mat& map, const MultiMatrixAlgebra& a, const Element& x, bool left) {
  Mat t = map.transpose();
  for (Eigen::Index r = 0; r < t.cols(); ++r)
    for (int j = 0; j < a.block_count(); ++j) {
      const int n = a.block_size(j);
      Eigen::Map<Mat> q(t.col(r).data() + a.offset(j), n, n);
      const Mat qn = left ? Mat(q * x.blocks[j]) : Mat(x.blocks[j] * q);
      q = qn;
    }
  return t.transpose();
}

}  // namespace

ExpectationCheck verify_expectation(const ConditionalExpectation& e) {
  const auto& inc = e.inclusion();
  const auto& a = inc.ambient();
  const auto& b = inc.sub();
  const Mat& m = e.map();
  ExpectationCheck chk;

  const Mat iota = inc.embedding().as_matrix();
  chk.idempotent = (m * iota - Mat::Identity(b.total_dim(), b.total_dim())).norm();
  chk.unital = (m * a.coords(a.identity()) - b.coords(b.identity())).norm();

  for (const auto& g : b.generators()) {
    const Element ig = inc.embed(g);
    chk.bimodule = std::max(chk.bimodule, (map_times_mult(m, a, ig, true) - left_mult_matrix(b, g) * m).norm());
    chk.bimodule = std::max(chk.bimodule, (map_times_mult(m, a, ig, false) - right_mult_matrix(b, g) * m).norm());
  }

  for (int j = 0; j < a.block_count(); ++j)
    for (int p = 0; p < a.block_size(j); ++p) {
      const Element y = b.from_coords(m.col(a.unit_index(j, p, p)));
      for (const auto& blk : y.blocks) {
        const Mat h = 0.5 * (blk + blk.adjoint());
        chk.positivity = std::max(chk.positivity, (blk - h).norm());
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        chk.positivity = std::max(chk.positivity, -es.eigenvalues().minCoeff());
      }
    }

  chk.min_density_eig = std::numeric_limits<double>::infinity();
  for (const auto& r : e.state_densities()) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (r + r.adjoint()));
    chk.min_density_eig = std::min(chk.min_density_eig, es.eigenvalues().minCoeff());
  }
  chk.faithful = chk.min_density_eig > 1e-12;
  return chk;
}

ConditionalExpectation trace_preserving_expectation(const UnitalInclusion& inc, const TraceState& tau) {
  if (!(tau.algebra == inc.ambient())) throw Error("trace lives on a different algebra");
  if (!tau.faithful()) throw Error("trace is not faithful");
  const auto& a = inc.ambient();
  const auto& b = inc.sub();
  const auto& h = inc.embedding();
  Mat map = Mat::Zero(b.total_dim(), a.total_dim());
  for (int i = 0; i < b.block_count(); ++i) {
    const double s = tau(h.unit_image(i, 0, 0)).real();
    for (int kap = 0; kap < b.block_size(i); ++kap)
      for (int bet = 0; bet < b.block_size(i); ++bet) {
        // Coefficient of e_{kappa beta} is tau(ι(e_{beta kappa}) x) / s.
        const Element y = h.unit_image(i, bet, kap);
        const int row = b.unit_index(i, kap, bet);
        for (int j = 0; j < a.block_count(); ++j) {
          const int n = a.block_size(j);
          for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) map(row, a.unit_index(j, r, c)) = tau.t(j) * y.blocks[j](c, r) / s;
        }
      }
  }
  return ConditionalExpectation(inc, std::move(map));
}

ConditionalExpectation state_expectation(const UnitalInclusion& scalars, const std::vector<Mat>& densities) {
  const auto& a = scalars.ambient();
  if (scalars.sub().total_dim() != 1) throw Error("state expectation requires B = C");
  if (static_cast<int>(densities.size()) != a.block_count()) throw Error("one density per block is required");
  Mat map(1, a.total_dim());
  for (int j = 0; j < a.block_count(); ++j) {
    const int n = a.block_size(j);
    if (densities[j].rows() != n || densities[j].cols() != n) throw Error("density has wrong size");
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) map(0, a.unit_index(j, p, q)) = densities[j](q, p);
  }
  return ConditionalExpectation(scalars, std::move(map));
}

ConditionalExpectation identity_expectation(const MultiMatrixAlgebra& a) {
  return ConditionalExpectation(identity_inclusion(a), Mat::Identity(a.total_dim(), a.total_dim()));
}

MinimalityCheck is_minimal(const ConditionalExpectation& e, double tol) {
  const auto& b = e.inclusion().sub();
  const UnitalInclusion comm = relative_commutant_decomposed(e.inclusion().embedding());
  const auto& c = comm.sub();
  const auto& h = comm.embedding();
  MinimalityCheck mc;
  auto center_dist = [&](const Element& y) {
    double d = 0.0;
    for (int i = 0; i < b.block_count(); ++i) {
      const int n = b.block_size(i);
      const cd s = y.blocks[i].trace() / static_cast<double>(n);
      d = std::max(d, (y.blocks[i] - s * Mat::Identity(n, n)).norm());
    }
    return d;
  };
  // Commutators of matrix units of C_A(B) span {f_ad : a != d} and
  // {f_aa - f_bb}; E is tracial on C_A(B) iff it kills both families.
  for (int k = 0; k < c.block_count(); ++k) {
    const int r = c.block_size(k);
    const Element e00 = e.apply(h.unit_image(k, 0, 0));
    mc.center_residual = std::max(mc.center_residual, center_dist(e00));
    for (int p = 0; p < r; ++p)
      for (int q = 0; q < r; ++q) {
        if (p == 0 && q == 0) continue;
        const Element y = e.apply(h.unit_image(k, p, q));
        mc.center_residual = std::max(mc.center_residual, center_dist(y));
        mc.tracial_residual = std::max(mc.tracial_residual, (p == q ? (y - e00) : y).norm());
      }
  }
  mc.minimal = mc.tracial_residual <= tol && mc.center_residual <= tol;
  return mc;
}

MinimalExpectation minimal_expectation_info(const UnitalInclusion& inc, double tol) {
  const MarkovTrace mk = markov_trace(inc);
  const auto& a = inc.ambient();
  const auto& b = inc.sub();
  const UnitalInclusion comm = relative_commutant_decomposed(inc.embedding());
  const auto& c = comm.sub();
  const auto& h = comm.embedding();

  // tau_t(q_i [z, w]) = 0 for central projections q_i of B and units z, w of
  // C_A(B); the commutators reduce to f_ad (a != d) and f_aa - f_bb.
  std::vector<Element> q;
  for (int i = 0; i < b.block_count(); ++i) q.push_back(inc.embed(b.central_projection(i)));
  std::vector<RVec> rows;
  for (int k = 0; k < c.block_count(); ++k) {
    const int r = c.block_size(k);
    for (int p = 0; p < r; ++p)
      for (int s = 0; s < r; ++s) {
        if (p == 0 && s == 0) continue;
        const Element comm_el = (p == s) ? h.unit_image(k, p, p) - h.unit_image(k, 0, 0) : h.unit_image(k, p, s);
        for (const auto& qi : q) {
          const Element y = qi * comm_el;
          RVec row(a.block_count());
          RVec im(a.block_count());
          for (int j = 0; j < a.block_count(); ++j) {
            row(j) = y.blocks[j].trace().real();
            im(j) = y.blocks[j].trace().imag();
          }
          rows.push_back(row);
          rows.push_back(im);
        }
      }
  }
  RMat t_space;
  if (rows.empty()) {
    t_space = RMat::Identity(a.block_count(), a.block_count());
  } else {
    RMat cons(static_cast<Eigen::Index>(rows.size()), a.block_count());
    for (std::size_t k = 0; k < rows.size(); ++k) cons.row(static_cast<Eigen::Index>(k)) = rows[k].transpose();
    t_space = null_space(cons.cast<cd>()).real();
    if (t_space.cols() > 0) {
      Eigen::HouseholderQR<RMat> qr(t_space);
      t_space = qr.householderQ() * RMat::Identity(t_space.rows(), t_space.cols());
    }
  }
  if (t_space.cols() == 0) throw NumericalError("no trace vector satisfies the tracial-on-centralizer conditions");

  RVec t = t_space * (t_space.transpose() * mk.trace.t);
  double norm = 0.0;
  for (int j = 0; j < a.block_count(); ++j) norm += a.block_size(j) * t(j);
  if (std::abs(norm) < 1e-12) throw NumericalError("admissible trace vectors are orthogonal to the Markov trace");
  t /= norm;
  if (t.minCoeff() <= 0.0) throw NumericalError("nearest admissible trace vector is not faithful (min entry " + std::to_string(t.minCoeff()) + ")");

  MinimalExpectation out;
  out.trace = TraceState(a, t);
  out.expectation = trace_preserving_expectation(inc, out.trace);
  out.solution_dim = static_cast<int>(t_space.cols());
  out.unique = out.solution_dim == 1;
  out.check = is_minimal(out.expectation, tol);
  if (!out.check.minimal)
    throw NumericalError("minimal expectation search failed; residual " +
                         std::to_string(std::max(out.check.tracial_residual, out.check.center_residual)));
  return out;
}

ConditionalExpectation restrict_expectation(const ConditionalExpectation& e, const UnitalInclusion& b_in_c,
                                            const UnitalInclusion& c_in_a) {
  if (!(c_in_a.ambient() == e.inclusion().ambient())) throw Error("intermediate algebra is not inside A");
  return ConditionalExpectation(b_in_c, e.map() * c_in_a.embedding().as_matrix());
}

ConditionalExpectation compose_expectations(const ConditionalExpectation& outer_e, const ConditionalExpectation& inner_f) {
  if (!(outer_e.inclusion().sub() == inner_f.inclusion().ambient())) throw Error("expectations do not compose");
  return ConditionalExpectation(compose(inner_f.inclusion(), outer_e.inclusion()), inner_f.map() * outer_e.map());
}

namespace {

/// Normalizes a trace vector to a state; returns nullopt unless faithful.
std::optional<RVec> as_faithful_state(const MultiMatrixAlgebra& a, RVec t) {
  double s = 0.0;
  for (int j = 0; j < a.block_count(); ++j) s += a.block_size(j) * t(j);
  if (std::abs(s) < 1e-12) return std::nullopt;
  t /= s;
  if (t.minCoeff() <= 1e-12) return std::nullopt;
  return t;
}

}  // namespace

CompatibleExpectation compatible_expectation(const UnitalInclusion& inc, const SubalgebraBasis& csub,
                                             const ConditionalExpectation& e0, double tol) {
  const auto& a = inc.ambient();
  const auto& b = inc.sub();
  if (!(csub.ambient() == a)) throw Error("intermediate subalgebra lives in another algebra");
  CompatibleExpectation out;
  out.c_in_a = decompose_subalgebra(csub);
  const auto& ch = out.c_in_a.embedding();
  const auto& c = out.c_in_a.sub();

  std::vector<Element> pre;
  for (const auto& u : inc.embedding().unit_images()) {
    if (ch.image_residual(u) > 1e-8) throw Error("B is not contained in the intermediate subalgebra");
    pre.push_back(ch.preimage(u));
  }
  out.b_in_c = UnitalInclusion(StarHomomorphism::from_unit_images(b, c, pre, 1e-8));
  out.e0_on_c = restrict_expectation(e0, out.b_in_c, out.c_in_a);

  // Trace vectors with tau o E0 = tau.
  const Eigen::MatrixXi& lam = inc.inclusion_matrix();
  Mat cons = Mat::Zero(a.total_dim(), a.block_count());
  for (int x = 0; x < a.total_dim(); ++x)
    for (int j = 0; j < a.block_count(); ++j) {
      cd v = 0.0;
      for (int i = 0; i < b.block_count(); ++i)
        for (int k = 0; k < b.block_size(i); ++k) v += static_cast<double>(lam(i, j)) * e0.map()(b.unit_index(i, k, k), x);
      cons(x, j) = -v;
    }
  for (int j = 0; j < a.block_count(); ++j)
    for (int p = 0; p < a.block_size(j); ++p) cons(a.unit_index(j, p, p), j) += 1.0;
  RMat tsp = null_space(cons).real();
  if (tsp.cols() > 0) {
    Eigen::HouseholderQR<RMat> qr(tsp);
    tsp = qr.householderQ() * RMat::Identity(tsp.rows(), tsp.cols());
  }

  std::optional<RVec> t1;
  for (const RVec& ref : {markov_trace_of_scalars(a).t, RVec(RVec::Ones(a.block_count()))}) {
    if (tsp.cols() == 0) break;
    t1 = as_faithful_state(a, tsp * (tsp.transpose() * ref));
    if (t1) break;
  }
  if (!t1) throw Error("no faithful trace on A is invariant under E0; C is not compatible with E0");

  const TraceState tau1(a, *t1);
  out.f = trace_preserving_expectation(out.c_in_a, tau1);
  const Mat composite = out.e0_on_c.map() * out.f.map();
  out.compatibility_residual = (composite - e0.map()).norm();
  if (out.compatibility_residual > tol * std::max(1.0, e0.map().norm()))
    throw Error("no compatible expectation onto C within tolerance (residual " + std::to_string(out.compatibility_residual) + ")");

  if (tsp.cols() >= 2) {
    // A second invariant trace: move t1 along another direction of the space.
    RVec w = tsp.col(0);
    for (Eigen::Index k = 0; k < tsp.cols(); ++k) {
      RVec cand = tsp.col(k) - t1->dot(tsp.col(k)) / t1->squaredNorm() * *t1;
      if (cand.norm() > 1e-6) {
        w = cand / cand.norm();
        break;
      }
    }
    double step = 0.5 * t1->minCoeff();
    std::optional<RVec> t2;
    for (int k = 0; k < 40 && !t2; ++k, step *= 0.5) t2 = as_faithful_state(a, *t1 + step * w);
    if (t2 && (*t2 - *t1).norm() > 1e-6) {
      const ConditionalExpectation f2 = trace_preserving_expectation(out.c_in_a, TraceState(a, *t2));
      out.uniqueness_residual = (f2.map() - out.f.map()).norm();
      out.uniqueness_checked = true;
    }
  }
  return out;
}

}  // namespace wat
