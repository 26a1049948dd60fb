#include "watatani/tower.hpp"

#include <cmath>
#include <sstream>

namespace wat {

Vec BasicConstruction::xi(const Element& x) const {
  const auto& a = inclusion.ambient();
  Element y = x;
  for (int j = 0; j < a.block_count(); ++j) y.blocks[j] = x.blocks[j] * sqrt_density[j];
  return a.coords(y);
}

Element BasicConstruction::xi_inv(const Vec& v) const {
  const auto& a = inclusion.ambient();
  Element y = a.from_coords(v);
  for (int j = 0; j < a.block_count(); ++j) y.blocks[j] = y.blocks[j] * inv_sqrt_density[j];
  return y;
}

Element BasicConstruction::x_e_y(const Element& x, const Element& y) const {
  return lambda.apply(x) * e1 * lambda.apply(y);
}

namespace {

/// R with xi(x) = R coords(x): ⊕_j I ⊗ S_j^T.
Mat xi_matrix(const MultiMatrixAlgebra& a, const std::vector<Mat>& s) {
  Mat r = Mat::Zero(a.total_dim(), a.total_dim());
  for (int j = 0; j < a.block_count(); ++j) {
    const int n = a.block_size(j);
    r.block(a.offset(j), a.offset(j), n * n, n * n) = kron(Mat::Identity(n, n), s[j].transpose());
  }
  return r;
}

Element inverse_central(const IndexValue& ind) {
  const auto& a = ind.algebra;
  Element inv = a.zero();
  for (int i = 0; i < a.block_count(); ++i)
    inv.blocks[i] = (1.0 / ind.coefficients(i)) * Mat::Identity(a.block_size(i), a.block_size(i));
  return inv;
}

}  // namespace

BasicConstruction basic_construction(const UnitalInclusion& inc, const ConditionalExpectation& e, int gns_cap) {
  const auto& a = inc.ambient();
  const auto& b = inc.sub();
  const int d = a.total_dim();
  if (d > gns_cap)
    throw Error("projected GNS dimension " + std::to_string(d) + " exceeds the cap " + std::to_string(gns_cap));
  if (!(e.inclusion().ambient() == a) || !(e.inclusion().sub() == b)) throw Error("expectation does not match the inclusion");

  BasicConstruction bc;
  bc.inclusion = inc;
  bc.expectation = e;
  bc.gns_dim = d;
  bc.endo = MultiMatrixAlgebra({d});

  // GNS densities; omega = tau_B o E is B-central, so S_j commutes with ι(B).
  for (const auto& rho : e.state_densities()) {
    const Mat h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    if (es.eigenvalues().minCoeff() <= 1e-12) throw Error("expectation is not faithful");
    bc.sqrt_density.push_back(sqrt_psd(h));
    bc.inv_sqrt_density.push_back(inv_sqrt_pd(h));
  }
  for (const auto& g : b.generators()) {
    const Element ig = inc.embed(g);
    for (int j = 0; j < a.block_count(); ++j)
      if ((bc.sqrt_density[j] * ig.blocks[j] - ig.blocks[j] * bc.sqrt_density[j]).norm() > 1e-8)
        throw NumericalError("GNS density does not commute with B");
  }

  // Left multiplication: λ(x) = ⊕_j x_j ⊗ I.
  std::vector<std::vector<Frame>> lf(static_cast<std::size_t>(a.block_count()));
  for (int j = 0; j < a.block_count(); ++j) {
    const int n = a.block_size(j);
    for (int s = 0; s < n; ++s) {
      Mat x = Mat::Zero(d, n);
      for (int k = 0; k < n; ++k) x(a.offset(j) + k * n + s, k) = 1.0;
      lf[j].push_back({0, x});
    }
  }
  bc.lambda = StarHomomorphism(a, bc.endo, std::move(lf));

  // Right action of B: ξ(x ι(b)) = (⊕_j I ⊗ ι_j(b)^T) ξ(x).  As a linear
  // *-homomorphism of B it has frames e_rho ⊗ conj(Y).
  std::vector<std::vector<Frame>> rf(static_cast<std::size_t>(b.block_count()));
  for (int i = 0; i < b.block_count(); ++i)
    for (const auto& f : inc.embedding().frames()[i]) {
      const int j = f.target_block;
      const int n = a.block_size(j);
      for (int rho = 0; rho < n; ++rho) {
        Mat y = Mat::Zero(d, b.block_size(i));
        y.middleRows(a.offset(j) + rho * n, n) = f.isometry.conjugate();
        rf[i].push_back({0, y});
      }
    }
  const StarHomomorphism right(b, bc.endo, std::move(rf));
  bc.a1_in_endo = relative_commutant_decomposed(right);
  const auto& pi1 = bc.a1_in_endo.embedding();
  const auto& a1 = bc.a1_in_endo.sub();

  std::vector<Element> lam_images;
  for (const auto& u : bc.lambda.unit_images()) {
    if (pi1.image_residual(u) > 1e-8) throw NumericalError("λ(A) is not inside the commutant of the right B-action");
    lam_images.push_back(pi1.preimage(u));
  }
  bc.a_in_a1 = UnitalInclusion(StarHomomorphism::from_unit_images(a, a1, lam_images, 1e-8));

  const Mat r = xi_matrix(a, bc.sqrt_density);
  const Mat rinv = xi_matrix(a, bc.inv_sqrt_density);
  const Mat proj = inc.embedding().as_matrix() * e.map();
  bc.e1 = Element({r * proj * rinv});
  if (pi1.image_residual(bc.e1) > 1e-8) throw NumericalError("Jones projection is not in A_1");
  bc.e1_abstract = pi1.preimage(bc.e1);

  // Canonical right quasi-basis: z = |a><v| with v in the range of e_1 in
  // each block of A_1 satisfies z e_1 = z, so z = λ(l) e_1 with
  // ξ(l) = π_1(z) ξ(1), and sum z z* = 1.
  const Vec xi1 = bc.xi(a.identity());
  for (int l = 0; l < a1.block_count(); ++l) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (bc.e1_abstract.blocks[l] + bc.e1_abstract.blocks[l].adjoint()));
    const Eigen::Index top = es.eigenvalues().size() - 1;
    if (es.eigenvalues()(top) < 0.5) throw NumericalError("Jones projection has no support in a block of A_1");
    const Vec v = es.eigenvectors().col(top);
    for (int col = 0; col < a1.block_size(l); ++col) {
      Vec w = Vec::Zero(d);
      for (const auto& f : pi1.frames()[l]) w += f.isometry.col(col) * (f.isometry * v).dot(xi1);
      bc.canonical_basis.push_back(bc.xi_inv(w));
    }
  }
  Element ind = a.zero();
  for (const auto& l : bc.canonical_basis) ind += l * l.adjoint();
  bc.index = make_index_value(a, ind, 1e-8);

  // Dual expectation Ẽ(z) = Ind^{-1} sum_i ξ^{-1}(π_1(z) ξ(l_i)) l_i^*.  For
  // a unit z = e^{(l)}_{kb} this is Ind^{-1} sum_c ξ^{-1}(Y_c e_k) b_{c,b}
  // with b_{c,b} = sum_i <Y_c e_b, ξ(l_i)> l_i^*.
  const Element ind_inv = inverse_central(bc.index);
  std::vector<Vec> xil;
  std::vector<Element> ladj;
  for (const auto& l : bc.canonical_basis) {
    xil.push_back(bc.xi(l));
    ladj.push_back(l.adjoint());
  }
  Mat dual = Mat::Zero(d, a1.total_dim());
  for (int l = 0; l < a1.block_count(); ++l) {
    const int m = a1.block_size(l);
    std::vector<std::vector<Element>> av, bv;
    for (const auto& f : pi1.frames()[l]) {
      std::vector<Element> ac, bcs;
      for (int k = 0; k < m; ++k) {
        ac.push_back(ind_inv * bc.xi_inv(f.isometry.col(k)));
        Element s = a.zero();
        for (std::size_t i = 0; i < xil.size(); ++i) s += f.isometry.col(k).dot(xil[i]) * ladj[i];
        bcs.push_back(s);
      }
      av.push_back(std::move(ac));
      bv.push_back(std::move(bcs));
    }
    for (int k = 0; k < m; ++k)
      for (int q = 0; q < m; ++q) {
        Element col = a.zero();
        for (std::size_t c = 0; c < av.size(); ++c) col += av[c][k] * bv[c][q];
        dual.col(a1.unit_index(l, k, q)) = a.coords(col);
      }
  }
  bc.dual = ConditionalExpectation(bc.a_in_a1, std::move(dual));
  return bc;
}

JonesRelations verify_jones_relations(const BasicConstruction& bc) {
  JonesRelations jr;
  const Mat& e = bc.e1.blocks[0];
  jr.projection = (e * e - e).norm() + (e - e.adjoint()).norm();
  const auto& inc = bc.inclusion;
  for (const auto& g : inc.sub().generators()) {
    const Mat lb = bc.lambda.apply(inc.embed(g)).blocks[0];
    jr.commutes_b = std::max(jr.commutes_b, (e * lb - lb * e).norm());
  }
  for (const auto& x : matrix_units(inc.ambient())) {
    const Mat lx = bc.lambda.apply(x).blocks[0];
    const Mat lex = bc.lambda.apply(bc.expectation.apply_ambient(x)).blocks[0];
    jr.compression = std::max(jr.compression, (e * lx * e - lex * e).norm());
  }
  jr.abstract_e1 = bc.a1_in_endo.embedding().image_residual(bc.e1);
  return jr;
}

double basis_characterization_residual(const BasicConstruction& bc, const std::vector<Element>& s) {
  const int d = bc.gns_dim;
  Mat sum = Mat::Zero(d, d);
  for (const auto& l : s) {
    const Mat ll = bc.lambda.apply(l).blocks[0];
    sum += ll * bc.e1.blocks[0] * ll.adjoint();
  }
  return (sum - Mat::Identity(d, d)).norm();
}

DualExpectationCheck verify_dual_expectation(const BasicConstruction& bc) {
  DualExpectationCheck dc;
  const auto& a = bc.inclusion.ambient();
  const auto& pi1 = bc.a1_in_endo.embedding();
  const Element ind_inv = inverse_central(bc.index);
  const auto units = matrix_units(a);
  for (const auto& x : units)
    for (const auto& y : units) {
      const Element z = pi1.preimage(bc.x_e_y(x, y));
      dc.consistency = std::max(dc.consistency, (bc.dual.apply(z) - x * ind_inv * y).norm());
    }
  dc.e1_value = (bc.dual.apply(bc.e1_abstract) - ind_inv).norm();
  dc.expectation = verify_expectation(bc.dual);
  return dc;
}

SubalgebraBasis a1_by_span(const BasicConstruction& bc) {
  std::vector<Element> gens;
  for (const auto& g : bc.inclusion.ambient().generators()) gens.push_back(bc.lambda.apply(g));
  gens.push_back(bc.e1);
  return generated_subalgebra(bc.endo, gens);
}

JonesTower start_tower(const UnitalInclusion& inc, const ConditionalExpectation& e, int gns_cap) {
  JonesTower t;
  t.gns_cap = gns_cap;
  TowerLevel l0;
  l0.k = 0;
  l0.inclusion = inc;
  l0.expectation = e;
  l0.from_b = inc.embedding();
  l0.rel_commutant = relative_commutant_decomposed(inc.embedding());
  t.levels.push_back(std::move(l0));
  return t;
}

void extend_tower(JonesTower& tower) {
  const TowerLevel& top = tower.levels.back();
  auto bc = std::make_shared<BasicConstruction>(basic_construction(top.inclusion, top.expectation, tower.gns_cap));
  TowerLevel next;
  next.k = top.k + 1;
  next.inclusion = bc->a_in_a1;
  next.expectation = bc->dual;
  next.jones = bc->e1_abstract;
  next.index = bc->index;
  next.from_b = bc->a_in_a1.embedding().compose_after(top.from_b);
  next.rel_commutant = relative_commutant_decomposed(next.from_b);
  next.bc = std::move(bc);
  tower.levels.push_back(std::move(next));
}

JonesTower jones_tower(const UnitalInclusion& inc, const ConditionalExpectation& e, int m, int gns_cap) {
  if (m < 1) throw Error("tower height must be at least 1");
  JonesTower t = start_tower(inc, e, gns_cap);
  for (int k = 0; k < m; ++k) extend_tower(t);
  return t;
}

DepthStep depth_step(const JonesTower& tower, int k, double tol) {
  if (k < 1 || k > tower.top()) throw Error("depth step needs levels k-1 and k");
  const TowerLevel& prev = tower.levels[k - 1];
  const TowerLevel& cur = tower.levels[k];
  const StarHomomorphism s = cur.inclusion.embedding().compose_after(prev.rel_commutant.embedding());
  const auto& sa = s.source();
  const Element& e = *cur.jones;
  const auto& t = cur.rel_commutant;
  const auto& ak = cur.algebra();

  DepthStep ds;
  ds.k = k;
  ds.commutant_dim = t.sub().total_dim();
  // span{S e S} = ⊕_{i,j} f^i_{p1} span{f^i_{1q} e f^j_{r1}} f^j_{1s}: its
  // dimension is sum_{i,j} n_i n_j rank{f^i_{1q} e f^j_{r1}}.
  std::vector<std::vector<RVec>> sv(static_cast<std::size_t>(sa.block_count()));
  double scale = 0.0;
  for (int i = 0; i < sa.block_count(); ++i)
    for (int j = 0; j < sa.block_count(); ++j) {
      const int ni = sa.block_size(i);
      const int nj = sa.block_size(j);
      Mat coords(ak.total_dim(), ni * nj);
      for (int q = 0; q < ni; ++q) {
        const Element left = s.unit_image(i, 0, q) * e;
        for (int r = 0; r < nj; ++r) {
          const Element g = left * s.unit_image(j, r, 0);
          ds.residual = std::max(ds.residual, t.embedding().image_residual(g));
          coords.col(q * nj + r) = ak.coords(g);
        }
      }
      Eigen::BDCSVD<Mat> svd(coords);
      sv[i].push_back(svd.singularValues());
      if (svd.singularValues().size() > 0) scale = std::max(scale, svd.singularValues()(0));
    }
  for (int i = 0; i < sa.block_count(); ++i)
    for (int j = 0; j < sa.block_count(); ++j) {
      int rank = 0;
      for (Eigen::Index k2 = 0; k2 < sv[i][j].size(); ++k2)
        if (sv[i][j](k2) > kRankCut * scale) ++rank;
      ds.span_dim += sa.block_size(i) * sa.block_size(j) * rank;
    }
  ds.equal = ds.span_dim == ds.commutant_dim && ds.residual <= tol;
  return ds;
}

DepthResult depth(const JonesTower& tower, double tol) {
  DepthResult r;
  for (int k = 1; k <= tower.top(); ++k) {
    r.steps.push_back(depth_step(tower, k, tol));
    r.max_checked = k;
    if (r.steps.back().equal) {
      r.depth = k;
      break;
    }
  }
  return r;
}

DepthResult find_depth(JonesTower& tower, int m, double tol) {
  DepthResult r;
  for (int k = 1; k <= m; ++k) {
    if (tower.top() < k) extend_tower(tower);
    r.steps.push_back(depth_step(tower, k, tol));
    r.max_checked = k;
    if (r.steps.back().equal) {
      r.depth = k;
      break;
    }
  }
  return r;
}

std::string DepthResult::describe() const {
  if (depth) return std::to_string(*depth);
  return "> " + std::to_string(max_checked);
}

IntermediateProjection intermediate_jones_projection(const BasicConstruction& bc, const CompatibleExpectation& ce,
                                                     const QuasiBasis& qb_c, double tol) {
  const auto& a = bc.inclusion.ambient();
  if (!(ce.c_in_a.ambient() == a)) throw Error("intermediate algebra does not live in A");
  const int d = bc.gns_dim;
  IntermediateProjection ip;
  Mat ec = Mat::Zero(d, d);
  for (const auto& l : qb_c.elements) {
    const Mat ll = bc.lambda.apply(ce.c_in_a.embed(l)).blocks[0];
    ec += ll.adjoint() * bc.e1.blocks[0] * ll;
  }
  ip.e_c = Element({ec});
  ip.projection = (ec * ec - ec).norm() + (ec - ec.adjoint()).norm();
  for (const auto& g : ce.c_in_a.sub().generators()) {
    const Mat lg = bc.lambda.apply(ce.c_in_a.embed(g)).blocks[0];
    ip.commutes_c = std::max(ip.commutes_c, (ec * lg - lg * ec).norm());
  }
  for (const auto& x : matrix_units(a)) {
    const Mat lx = bc.lambda.apply(x).blocks[0];
    const Mat lf = bc.lambda.apply(ce.f.apply_ambient(x)).blocks[0];
    ip.compression = std::max(ip.compression, (ec * lx * ec - lf * ec).norm());
  }
  const Mat r = xi_matrix(a, bc.sqrt_density);
  const Mat rinv = xi_matrix(a, bc.inv_sqrt_density);
  const Mat pc = r * ce.c_in_a.embedding().as_matrix() * ce.f.map() * rinv;
  ip.gns_residual = (ec - pc).norm();
  if (ip.worst() > tol)
    throw NumericalError("intermediate Jones projection failed verification (residual " + std::to_string(ip.worst()) + ")");
  return ip;
}

}  // namespace wat
