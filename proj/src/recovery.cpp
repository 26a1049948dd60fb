#include "watatani/group.hpp"

namespace wat {

RecoveredStructure recover_structure(const UnitalInclusion& inc, const CompatibleExpectation& f,
                                     const std::vector<Element>& reps_in, double tol) {
  const auto& a = inc.ambient();
  const auto& c_in_a = f.c_in_a;
  const auto& c = c_in_a.sub();
  const auto& fe = f.f;
  if (!(c_in_a.ambient() == a)) throw Error("intermediate algebra does not sit in the ambient algebra");
  const Element one = a.identity();

  RecoveredStructure out;
  int id = -1;
  for (std::size_t k = 0; k < reps_in.size() && id < 0; ++k)
    if ((reps_in[k] - one).norm() <= tol) id = static_cast<int>(k);
  if (id < 0) throw Error("coset representatives must include the identity");
  out.reps.push_back(reps_in[static_cast<std::size_t>(id)]);
  for (std::size_t k = 0; k < reps_in.size(); ++k)
    if (static_cast<int>(k) != id) out.reps.push_back(reps_in[k]);
  const auto& u = out.reps;
  const int n = static_cast<int>(u.size());
  std::vector<Element> ua;
  for (const auto& x : u) ua.push_back(x.adjoint());

  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && operator_norm(fe.apply(ua[x] * u[y])) > 0.1)
        throw Error("representatives are not F-orthogonal");

  const auto cunits = matrix_units(c);
  std::vector<Element> cu;
  for (const auto& e : cunits) cu.push_back(c_in_a.embed(e));
  {
    std::vector<Element> span;
    for (int x = 0; x < n; ++x)
      for (const auto& e : cu) span.push_back(e * u[x]);
    if (SubalgebraBasis::from_spanning(a, span).dim() != a.total_dim() || n * c.total_dim() != a.total_dim())
      throw Error("witness set does not certify regularity");
  }

  // Class multiplication table from the F-support of u_g u_h.
  std::vector<std::vector<int>> table(n, std::vector<int>(n, -1));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const Element p = u[x] * u[y];
      for (int k = 0; k < n; ++k) {
        const double val = operator_norm(fe.apply(p * ua[k]));
        if (val > 0.1 && val < 0.9) throw NumericalError("witness set numerically degenerate");
        if (val > 0.5) {
          if (table[x][y] >= 0) throw NumericalError("product of representatives meets two classes");
          table[x][y] = k;
        }
      }
      if (table[x][y] < 0) throw Error("representatives are not closed under multiplication modulo C");
    }
  std::vector<std::string> labels{"e"};
  for (int k = 1; k < n; ++k) labels.push_back("u" + std::to_string(k));
  out.group = FiniteGroup(labels, table);
  const auto& g = out.group;

  CocycleAction act{g, c, {}, {}};
  const auto& cemb = c_in_a.embedding();
  for (int x = 0; x < n; ++x) {
    std::vector<Element> imgs;
    for (const auto& e : cu) {
      const Element y = u[x] * e * ua[x];
      if (cemb.image_residual(y) > tol) throw Error("Ad(u_g) does not preserve the intermediate algebra");
      imgs.push_back(cemb.preimage(y));
    }
    act.alpha.push_back(StarHomomorphism::from_unit_images(c, c, imgs, tol));
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const Element s = u[x] * u[y] * ua[g.mul(x, y)];
      if (cemb.image_residual(s) > tol) throw Error("u_g u_h u_gh* is not in the intermediate algebra");
      act.sigma.push_back(cemb.preimage(s));
    }
  out.cocycle = verify_cocycle_action(act);
  if (!out.cocycle.ok(tol)) throw Error("recovered action fails: " + out.cocycle.failing(tol));
  out.action = act;
  out.rebuilt = crossed_product(act);
  const auto& cp = out.rebuilt;
  const auto& alg2 = cp.algebra();

  // φ(x) = Σ_g ι'(F(x u_g*)) u'_g on the matrix units of A.
  const auto aunits = matrix_units(a);
  std::vector<Element> phi_units;
  out.phi = Mat(alg2.total_dim(), a.total_dim());
  for (std::size_t k = 0; k < aunits.size(); ++k) {
    Element y = alg2.zero();
    for (int x = 0; x < n; ++x) y += cp.c_in_a.embed(fe.apply(aunits[k] * ua[x])) * cp.u[x];
    out.phi.col(static_cast<Eigen::Index>(k)) = alg2.coords(y);
    phi_units.push_back(std::move(y));
  }
  out.phi_rank = numerical_rank(out.phi);
  for (int j = 0; j < a.block_count(); ++j) {
    const int nj = a.block_size(j);
    for (int p = 0; p < nj; ++p)
      for (int q = 0; q < nj; ++q) {
        const Element& x = phi_units[a.unit_index(j, p, q)];
        out.phi_star = std::max(out.phi_star, (phi_units[a.unit_index(j, q, p)] - x.adjoint()).norm());
        for (int j2 = 0; j2 < a.block_count(); ++j2)
          for (int r = 0; r < a.block_size(j2); ++r)
            for (int s = 0; s < a.block_size(j2); ++s) {
              const Element prod = x * phi_units[a.unit_index(j2, r, s)];
              const bool nonzero = j2 == j && q == r;
              const double res = nonzero ? (prod - phi_units[a.unit_index(j, p, s)]).norm() : prod.norm();
              out.phi_multiplicative = std::max(out.phi_multiplicative, res);
            }
      }
  }
  for (std::size_t k = 0; k < cunits.size(); ++k) {
    const Element img = alg2.from_coords(out.phi * a.coords(cu[k]));
    out.phi_on_c = std::max(out.phi_on_c, (img - cp.c_in_a.embed(cunits[k])).norm());
  }

  const auto& bemb = inc.embedding();
  const auto bunits = matrix_units(inc.sub());
  for (int x = 0; x < n; ++x) {
    std::vector<Element> imgs;
    for (const auto& e : bunits) {
      const Element y = u[x] * inc.embed(e) * ua[x];
      if (bemb.image_residual(y) > tol) throw Error("representative does not normalize the subalgebra");
      imgs.push_back(bemb.preimage(y));
    }
    out.restricted_to_b.push_back(
        classify_automorphism(StarHomomorphism::from_unit_images(inc.sub(), inc.sub(), imgs, tol), tol));
  }
  return out;
}

}  // namespace wat
