#include "watatani/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <thread>

namespace wat {

using nlohmann::json;

bool Report::passed() const {
  for (const auto& c : checks)
    if (c.status != "pass" && c.status != "skipped") return false;
  return true;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

using Clock = std::chrono::steady_clock;

class Checks {
 public:
  Checks(std::string task, double tol) : task_(std::move(task)), tol_(tol), last_(Clock::now()) {}

  void add(const std::string& name, const std::string& anchor, bool pass, double residual = -1.0,
           const std::string& detail = "") {
    const auto now = Clock::now();
    out.push_back({task_, name, anchor, pass ? "pass" : "fail", residual, detail,
                   std::chrono::duration<double>(now - last_).count()});
    last_ = now;
  }
  void skipped(const std::string& name, const std::string& anchor, const std::string& detail) {
    add(name, anchor, true, -1.0, detail);
    out.back().status = "skipped";
  }
  void residual(const std::string& name, const std::string& anchor, double r, const std::string& detail = "") {
    add(name, anchor, std::isfinite(r) && r <= tol_, r, detail);
  }
  void error(const std::string& msg) {
    out.push_back({task_, "error", "", "error", -1.0, msg, std::chrono::duration<double>(Clock::now() - last_).count()});
  }
  double tol() const { return tol_; }

  std::vector<CheckRecord> out;

 private:
  std::string task_;
  double tol_;
  Clock::time_point last_;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::vector<Element> element_list(const SpecFile& s, const json& p, const char* key, const MultiMatrixAlgebra& a,
                                  const std::string& ctx) {
  std::vector<Element> out;
  if (!p.contains(key)) return out;
  const json& l = p.at(key);
  if (!l.is_array()) throw SchemaError(ctx + "." + key + ": expected an array of elements");
  for (std::size_t k = 0; k < l.size(); ++k) out.push_back(s.element(l[k], a, ctx + "." + key + "[" + std::to_string(k) + "]"));
  return out;
}

ConditionalExpectation expectation_for(const SpecFile& s, const json& p, const UnitalInclusion& inc, const std::string& ctx) {
  const std::string kind = p.value("expectation", std::string("minimal"));
  if (kind == "minimal") return minimal_expectation(inc);
  if (kind == "trace_preserving") {
    const TraceState& tr = s.trace(p, ctx);
    if (!(tr.algebra == inc.ambient())) throw SchemaError(ctx + ".trace: trace is not on the ambient algebra");
    return trace_preserving_expectation(inc, tr);
  }
  throw SchemaError(ctx + ".expectation: unknown kind '" + kind + "' (minimal, trace_preserving)");
}

std::vector<double> double_list(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw SchemaError(ctx + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw SchemaError(ctx + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

void task_verify_inclusion(const SpecFile& s, const TaskSpec& t, Checks& c) {
  const UnitalInclusion& inc = s.inclusion(t.params, t.context);
  c.residual("homomorphism", "ι(xy) = ι(x)ι(y), ι(x*) = ι(x)*, ι(1) = 1", inc.embedding().relation_residual());
  const Eigen::MatrixXi& lam = inc.inclusion_matrix();
  int bad = 0;
  for (int j = 0; j < inc.ambient().block_count(); ++j) {
    int sum = 0;
    for (int i = 0; i < inc.sub().block_count(); ++i) sum += inc.sub().block_size(i) * lam(i, j);
    bad += std::abs(sum - inc.ambient().block_size(j));
  }
  std::ostringstream os;
  os << "Lambda = " << lam.format(Eigen::IOFormat(Eigen::StreamPrecision, Eigen::DontAlignCols, " ", "; ", "", "", "[", "]"));
  c.add("dimension count", "n_B^T Λ = n_A", bad == 0, bad, os.str());
  c.add("connected", "Bratteli diagram connected", inc.connected() || !t.params.value("expect_connected", true), -1.0,
        inc.connected() ? "connected" : "disconnected");
  if (t.params.contains("expect_lambda")) {
    const json& e = t.params.at("expect_lambda");
    bool eq = e.is_array() && static_cast<Eigen::Index>(e.size()) == lam.rows();
    for (Eigen::Index i = 0; eq && i < lam.rows(); ++i) {
      eq = e[i].is_array() && static_cast<Eigen::Index>(e[i].size()) == lam.cols();
      for (Eigen::Index j = 0; eq && j < lam.cols(); ++j) eq = e[i][j] == lam(i, j);
    }
    c.add("inclusion matrix", "Λ(i,j) = multiplicity of B_i in A_j", eq, -1.0, os.str());
  }
}

void task_markov_trace(const SpecFile& s, const TaskSpec& t, Checks& c) {
  const MarkovTrace mt = markov_trace(s.inclusion(t.params, t.context));
  std::string tv;
  for (Eigen::Index i = 0; i < mt.trace.t.size(); ++i) tv += (i ? ", " : "") + fmt(mt.trace.t(i));
  c.residual("Perron-Frobenius vector", "Λ^T Λ t = β t", mt.residual, "t = (" + tv + "), modulus " + fmt(mt.modulus));
  if (t.params.contains("expect_t")) {
    const auto e = double_list(t.params.at("expect_t"), t.context + ".expect_t");
    double r = static_cast<Eigen::Index>(e.size()) == mt.trace.t.size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; std::isfinite(r) && i < e.size(); ++i) r = std::max(r, std::abs(e[i] - mt.trace.t(static_cast<Eigen::Index>(i))));
    c.residual("trace vector", "t = expected", r);
  }
  if (t.params.contains("expect_modulus"))
    c.residual("modulus", "β = ||Λ||^2", std::abs(mt.modulus - t.params.at("expect_modulus").get<double>()));
}

void task_trace_index(const SpecFile& s, const TaskSpec& t, Checks& c) {
  const TraceState& tr = s.trace(t.params, t.context);
  const IndexValue iv = trace_index(tr);
  c.residual("central", "Ind_W(tr) central", iv.central_residual, iv.describe());
  if (t.params.contains("expect_scalar"))
    c.add("scalar", "Ind_W(tr) scalar iff tr Markov", iv.scalar == t.params.at("expect_scalar").get<bool>(), -1.0,
          iv.describe());
  if (t.params.contains("expect_value"))
    c.residual("value", "Ind_W(tr) = dim P", iv.scalar ? std::abs(iv.value - t.params.at("expect_value").get<double>()) : INFINITY,
               iv.describe());
}

void task_expectation(const SpecFile& s, const TaskSpec& t, Checks& c) {
  const UnitalInclusion& inc = s.inclusion(t.params, t.context);
  const ConditionalExpectation e = expectation_for(s, t.params, inc, t.context);
  const ExpectationCheck ec = verify_expectation(e);
  c.residual("conditional expectation", "E(b x b') = b E(x) b', E(1) = 1, E(x*x) >= 0", ec.worst());
  c.add("faithful", "E(x*x) = 0 implies x = 0", ec.faithful, -1.0, "min density eigenvalue " + fmt(ec.min_density_eig));
  const MinimalityCheck mc = is_minimal(e, c.tol());
  const bool expect_min = t.params.value("expect_minimal", true);
  c.add("minimal", "E tracial on C_A(B) with values in Z(B)", mc.minimal == expect_min,
        std::max(mc.tracial_residual, mc.center_residual), mc.minimal ? "minimal" : "not minimal");
}

void task_quasi_basis(const SpecFile& s, const TaskSpec& t, const RunOptions& o, Checks& c) {
  const UnitalInclusion& inc = s.inclusion(t.params, t.context);
  const ConditionalExpectation e = expectation_for(s, t.params, inc, t.context);
  const BasicConstruction bc = basic_construction(inc, e, o.gns_cap);
  std::vector<Element> el = element_list(s, t.params, "elements", inc.ambient(), t.context);
  if (el.empty()) el = bc.canonical_basis;
  const QuasiBasis qb = verify_quasi_basis(e, el, c.tol());
  c.residual("right quasi-basis", "x = Σ E(x λ_i) λ_i*", qb.right_residual);
  const IndexValue iv = watatani_index(qb, 1e-8);
  c.residual("index agrees with canonical basis", "Ind_W(E) = Σ λ_i λ_i*", (iv.element - bc.index.element).norm(),
             iv.describe());
  c.residual("basis characterization", "Σ λ_i e_1 λ_i* = 1", basis_characterization_residual(bc, el));
  if (t.params.contains("expect_index"))
    c.residual("index value", "Ind_W(E) = expected", iv.scalar ? std::abs(iv.value - t.params.at("expect_index").get<double>()) : INFINITY,
               iv.describe());
}

void task_jones(const SpecFile& s, const TaskSpec& t, const RunOptions& o, Checks& c) {
  const UnitalInclusion& inc = s.inclusion(t.params, t.context);
  const ConditionalExpectation e = expectation_for(s, t.params, inc, t.context);
  const BasicConstruction bc = basic_construction(inc, e, o.gns_cap);
  const JonesRelations jr = verify_jones_relations(bc);
  c.residual("projection", "e_1 = e_1* = e_1^2", jr.projection);
  c.residual("commutes with B", "e_1 b = b e_1", jr.commutes_b);
  c.residual("compression", "e_1 x e_1 = E(x) e_1", jr.compression);
  c.residual("e_1 in A_1", "A_1 = span A e_1 A", jr.abstract_e1);
  const DualExpectationCheck dc = verify_dual_expectation(bc);
  c.residual("dual expectation", "Ẽ(x e_1 y) = x Ind^-1 y", std::max(dc.consistency, dc.expectation.worst()),
             "Ind_W(E) = " + bc.index.describe());
  c.residual("dual on e_1", "Ẽ(e_1) = Ind^-1", dc.e1_value);
  if (t.params.value("dual_index", false)) {
    const BasicConstruction bc2 = basic_construction(bc.a_in_a1, bc.dual, o.gns_cap);
    const double r = bc.index.scalar && bc2.index.scalar ? std::abs(bc.index.value - bc2.index.value) : INFINITY;
    c.residual("dual index", "Ind_W(Ẽ) = Ind_W(E)", r, bc2.index.describe());
  }
}

void task_tower(const SpecFile& s, const TaskSpec& t, const RunOptions& o, Checks& c) {
  const UnitalInclusion& inc = s.inclusion(t.params, t.context);
  const ConditionalExpectation e = expectation_for(s, t.params, inc, t.context);
  const int levels = t.params.value("levels", o.max_tower);
  JonesTower tower = start_tower(inc, e, o.gns_cap);
  for (int k = 1; k <= levels; ++k) {
    extend_tower(tower);
    const TowerLevel& lv = tower.levels[static_cast<std::size_t>(k)];
    const JonesRelations jr = verify_jones_relations(*lv.bc);
    c.residual("level " + std::to_string(k) + " Jones relations", "e_k x e_k = E_{k-1}(x) e_k", jr.worst(),
               "A_" + std::to_string(k) + " = " + lv.algebra().describe() + ", Ind = " + lv.index->describe());
  }
}

void task_depth(const SpecFile& s, const TaskSpec& t, const RunOptions& o, Checks& c) {
  const UnitalInclusion& inc = s.inclusion(t.params, t.context);
  const ConditionalExpectation e = expectation_for(s, t.params, inc, t.context);
  JonesTower tower = start_tower(inc, e, o.gns_cap);
  const DepthResult d = find_depth(tower, t.params.value("max_level", o.max_tower), 1e-8);
  bool pass = d.depth.has_value();
  if (pass && t.params.contains("expect_at_most")) pass = *d.depth <= t.params.at("expect_at_most").get<int>();
  double worst = 0.0;
  for (const auto& st : d.steps) worst = std::max(worst, st.residual);
  c.add("depth", "B'∩A_k = span (B'∩A_{k-1}) e_k (B'∩A_{k-1})", pass, worst, d.describe());
}

void task_unitary_search(const SpecFile& s, const TaskSpec& t, const RunOptions& o, Checks& c) {
  const TraceState& tr = s.trace(t.params, t.context);
  UnitarySearchConfig cfg;
  cfg.seed = o.seed;
  cfg.restarts = t.params.value("restarts", cfg.restarts);
  cfg.max_iterations = t.params.value("iterations", cfg.max_iterations);
  cfg.target_residual = t.params.value("target", cfg.target_residual);
  if (t.params.contains("expect_error")) {
    const std::string want = t.params.at("expect_error").get<std::string>();
    try {
      unitary_basis_search(tr, cfg);
      c.add("expected error", "no unitary orthonormal basis unless tr is Markov", false, -1.0, "search did not fail");
    } catch (const Error& err) {
      c.add("expected error", "no unitary orthonormal basis unless tr is Markov",
            std::string(err.what()).find(want) != std::string::npos, -1.0, err.what());
    }
    return;
  }
  const UnitarySearchResult r = unitary_basis_search(tr, cfg);
  c.add("unitary orthonormal basis", "tr(u_i* u_j) = δ_ij, u_i unitary", r.success && r.best_residual <= cfg.target_residual,
        r.best_residual, (r.exact ? "exact clock/shift" : "search") + std::string(", restarts ") + std::to_string(r.restarts_run));
}

void add_cocycle_checks(const CocycleReport& r, Checks& c) {
  c.residual("automorphisms", "α_g a *-automorphism", r.automorphism);
  c.residual("unitary cocycle", "σ(g,h) unitary", r.unitary);
  c.residual("normalization", "σ(g,e) = σ(e,g) = 1", r.normalization);
  c.residual("composition", "α_g α_h = Ad(σ(g,h)) α_gh", r.composition);
  c.residual("cocycle identity", "σ(g,h) σ(gh,k) = α_g(σ(h,k)) σ(g,hk)", r.cocycle);
}

void task_cocycle(const SpecFile& s, const TaskSpec& t, Checks& c) {
  add_cocycle_checks(verify_cocycle_action(s.action(t.params, t.context)), c);
}

void task_crossed_product(const SpecFile& s, const TaskSpec& t, Checks& c) {
  const CocycleAction& act = s.action(t.params, t.context);
  const CrossedProduct cp = crossed_product(act);
  const CrossedProductCheck k = verify_crossed_product(cp);
  const std::string dims = cp.algebra().describe();
  c.residual("covariance", "u_g x u_g* = α_g(x)", k.covariance, "A = " + dims);
  c.residual("multiplication", "u_g u_h = σ(g,h) u_gh", k.multiplication);
  c.residual("adjoint", "u_g* = u_{g^-1} σ(g,g^-1)*", k.star);
  c.add("generation", "C*(C ∪ u(G)) = A", k.generates);
  c.residual("E(u_g) = 0", "E(u_g) = 0 for g != e", k.e_of_u);
  c.residual("equivariance", "E(u_g x u_g*) = α_g(E(x))", k.equivariance);
  c.residual("conditional expectation", "E(Σ x_g u_g) = x_e", k.expectation.worst());
  c.residual("quasi-basis", "x = Σ E(x u_g*) u_g", std::max(k.basis.right_residual, k.basis.left_residual));
  c.residual("index", "Ind_W(E) = |G|", k.index_residual);
  if (t.params.contains("expect_dims")) {
    std::vector<int> want;
    for (const auto& v : t.params.at("expect_dims")) want.push_back(v.get<int>());
    std::vector<int> got = cp.algebra().dims();
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    c.add("algebra type", "C ⋊ G ≅ expected", want == got, -1.0, dims);
  }
}

SubalgebraBasis span_of(const UnitalInclusion& inc) {
  std::vector<Element> v;
  for (const auto& e : matrix_units(inc.sub())) v.push_back(inc.embed(e));
  return SubalgebraBasis::from_spanning(inc.ambient(), v);
}

void task_recover(const SpecFile& s, const TaskSpec& t, Checks& c) {
  const CocycleAction& act = s.action(t.params, t.context);
  const CrossedProduct cp = crossed_product(act);
  const CompatibleExpectation f = compatible_expectation(cp.c_in_a, span_of(cp.c_in_a), cp.expectation);
  const RecoveredStructure rs = recover_structure(cp.c_in_a, f, cp.u);
  c.add("group", "recovered G ≅ G", find_isomorphism(rs.group, act.group).has_value(), -1.0,
        "order " + std::to_string(rs.group.order()));
  add_cocycle_checks(rs.cocycle, c);
  c.add("bijective", "φ a linear bijection", rs.phi_rank == cp.algebra().total_dim() && rs.phi.cols() == rs.phi.rows(), -1.0,
        "rank " + std::to_string(rs.phi_rank));
  const double tol = std::max(c.tol(), 1e-8);
  c.add("multiplicative", "φ(xy) = φ(x)φ(y)", rs.phi_multiplicative <= tol, rs.phi_multiplicative);
  c.add("adjoint", "φ(x*) = φ(x)*", rs.phi_star <= tol, rs.phi_star);
  c.add("fixes C", "φ|_C = id", rs.phi_on_c <= tol, rs.phi_on_c, "rebuilt A = " + rs.rebuilt.algebra().describe());
}

struct WeylInputs {
  ConditionalExpectation e0;
  CompatibleExpectation f;
  std::vector<Element> witnesses;
};

WeylInputs weyl_inputs(const SpecFile& s, const TaskSpec& t, const UnitalInclusion& inc) {
  WeylInputs w;
  w.e0 = expectation_for(s, t.params, inc, t.context);
  w.witnesses = element_list(s, t.params, "witnesses", inc.ambient(), t.context);
  // C = B ∨ C_A(B).
  std::vector<Element> gens;
  for (const auto& g : inc.sub().generators()) gens.push_back(inc.embed(g));
  for (const auto& z : relative_commutant(inc).elements()) gens.push_back(z);
  w.f = compatible_expectation(inc, generated_subalgebra(inc.ambient(), gens), w.e0);
  return w;
}

void task_weyl_index(const SpecFile& s, const TaskSpec& t, Checks& c) {
  const UnitalInclusion& inc = s.inclusion(t.params, t.context);
  const WeylInputs w = weyl_inputs(s, t, inc);
  const WeylIndexReport rep = weyl_and_index_report(inc, w.e0, w.f, w.witnesses, c.tol());
  for (const auto& l : rep.lines) {
    if (l.applicable)
      c.add(l.name, l.name, l.passed, l.residual, l.detail);
    else
      c.skipped(l.name, l.name, "not applicable, B is not simple: " + l.detail);
  }
  const std::string raw = rep.raw_classes ? std::to_string(*rep.raw_classes) : "undecided";
  const std::string info = "classes " + std::to_string(rep.classes) + " (mod U(B): " + raw + "), dim C_A(B) " +
                           std::to_string(rep.centralizer_dim);
  if (t.params.contains("expect_classes"))
    c.add("class count", "|W| = expected", rep.classes == t.params.at("expect_classes").get<int>(), -1.0, info);
  else
    c.add("class count", "|W| computed from witnesses", true, -1.0, info);
}

void task_regularity(const SpecFile& s, const TaskSpec& t, Checks& c) {
  const UnitalInclusion& inc = s.inclusion(t.params, t.context);
  const auto wit = element_list(s, t.params, "witnesses", inc.ambient(), t.context);
  const bool reg = verify_regularity(inc, wit);
  c.add("regular", "N_A(B) generates A", reg == t.params.value("expect", true), -1.0, reg ? "regular" : "not certified");
}

void task_classify(const SpecFile& s, const TaskSpec& t, Checks& c) {
  const CocycleAction& act = s.action(t.params, t.context);
  if (!t.params.contains("element") || !t.params.at("element").is_string())
    throw SchemaError(t.context + ".element: expected a group label");
  int g = 0;
  try {
    g = act.group.index_of(t.params.at("element").get<std::string>());
  } catch (const Error& e) {
    throw SchemaError(t.context + ".element: " + e.what());
  }
  const AutomorphismReport r = classify_automorphism(act.alpha[static_cast<std::size_t>(g)]);
  const std::string what = std::string(r.inner ? "inner" : "outer") + (r.free ? ", free" : "") +
                           ", intertwiner dim " + std::to_string(r.intertwiner_dim);
  c.add("outer iff free", "θ outer ⇔ θ free (trivial center)", r.consistent && !(r.free && r.inner), r.witness_residual, what);
  if (t.params.contains("expect_inner"))
    c.add("classification", "θ = Ad(w)", r.inner == t.params.at("expect_inner").get<bool>(), -1.0, what);
}

std::vector<CheckRecord> run_task(const SpecFile& s, const TaskSpec& t, const RunOptions& o) {
  Checks c(t.label, t.params.value("tolerance", o.tolerance));
  try {
    const std::string& k = t.kind;
    if (k == "verify_inclusion") task_verify_inclusion(s, t, c);
    else if (k == "markov_trace") task_markov_trace(s, t, c);
    else if (k == "trace_index") task_trace_index(s, t, c);
    else if (k == "expectation") task_expectation(s, t, c);
    else if (k == "quasi_basis") task_quasi_basis(s, t, o, c);
    else if (k == "jones") task_jones(s, t, o, c);
    else if (k == "tower") task_tower(s, t, o, c);
    else if (k == "depth") task_depth(s, t, o, c);
    else if (k == "unitary_search") task_unitary_search(s, t, o, c);
    else if (k == "cocycle") task_cocycle(s, t, c);
    else if (k == "crossed_product") task_crossed_product(s, t, c);
    else if (k == "recover") task_recover(s, t, c);
    else if (k == "weyl_index") task_weyl_index(s, t, c);
    else if (k == "regularity") task_regularity(s, t, c);
    else if (k == "classify") task_classify(s, t, c);
    else throw SchemaError(t.context + ".task: unknown task '" + k + "'");
  } catch (const Error& e) {
    c.error(e.what());
  } catch (const json::exception& e) {
    throw SchemaError(t.context + ": " + e.what());
  }
  return c.out;
}

}  // namespace

Report run_spec(const SpecFile& spec, const std::string& spec_text, const RunOptions& opts) {
  Report rep;
  std::ostringstream key;
  key << spec_text << "|seed=" << opts.seed << "|tol=" << fmt(opts.tolerance) << "|max-tower=" << opts.max_tower
      << "|gns-cap=" << opts.gns_cap;
  rep.digest = fnv1a_hex(key.str());

  const std::size_t n = spec.tasks.size();
  std::vector<std::vector<CheckRecord>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        results[k] = run_task(spec, spec.tasks[k], opts);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(n)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    for (auto& r : results[k]) rep.checks.push_back(std::move(r));
  }
  return rep;
}

std::string render_text(const Report& r, bool timing) {
  std::ostringstream os;
  os << r.version << "\ninput digest " << r.digest << "\n";
  for (const auto& c : r.checks) {
    std::string status = c.status;
    for (auto& ch : status) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    os << "[" << status << "] " << c.task << " :: " << c.name;
    if (c.residual >= 0.0) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3e", c.residual);
      os << "  residual " << buf;
    }
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    if (!c.anchor.empty()) os << "  [" << c.anchor << "]";
    if (timing) os << "  " << fmt(c.elapsed) << "s";
    os << "\n";
  }
  os << "overall " << (r.passed() ? "PASS" : "FAIL") << " (" << r.checks.size() << " checks)\n";
  return os.str();
}

std::string render_structured(const Report& r, bool timing) {
  json j;
  j["version"] = r.version;
  j["input_digest"] = r.digest;
  j["checks"] = json::array();
  for (const auto& c : r.checks) {
    json cj{{"task", c.task}, {"name", c.name}, {"anchor", c.anchor}, {"status", c.status}};
    cj["residual"] = c.residual >= 0.0 && std::isfinite(c.residual) ? json(c.residual) : json(nullptr);
    if (!c.detail.empty()) cj["detail"] = c.detail;
    if (timing) cj["elapsed"] = c.elapsed;
    j["checks"].push_back(cj);
  }
  j["overall"] = r.passed() ? "pass" : "fail";
  return j.dump(2) + "\n";
}

}  // namespace wat
