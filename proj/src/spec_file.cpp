#include "watatani/spec_file.hpp"

namespace wat {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& ctx, const std::string& msg) { throw SchemaError(ctx + ": " + msg); }

const json& need(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) fail(ctx, std::string("missing field '") + key + "'");
  return j.at(key);
}

int need_int(const json& j, const char* key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_number_integer()) fail(ctx + "." + key, "expected an integer");
  return v.get<int>();
}

std::string need_string(const json& j, const char* key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_string()) fail(ctx + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<int> int_list(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty()) fail(ctx, "expected a non-empty integer array");
  std::vector<int> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number_integer() || j[k].get<int>() < 1) fail(ctx + "[" + std::to_string(k) + "]", "expected a positive integer");
    out.push_back(j[k].get<int>());
  }
  return out;
}

template <class T>
const T& lookup(const std::map<std::string, T>& m, const json& name, const char* section, const std::string& ctx) {
  if (!name.is_string()) fail(ctx, std::string("expected the name of an entry in '") + section + "'");
  const auto it = m.find(name.get<std::string>());
  if (it == m.end()) fail(ctx, std::string("unknown ") + section + " '" + name.get<std::string>() + "'");
  return it->second;
}

MultiMatrixAlgebra algebra_of(const SpecFile& s, const json& j, const std::string& ctx) {
  if (j.is_string()) return lookup(s.algebras, j, "algebras", ctx);
  return MultiMatrixAlgebra(int_list(j, ctx));
}

UnitalInclusion parse_inclusion(const SpecFile& s, const json& j, const std::string& ctx) {
  const std::string kind = j.contains("kind") ? need_string(j, "kind", ctx) : "unit_images";
  try {
    if (kind == "unit_images") {
      const MultiMatrixAlgebra b = algebra_of(s, need(j, "sub", ctx), ctx + ".sub");
      const MultiMatrixAlgebra a = algebra_of(s, need(j, "ambient", ctx), ctx + ".ambient");
      const json& imgs = need(j, "unit_images", ctx);
      if (!imgs.is_array() || static_cast<int>(imgs.size()) != b.total_dim())
        fail(ctx + ".unit_images", "expected " + std::to_string(b.total_dim()) + " images, one per matrix unit of the subalgebra");
      std::vector<Element> el;
      for (std::size_t k = 0; k < imgs.size(); ++k)
        el.push_back(s.element(imgs[k], a, ctx + ".unit_images[" + std::to_string(k) + "]"));
      return UnitalInclusion(StarHomomorphism::from_unit_images(b, a, el, 1e-8));
    }
    if (kind == "diagonal") return diagonal_inclusion(need_int(j, "n", ctx));
    if (kind == "tensor") return tensor_inclusion(need_int(j, "k", ctx), need_int(j, "m", ctx));
    if (kind == "scalar") return scalar_inclusion(algebra_of(s, need(j, "ambient", ctx), ctx + ".ambient"));
    if (kind == "identity") return identity_inclusion(algebra_of(s, need(j, "algebra", ctx), ctx + ".algebra"));
    if (kind == "matrix") {
      const std::vector<int> sub = int_list(need(j, "sub", ctx), ctx + ".sub");
      const json& lj = need(j, "lambda", ctx);
      if (!lj.is_array() || lj.size() != sub.size()) fail(ctx + ".lambda", "expected one row per subalgebra block");
      Eigen::MatrixXi lam(static_cast<Eigen::Index>(sub.size()), lj[0].is_array() ? lj[0].size() : 0);
      for (std::size_t r = 0; r < lj.size(); ++r) {
        if (!lj[r].is_array() || static_cast<Eigen::Index>(lj[r].size()) != lam.cols())
          fail(ctx + ".lambda[" + std::to_string(r) + "]", "rows must have equal length");
        for (std::size_t c = 0; c < lj[r].size(); ++c) {
          if (!lj[r][c].is_number_integer()) fail(ctx + ".lambda", "expected integers");
          lam(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = lj[r][c].get<int>();
        }
      }
      return inclusion_from_matrix(sub, lam);
    }
  } catch (const Error& e) {
    fail(ctx, e.what());
  }
  fail(ctx + ".kind", "unknown inclusion kind '" + kind + "'");
}

FiniteGroup parse_group(const SpecFile& s, const json& j, const std::string& ctx) {
  try {
    if (j.contains("builtin")) {
      const std::string b = need_string(j, "builtin", ctx);
      if (b == "cyclic") return FiniteGroup::cyclic(need_int(j, "n", ctx));
      if (b == "dihedral") return FiniteGroup::dihedral(need_int(j, "n", ctx));
      if (b == "klein") return FiniteGroup::klein();
      if (b == "quaternion") return FiniteGroup::quaternion();
      if (b == "product") {
        const json& of = need(j, "of", ctx);
        if (!of.is_array() || of.size() != 2) fail(ctx + ".of", "expected two group names");
        return FiniteGroup::product(lookup(s.groups, of[0], "groups", ctx + ".of[0]"),
                                    lookup(s.groups, of[1], "groups", ctx + ".of[1]"));
      }
      fail(ctx + ".builtin", "unknown group '" + b + "'");
    }
    const json& lj = need(j, "labels", ctx);
    const json& tj = need(j, "table", ctx);
    if (!lj.is_array() || !tj.is_array() || lj.size() != tj.size()) fail(ctx, "labels and table must have equal length");
    std::vector<std::string> labels;
    for (const auto& l : lj) {
      if (!l.is_string()) fail(ctx + ".labels", "expected strings");
      labels.push_back(l.get<std::string>());
    }
    const int n = static_cast<int>(labels.size());
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (int r = 0; r < n; ++r) {
      const std::string rc = ctx + ".table[" + std::to_string(r) + "]";
      if (!tj[r].is_array() || static_cast<int>(tj[r].size()) != n) fail(rc, "expected " + std::to_string(n) + " entries");
      for (int c = 0; c < n; ++c) {
        const json& v = tj[r][c];
        if (v.is_number_integer()) {
          table[r][c] = v.get<int>();
        } else if (v.is_string()) {
          const auto it = std::find(labels.begin(), labels.end(), v.get<std::string>());
          if (it == labels.end()) fail(rc, "unknown label '" + v.get<std::string>() + "'");
          table[r][c] = static_cast<int>(it - labels.begin());
        } else {
          fail(rc, "expected labels or indices");
        }
      }
    }
    return FiniteGroup(labels, table);
  } catch (const Error& e) {
    fail(ctx, e.what());
  }
}

CocycleAction parse_action(const SpecFile& s, const json& j, const std::string& ctx) {
  const FiniteGroup& g = lookup(s.groups, need(j, "group", ctx), "groups", ctx + ".group");
  const MultiMatrixAlgebra c = algebra_of(s, need(j, "algebra", ctx), ctx + ".algebra");
  CocycleAction act = trivial_action(g, c);
  auto group_index = [&](const std::string& label, const std::string& where) {
    try {
      return g.index_of(label);
    } catch (const Error& e) {
      fail(where, e.what());
    }
  };
  try {
    if (j.contains("alpha")) {
      const json& al = j.at("alpha");
      if (!al.is_object()) fail(ctx + ".alpha", "expected an object keyed by group label");
      for (const auto& [label, imgs] : al.items()) {
        const std::string where = ctx + ".alpha." + label;
        const int x = group_index(label, where);
        if (!imgs.is_array() || static_cast<int>(imgs.size()) != c.total_dim())
          fail(where, "expected one image per matrix unit");
        std::vector<Element> el;
        for (std::size_t k = 0; k < imgs.size(); ++k) el.push_back(s.element(imgs[k], c, where + "[" + std::to_string(k) + "]"));
        act.alpha[x] = StarHomomorphism::from_unit_images(c, c, el, 1e-8);
      }
    }
    if (j.contains("alpha_inner")) {
      const json& al = j.at("alpha_inner");
      if (!al.is_object()) fail(ctx + ".alpha_inner", "expected an object keyed by group label");
      for (const auto& [label, u] : al.items()) {
        const std::string where = ctx + ".alpha_inner." + label;
        act.alpha[group_index(label, where)] = inner_automorphism(c, s.element(u, c, where));
      }
    }
    if (j.contains("alpha_permutation")) {
      const json& al = j.at("alpha_permutation");
      for (const auto& [label, pj] : al.items()) {
        const std::string where = ctx + ".alpha_permutation." + label;
        for (int i = 0; i < c.block_count(); ++i)
          if (c.block_size(i) != 1) fail(where, "permutation actions need a commutative algebra");
        if (!pj.is_array() || static_cast<int>(pj.size()) != c.block_count()) fail(where, "wrong permutation length");
        std::vector<std::vector<Frame>> frames(c.block_count());
        for (int i = 0; i < c.block_count(); ++i) {
          if (!pj[i].is_number_integer() || pj[i].get<int>() < 0 || pj[i].get<int>() >= c.block_count())
            fail(where, "permutation entry out of range");
          frames[i].push_back(Frame{pj[i].get<int>(), Mat::Identity(1, 1)});
        }
        act.alpha[group_index(label, where)] = StarHomomorphism(c, c, frames);
      }
    }
    for (const char* key : {"sigma", "sigma_scalar"}) {
      if (!j.contains(key)) continue;
      const json& sj = j.at(key);
      if (!sj.is_array()) fail(ctx + "." + key, "expected a list of {g, h, value}");
      for (std::size_t k = 0; k < sj.size(); ++k) {
        const std::string where = ctx + "." + key + "[" + std::to_string(k) + "]";
        const int x = group_index(need_string(sj[k], "g", where), where + ".g");
        const int y = group_index(need_string(sj[k], "h", where), where + ".h");
        const json& v = need(sj[k], "value", where);
        act.sigma[static_cast<std::size_t>(x * g.order() + y)] =
            std::string(key) == "sigma" ? s.element(v, c, where + ".value") : parse_complex(v, where + ".value") * c.identity();
      }
    }
  } catch (const Error& e) {
    fail(ctx, e.what());
  }
  return act;
}

}  // namespace

cd parse_complex(const json& j, const std::string& ctx) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  fail(ctx, "expected a number or a [re, im] pair");
}

json complex_to_json(cd z) { return json::array({z.real(), z.imag()}); }

Mat parse_matrix(const json& j, int n, const std::string& ctx) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) fail(ctx, "expected " + std::to_string(n) + " rows");
  Mat m(n, n);
  for (int r = 0; r < n; ++r) {
    const std::string rc = ctx + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n) fail(rc, "expected " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) m(r, c) = parse_complex(j[r][c], rc + "[" + std::to_string(c) + "]");
  }
  return m;
}

Element SpecFile::element(const json& j, const MultiMatrixAlgebra& a, const std::string& ctx) const {
  if (j.is_string()) {
    const Element& x = lookup(elements, j, "elements", ctx);
    if (!a.contains(x)) fail(ctx, "element '" + j.get<std::string>() + "' does not belong to " + a.describe());
    return x;
  }
  const json& blocks = j.is_object() ? need(j, "blocks", ctx) : j;
  if (!blocks.is_array() || static_cast<int>(blocks.size()) != a.block_count())
    fail(ctx, "expected " + std::to_string(a.block_count()) + " blocks for " + a.describe());
  Element x;
  for (int i = 0; i < a.block_count(); ++i)
    x.blocks.push_back(parse_matrix(blocks[i], a.block_size(i), ctx + ".blocks[" + std::to_string(i) + "]"));
  return x;
}

const UnitalInclusion& SpecFile::inclusion(const json& params, const std::string& ctx) const {
  return lookup(inclusions, need(params, "inclusion", ctx), "inclusions", ctx + ".inclusion");
}

const TraceState& SpecFile::trace(const json& params, const std::string& ctx) const {
  return lookup(traces, need(params, "trace", ctx), "traces", ctx + ".trace");
}

const CocycleAction& SpecFile::action(const json& params, const std::string& ctx) const {
  return lookup(actions, need(params, "action", ctx), "actions", ctx + ".action");
}

SpecFile parse_spec(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("spec is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw SchemaError("spec: top level must be an object");
  static const std::vector<std::string> known{"algebras", "elements", "inclusions", "traces", "groups", "actions", "tasks"};
  for (const auto& [key, v] : root.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) fail("spec", "unknown section '" + key + "'");

  SpecFile s;
  auto section = [&](const char* name) -> const json& {
    static const json empty = json::object();
    if (!root.contains(name)) return empty;
    if (!root.at(name).is_object()) fail(name, "expected an object");
    return root.at(name);
  };
  for (const auto& [name, v] : section("algebras").items())
    s.algebras[name] = MultiMatrixAlgebra(int_list(v.is_object() ? need(v, "dims", "algebras." + name) : v, "algebras." + name));
  for (const auto& [name, v] : section("elements").items()) {
    const std::string ctx = "elements." + name;
    s.elements[name] = s.element(v, algebra_of(s, need(v, "algebra", ctx), ctx + ".algebra"), ctx);
  }
  for (const auto& [name, v] : section("inclusions").items()) s.inclusions[name] = parse_inclusion(s, v, "inclusions." + name);
  for (const auto& [name, v] : section("traces").items()) {
    const std::string ctx = "traces." + name;
    try {
      if (v.contains("markov_of")) {
        s.traces[name] = markov_trace(lookup(s.inclusions, v.at("markov_of"), "inclusions", ctx + ".markov_of")).trace;
      } else {
        const MultiMatrixAlgebra a = algebra_of(s, need(v, "algebra", ctx), ctx + ".algebra");
        if (v.contains("markov_scalars") && v.at("markov_scalars").get<bool>()) {
          s.traces[name] = markov_trace_of_scalars(a);
          continue;
        }
        const json& tj = need(v, "t", ctx);
        if (!tj.is_array() || static_cast<int>(tj.size()) != a.block_count()) fail(ctx + ".t", "expected one value per block");
        RVec t(a.block_count());
        for (int i = 0; i < a.block_count(); ++i) {
          if (!tj[i].is_number()) fail(ctx + ".t", "expected numbers");
          t(i) = tj[i].get<double>();
        }
        s.traces[name] = TraceState(a, t);
      }
    } catch (const Error& e) {
      fail(ctx, e.what());
    }
  }
  for (const auto& [name, v] : section("groups").items()) s.groups[name] = parse_group(s, v, "groups." + name);
  for (const auto& [name, v] : section("actions").items()) s.actions[name] = parse_action(s, v, "actions." + name);

  if (root.contains("tasks")) {
    const json& tj = root.at("tasks");
    if (!tj.is_array()) fail("tasks", "expected an array");
    for (std::size_t k = 0; k < tj.size(); ++k) {
      const std::string ctx = "tasks[" + std::to_string(k) + "]";
      TaskSpec t;
      t.kind = need_string(tj[k], "task", ctx);
      t.label = tj[k].contains("name") ? need_string(tj[k], "name", ctx) : std::to_string(k) + ":" + t.kind;
      t.context = ctx;
      t.params = tj[k];
      s.tasks.push_back(std::move(t));
    }
  }
  return s;
}

}  // namespace wat
