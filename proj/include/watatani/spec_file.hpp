#pragma once

// JSON spec files: named algebras, elements, inclusions, traces, groups,
// actions and an ordered task list.

#include "watatani/group.hpp"

#include <json.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wat {

/// Malformed or inconsistent spec; the message starts with the JSON path.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TaskSpec {
  std::string kind;
  std::string label;     // "name" field, or "<index>:<kind>"
  std::string context;   // JSON path, e.g. tasks[3]
  nlohmann::json params;
};

struct SpecFile {
  std::map<std::string, MultiMatrixAlgebra> algebras;
  std::map<std::string, Element> elements;
  std::map<std::string, UnitalInclusion> inclusions;
  std::map<std::string, TraceState> traces;
  std::map<std::string, FiniteGroup> groups;
  std::map<std::string, CocycleAction> actions;
  std::vector<TaskSpec> tasks;

  /// Named element or inline block list, checked against `a`.
  Element element(const nlohmann::json& j, const MultiMatrixAlgebra& a, const std::string& ctx) const;
  const UnitalInclusion& inclusion(const nlohmann::json& params, const std::string& ctx) const;
  const TraceState& trace(const nlohmann::json& params, const std::string& ctx) const;
  const CocycleAction& action(const nlohmann::json& params, const std::string& ctx) const;
};

/// Parses and resolves every section; throws SchemaError.
SpecFile parse_spec(const std::string& text);

cd parse_complex(const nlohmann::json& j, const std::string& ctx);
Mat parse_matrix(const nlohmann::json& j, int n, const std::string& ctx);
nlohmann::json complex_to_json(cd z);

}  // namespace wat
