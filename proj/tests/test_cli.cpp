#include "watatani/runner.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace wat;

namespace {

std::string read_spec(const std::string& name) {
  std::ifstream in(std::string(WATATANI_SPEC_DIR) + "/" + name);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Report run_text(const std::string& text, RunOptions opts = {}) { return run_spec(parse_spec(text), text, opts); }

const CheckRecord* find(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("complex numbers parse as pairs or plain numbers") {
  CHECK(parse_complex(nlohmann::json(2.5), "x") == cd(2.5, 0.0));
  CHECK(parse_complex(nlohmann::json::parse("[1, -2]"), "x") == cd(1.0, -2.0));
  CHECK_THROWS_AS(parse_complex(nlohmann::json("one"), "x"), SchemaError);
  CHECK_THROWS_AS(parse_complex(nlohmann::json::parse("[1, 2, 3]"), "x"), SchemaError);
  const Mat m = parse_matrix(nlohmann::json::parse("[[0, [0, -1]], [[0, 1], 0]]"), 2, "y");
  CHECK(m(0, 1) == cd(0.0, -1.0));
  CHECK_THROWS_AS(parse_matrix(nlohmann::json::parse("[[1, 0]]"), 2, "y"), SchemaError);
}

TEST_CASE("schema errors carry the JSON path") {
  CHECK_THROWS_WITH_AS(parse_spec("{\"algebras\": {\"A\": [0]}}"), doctest::Contains("algebras.A"), SchemaError);
  CHECK_THROWS_WITH_AS(parse_spec("{\"bogus\": 1}"), doctest::Contains("bogus"), SchemaError);
  CHECK_THROWS_AS(parse_spec("not json"), SchemaError);
  CHECK_THROWS_WITH_AS(run_text(R"({"tasks": [{"task": "markov_trace", "inclusion": "nope"}]})"),
                       doctest::Contains("tasks[0]"), SchemaError);
}

TEST_CASE("the Markov trace task reports the modulus") {
  const std::string text = R"({
    "algebras": {"A": [1, 2]},
    "inclusions": {"c": {"kind": "scalar", "ambient": "A"}},
    "tasks": [{"task": "markov_trace", "inclusion": "c", "expect_modulus": 5}]
  })";
  const auto r = run_text(text);
  CHECK(r.passed());
  REQUIRE_FALSE(r.checks.empty());
  for (const auto& c : r.checks) CHECK(c.status == "pass");
}

TEST_CASE("the bundled specs pass, and the corrupted cocycle fails on the cocycle identity") {
  for (const char* name : {"identity_m2.json", "diag_tower.json", "crossed_products.json"}) {
    CAPTURE(name);
    CHECK(run_text(read_spec(name)).passed());
  }
  const auto bad = run_text(read_spec("corrupted_cocycle.json"));
  CHECK_FALSE(bad.passed());
  const auto* c = find(bad, "cocycle identity");
  REQUIRE(c);
  CHECK(c->status == "fail");
}

TEST_CASE("reports are deterministic across job counts") {
  const std::string text = read_spec("crossed_products.json");
  RunOptions one;
  RunOptions many;
  many.jobs = 4;
  const auto a = run_text(text, one);
  const auto b = run_text(text, many);
  CHECK(render_text(a, false) == render_text(b, false));
  CHECK(render_structured(a, false) == render_structured(b, false));
  CHECK(a.digest == b.digest);
}

TEST_CASE("digest depends on the spec text and the options") {
  const std::string text = read_spec("identity_m2.json");
  RunOptions o;
  const auto a = run_text(text, o);
  o.seed = 1;
  const auto b = run_text(text, o);
  CHECK(a.digest != b.digest);
  CHECK(a.digest.size() == 16);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("structured output is valid JSON with one entry per check") {
  const std::string text = read_spec("diag_tower.json");
  const auto r = run_text(text);
  const auto j = nlohmann::json::parse(render_structured(r, false));
  CHECK(j.at("checks").size() == r.checks.size());
  CHECK(j.at("version") == kToolVersion);
  bool saw_skip = false;
  for (const auto& c : j.at("checks")) {
    CHECK(c.contains("status"));
    CHECK_FALSE(c.contains("elapsed"));
    saw_skip = saw_skip || c.at("status") == "skipped";
  }
  CHECK(saw_skip);
}

TEST_CASE("a numerical failure inside a task becomes an error record") {
  const std::string text = R"({
    "algebras": {"P": [1, 2]},
    "traces": {"t": {"algebra": "P", "t": [0.5, 0.25]}},
    "tasks": [{"task": "unitary_search", "trace": "t"}]
  })";
  const auto r = run_text(text);
  CHECK_FALSE(r.passed());
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks[0].status == "error");
}

TEST_CASE("an expected error is a pass") {
  const std::string text = R"({
    "algebras": {"P": [1, 2]},
    "traces": {"t": {"algebra": "P", "t": [0.5, 0.25]}},
    "tasks": [{"task": "unitary_search", "trace": "t", "expect_error": "not the Markov trace"}]
  })";
  CHECK(run_text(text).passed());
}
