#pragma once

// Executes the tasks of a spec file and renders the report.

#include "watatani/spec_file.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wat {

inline constexpr const char* kToolVersion = "watatani 1.0.0";

struct RunOptions {
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  int max_tower = 2;
  int gns_cap = kDefaultGnsCap;
  int jobs = 1;
  bool timing = false;
};

struct CheckRecord {
  std::string task;
  std::string name;
  std::string anchor;  // the identity being checked
  std::string status;  // pass, fail, error, or skipped (hypothesis not met)
  double residual = -1.0;  // negative when not applicable
  std::string detail;
  double elapsed = 0.0;
};

struct Report {
  std::string version = kToolVersion;
  std::string digest;
  std::vector<CheckRecord> checks;
  bool passed() const;
};

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

/// Runs every task; a SchemaError in task parameters propagates.
Report run_spec(const SpecFile& spec, const std::string& spec_text, const RunOptions& opts);

std::string render_text(const Report& r, bool timing);
std::string render_structured(const Report& r, bool timing);

}  // namespace wat
