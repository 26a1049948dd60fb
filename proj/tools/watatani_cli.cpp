#include "watatani/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"Verify index-theoretic properties of finite-dimensional C*-algebra inclusions"};
  std::string spec_path;
  std::string format = "text";
  std::string output;
  wat::RunOptions opts;
  app.add_option("spec", spec_path, "JSON spec file")->required();
  app.add_option("--tolerance", opts.tolerance, "residual tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", opts.seed, "seed for randomized searches")->capture_default_str();
  app.add_option("--max-tower", opts.max_tower, "highest tower level built by tower and depth tasks")
      ->capture_default_str()
      ->check(CLI::Range(1, 16));
  app.add_option("--gns-cap", opts.gns_cap, "largest GNS dimension allowed in basic constructions")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "report format")->capture_default_str()->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--jobs", opts.jobs, "tasks run in parallel")->capture_default_str()->check(CLI::Range(1, 256));
  app.add_flag("--timing", opts.timing, "include elapsed seconds per check");
  app.add_option("-o,--output", output, "write the report to a file instead of stdout");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::ifstream in(spec_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << spec_path << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  wat::Report report;
  try {
    const wat::SpecFile spec = wat::parse_spec(text);
    report = wat::run_spec(spec, text, opts);
  } catch (const wat::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  }
  const std::string rendered =
      format == "structured" ? wat::render_structured(report, opts.timing) : wat::render_text(report, opts.timing);
  if (output.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << output << "\n";
      return 2;
    }
    out << rendered;
  }
  return report.passed() ? 0 : 1;
}
