#ifndef NLT_HARNESS_HPP
#define NLT_HARNESS_HPP

#include <map>
#include <string>
#include <vector>

namespace nlt::harness {

// One verdict of a scenario check.  `comparison` is "<=" or ">=" and relates
// value to tolerance; lower-bound checks exist because some statements assert
// that a quantity is genuinely large (a nonzero local flux, say), not small.
struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::string comparison = "<=";
  bool pass = false;
  std::string note;
};

struct RunReport {
  std::string scenario;
  std::string model;
  long seed = 1;
  std::map<std::string, std::string> config_echo;
  std::vector<CheckResult> checks;
  std::vector<std::string> outputs;  // artifact names relative to the run directory
  std::string directory;             // where the artifacts were written
  double wall_seconds = 0.0;         // console only, never serialized

  bool pass() const;
};

// Timing is deliberately absent from the JSON so reruns are byte-identical.
std::string to_json_string(const RunReport& rep);
std::string to_text(const RunReport& rep);

// Scenario texts compiled into the binary; the scenarios/ directory in the
// source tree mirrors them byte for byte (a test enforces the sync).
const std::map<std::string, std::string>& bundled_scenarios();
std::vector<std::string> list_scenarios();

// First line of a bundled scenario, stripped of the leading '#'.
std::string scenario_summary(const std::string& name);

// NLT_OUTPUT_DIR env var when set, else "out".
std::string output_root();

// `ref` is a bundled scenario name or a config file path.  Runs the scenario,
// writes artifacts under <output_root()>/<name>/ and returns the report.
// seed_override >= 0 replaces the config's seed key.  Throws on config or
// validation errors; check failures are reported, not thrown.
RunReport run_scenario(const std::string& ref, long seed_override = -1);

// Parses and schema-checks without running; returns the resolved echo.
std::map<std::string, std::string> validate_scenario(const std::string& ref);

}  // namespace nlt::harness

#endif
