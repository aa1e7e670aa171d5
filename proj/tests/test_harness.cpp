#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "nlt/harness.hpp"

using namespace nlt;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(bool(in));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void use_output_dir(const std::string& dir) {
  setenv("NLT_OUTPUT_DIR", dir.c_str(), 1);
  std::filesystem::remove_all(dir);
}

const harness::CheckResult& find_check(const harness::RunReport& rep,
                                       const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return c;
  REQUIRE_MESSAGE(false, "check not found: ", name);
  std::abort();
}

}  // namespace

TEST_CASE("bundled scenarios are listed with one-line summaries") {
  const auto names = harness::list_scenarios();
  CHECK(names.size() >= 10);
  for (const auto& n : names) {
    CAPTURE(n);
    CHECK(!harness::scenario_summary(n).empty());
    CHECK_NOTHROW(harness::validate_scenario(n));
  }
}

TEST_CASE("bundled texts mirror the scenarios directory byte for byte") {
  const std::filesystem::path dir(NLT_SCENARIO_DIR);
  const auto& bundle = harness::bundled_scenarios();
  std::size_t on_disk = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".nlt") continue;
    ++on_disk;
    const std::string name = entry.path().stem().string();
    CAPTURE(name);
    REQUIRE(bundle.count(name) == 1);
    CHECK(bundle.at(name) == slurp(entry.path().string()));
  }
  CHECK(on_disk == bundle.size());
}

TEST_CASE("validation rejects malformed scenarios before running") {
  namespace fs = std::filesystem;
  fs::create_directories("tcfg");
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream(path) << text;
  };

  write("tcfg/unknown.nlt",
        "model = fourier\ngrid.n = 16\ngrid.length = 6.0\nkappa = 1.0\nc_heat = 1.0\n"
        "init = uniform\ninit.theta0 = 1.0\ndt = 0.0001\nsteps = 5\nwhirl = 3\n");
  CHECK_THROWS_WITH_AS(harness::validate_scenario("tcfg/unknown.nlt"),
                       doctest::Contains("unknown keys: whirl (line 10)"),
                       std::runtime_error);

  write("tcfg/empty.nlt", "# nothing here\n");
  CHECK_THROWS_WITH_AS(harness::validate_scenario("tcfg/empty.nlt"),
                       doctest::Contains("missing required keys: model, grid.n, grid.length, steps"),
                       std::runtime_error);

  write("tcfg/both_dt.nlt",
        "model = fourier\ngrid.n = 16\ngrid.length = 6.0\nkappa = 1.0\nc_heat = 1.0\n"
        "init = uniform\ninit.theta0 = 1.0\ndt = 0.0001\ndt.per_period = 64\nsteps = 5\n");
  CHECK_THROWS_WITH_AS(harness::validate_scenario("tcfg/both_dt.nlt"),
                       doctest::Contains("dt.per_period is only meaningful"),
                       std::runtime_error);

  write("tcfg/badmodel.nlt", "model = warp\ngrid.n = 16\ngrid.length = 6.0\nsteps = 5\n");
  CHECK_THROWS_WITH_AS(harness::validate_scenario("tcfg/badmodel.nlt"),
                       doctest::Contains("value of 'model' must be one of"),
                       std::runtime_error);
}

TEST_CASE("uniform-flux decay scenario passes with the closed-form trace") {
  use_output_dir("tout_decay");
  const harness::RunReport rep = harness::run_scenario("gk_uniform_decay");
  CHECK(rep.model == "gk");
  CHECK(rep.pass());
  CHECK(find_check(rep, "decay").pass);
  CHECK(find_check(rep, "second_law").pass);

  const auto j = nlohmann::json::parse(slurp(rep.directory + "/report.json"));
  CHECK(j.at("scenario") == "gk_uniform_decay");
  CHECK(j.at("pass") == true);
  CHECK(j.at("config").at("tau_r") == "0.4");
  const std::string series = slurp(rep.directory + "/series.csv");
  CHECK(series.rfind("t,energy,entropy,q_sq_int,second_law_min,decay_rel_err", 0) == 0);
}

TEST_CASE("negative flux-gradient coefficient is caught by the second-law check") {
  use_output_dir("tout_falsify");
  const harness::RunReport rep = harness::run_scenario("gk_falsify_tau_n");
  CHECK(!rep.pass());
  const auto& c = find_check(rep, "second_law");
  CHECK(!c.pass);
  CHECK(c.value < -1e-3);
}

TEST_CASE("sign-flipped kernel is caught by the flux-orientation check") {
  use_output_dir("tout_kernel");
  const harness::RunReport rep = harness::run_scenario("memheat_falsify_kernel");
  CHECK(!rep.pass());
  CHECK(find_check(rep, "steady_flux").pass);
  CHECK(!find_check(rep, "flux_orientation").pass);
}

TEST_CASE("steady history scenario matches the kernel-moment oracle") {
  use_output_dir("tout_memheat");
  const harness::RunReport rep = harness::run_scenario("memheat_steady");
  CHECK(rep.pass());
  CHECK(find_check(rep, "steady_flux").value <= 5e-3);
  CHECK(find_check(rep, "action_generic_equiv").value <= 1e-12);
  CHECK(std::filesystem::exists(rep.directory + "/history.csv"));
}

TEST_CASE("conductor control scenario closes every balance at round-off") {
  use_output_dir("tout_fourier");
  const harness::RunReport rep = harness::run_scenario("fourier_control");
  CHECK(rep.pass());
  CHECK(find_check(rep, "conservation").value <= 1e-12);
  CHECK(find_check(rep, "virtual_balance").value <= 1e-12);
}

TEST_CASE("bending cycle scenario closes and satisfies the cycle statements") {
  use_output_dir("tout_plate_cycle");
  const harness::RunReport rep = harness::run_scenario("plate_cycle");
  CHECK(rep.pass());
  CHECK(find_check(rep, "cycle_closure").value <= 1e-6);
  CHECK(std::filesystem::exists(rep.directory + "/record.json"));
  const auto j = nlohmann::json::parse(slurp(rep.directory + "/record.json"));
  CHECK(j.at("model") == "plate");
  CHECK(j.at("channels").contains("first_law_rate"));
}

TEST_CASE("reruns with a fixed seed are byte-identical") {
  use_output_dir("tout_rerun_a");
  const harness::RunReport a = harness::run_scenario("fourier_control");
  const std::string report_a = slurp(a.directory + "/report.json");
  const std::string series_a = slurp(a.directory + "/series.csv");

  use_output_dir("tout_rerun_b");
  const harness::RunReport b = harness::run_scenario("fourier_control");
  CHECK(report_a == slurp(b.directory + "/report.json"));
  CHECK(series_a == slurp(b.directory + "/series.csv"));
}

TEST_CASE("seed override rewrites the echoed seed and stays deterministic") {
  use_output_dir("tout_seed");
  const harness::RunReport rep = harness::run_scenario("gk_uniform_decay", 42);
  CHECK(rep.seed == 42);
  const auto j = nlohmann::json::parse(slurp(rep.directory + "/report.json"));
  CHECK(j.at("seed") == 42);
  CHECK(j.at("config").at("seed") == "42");
}

TEST_CASE("path references run like bundled names") {
  use_output_dir("tout_path");
  const harness::RunReport rep =
      harness::run_scenario(std::string(NLT_SCENARIO_DIR) + "/gk_uniform_decay.nlt");
  CHECK(rep.scenario == "gk_uniform_decay");
  CHECK(rep.pass());
}
