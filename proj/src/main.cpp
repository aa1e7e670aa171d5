#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "nlt/harness.hpp"

namespace {

int cmd_run(const std::string& ref) {
  const nlt::harness::RunReport rep = nlt::harness::run_scenario(ref);
  std::printf("%s", nlt::harness::to_text(rep).c_str());
  std::printf("  wall time: %.3f s\n", rep.wall_seconds);
  return rep.pass() ? 0 : 1;
}

int cmd_validate(const std::string& ref) {
  const auto echo = nlt::harness::validate_scenario(ref);
  std::printf("valid: %s (%zu keys)\n", ref.c_str(), echo.size());
  for (const auto& [k, v] : echo) std::printf("  %s = %s\n", k.c_str(), v.c_str());
  return 0;
}

int cmd_list() {
  const auto names = nlt::harness::list_scenarios();
  std::size_t width = 0;
  for (const auto& n : names) width = std::max(width, n.size());
  for (const auto& n : names)
    std::printf("%-*s  %s\n", int(width), n.c_str(),
                nlt::harness::scenario_summary(n).c_str());
  return 0;
}

int cmd_batch(const std::string& dir, int jobs, long seed) {
  std::vector<std::string> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".nlt")
      paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw std::runtime_error("no .nlt scenarios in " + dir);

  std::vector<nlt::harness::RunReport> reports(paths.size());
  std::vector<std::exception_ptr> errors(paths.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < paths.size(); i = next.fetch_add(1)) {
      try {
        reports[i] = nlt::harness::run_scenario(paths[i], seed);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, int(paths.size())));
  std::vector<std::thread> pool;
  for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < paths.size(); ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
  int failed = 0;
  for (const auto& rep : reports) {
    std::printf("%s", nlt::harness::to_text(rep).c_str());
    if (!rep.pass()) ++failed;
  }
  std::printf("batch: %zu scenarios, %d failed\n", reports.size(), failed);
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scenario runner for non-local material dynamics"};
  app.require_subcommand(1);

  std::string run_ref;
  CLI::App* run = app.add_subcommand("run", "run one scenario (bundled name or config path)");
  run->add_option("config", run_ref, "bundled scenario name or path to a .nlt config")
      ->required();

  std::string val_ref;
  CLI::App* validate =
      app.add_subcommand("validate", "parse and check a config without running it");
  validate->add_option("config", val_ref, "bundled scenario name or path to a .nlt config")
      ->required();

  app.add_subcommand("list", "list bundled scenarios");

  std::string batch_dir;
  int jobs = 1;
  long seed = -1;
  CLI::App* batch = app.add_subcommand("batch", "run every .nlt scenario in a directory");
  batch->add_option("dir", batch_dir, "directory holding .nlt configs")->required();
  batch->add_option("--jobs", jobs, "concurrent scenario workers")->check(CLI::PositiveNumber);
  batch->add_option("--seed", seed, "override every scenario's seed")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("run")) return cmd_run(run_ref);
    if (app.got_subcommand("validate")) return cmd_validate(val_ref);
    if (app.got_subcommand("list")) return cmd_list();
    return cmd_batch(batch_dir, jobs, seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
