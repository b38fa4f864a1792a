#include <CLI11.hpp>

#include <iostream>

#include "nematic/config.hpp"
#include "nematic/errors.hpp"
#include "nematic/kernels.hpp"
#include "nematic/runner.hpp"
#include "nematic/snapshot.hpp"

using namespace nematic;

namespace {

int cmd_run(const std::string& path) {
  RunConfig cfg;
  try {
    cfg = load_config(path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return exit_io_error;
  }
  const RunSummary s = run_simulation(cfg, std::cout);
  if (s.status != exit_ok) std::cerr << "error: " << s.message << "\n";
  return s.status;
}

int cmd_check(const std::string& path) {
  try {
    const RunConfig cfg = load_config(path);
    std::cout << to_text(cfg);
    return exit_ok;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return exit_io_error;
  }
}

int cmd_inspect(const std::string& path) {
  try {
    const Snapshot s = read_snapshot_header(path);
    std::cout << "dim " << s.dim() << "\nn";
    for (auto v : s.n) std::cout << ' ' << v;
    std::cout << "\nfields " << s.fields.size() << "\n";
    for (const auto& f : s.fields) std::cout << "  " << f.name << " components=" << f.components << "\n";
    return exit_ok;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return exit_io_error;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nematic liquid crystal flow solver"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP worker count (0: runtime default)")->check(CLI::NonNegativeNumber);

  std::string run_path, check_path, inspect_path;
  auto* run = app.add_subcommand("run", "Run a simulation from a config file");
  run->add_option("config", run_path)->required();
  auto* check = app.add_subcommand("check", "Validate a config file");
  check->add_option("config", check_path)->required();
  auto* inspect = app.add_subcommand("inspect", "Print a snapshot header");
  inspect->add_option("snapshot", inspect_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : exit_config_error;
  }
  if (threads > 0) kernels::set_threads(threads);

  if (*run) return cmd_run(run_path);
  if (*check) return cmd_check(check_path);
  return cmd_inspect(inspect_path);
}
