#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "nematic/config.hpp"
#include "nematic/errors.hpp"
#include "nematic/initial_condition.hpp"
#include "nematic/runner.hpp"
#include "nematic/snapshot.hpp"
#include "nematic/trace.hpp"
#include "support.hpp"

using namespace nematic;
namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("nematic_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static inline int counter = 0;
};

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NEMATIC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST_CASE("minimal config gets documented defaults") {
  const RunConfig c = parse_config("dim = 2\nn = 16\ntau = 1e-3\nt_end = 0.01\n");
  CHECK(c.params.alpha == 0.5);
  CHECK(c.grid.dealias() == Dealias::two_thirds);
  CHECK(c.grid.padding() == Padding{3, 2});
  CHECK(c.picard.damping == 1.0);
  CHECK(c.picard.tau_min == doctest::Approx(1e-6));
  CHECK(c.ic.kind == IcKind::uniform_perturbed);
  CHECK(c.output.snapshot_every == 0);
}

TEST_CASE("config parsing: comments, dotted keys, exact padding") {
  const RunConfig c = parse_config(
      "# header comment\n"
      "dim = 3   # trailing\n"
      "n = 8\n"
      "dealias = exact\n"
      "tau = 2e-3\n"
      "t_end = 1e-2\n"
      "picard.tol = 1e-9\n"
      "picard.preconditioner = helmholtz\n"
      "ic.kind = random_smooth\n"
      "ic.seed = 42\n"
      "output.full_state = true\n");
  CHECK(c.grid.padding() == Padding{3, 1});
  CHECK(c.grid.dim() == 3);
  CHECK(c.picard.tol == 1e-9);
  CHECK(c.picard.preconditioner == Preconditioner::helmholtz);
  CHECK(c.ic.seed == 42);
  CHECK(c.output.full_state);
  // canonical text parses back to the same config
  const RunConfig again = parse_config(to_text(c));
  CHECK(to_text(again) == to_text(c));
}

TEST_CASE("config errors") {
  CHECK(config_error("dim = 2\nn = 16\ntau = 1e-3\nt_end = 1\nalpha = 1.5\n") == "alpha ∈ [0,1]");
  CHECK(config_error("dim = 2\nn = 16\ntau = 1e-3\nt_end = 1\ncolour = red\n") == "line 5: unknown key 'colour'");
  CHECK(config_error("dim = 2\nn = 16\ntau = 1e-3\n") == "missing required key 't_end'");
  CHECK(config_error("dim = 2\nn 16\n") == "line 2: expected 'key = value'");
  CHECK(config_error("dim = 2\nn = sixteen\ntau = 1\nt_end = 1\n").find("line 2:") == 0);
  CHECK(config_error("dim = 2\ndim = 3\n") == "line 2: duplicate key 'dim'");
  CHECK(config_error("dim = 2\nn = 16\ntau = 1e-3\nt_end = 0\n") == "t_end > 0");
  CHECK(config_error("dim = 2\nn = 16\ntau = 1e-3\nt_end = 1\ndealias = exact\npadding_factor = 3/2\n").find("padding") !=
        std::string::npos);
  CHECK(config_error("dim = 3\nn = 8\ntau = 1e-3\nt_end = 1\nic.kind = defect_pair\n").find("defect_pair") !=
        std::string::npos);
}

TEST_CASE("initial conditions") {
  const GridSpec g(2, 16, Dealias::exact);
  const StepState ground = initial_condition(IcKind::uniform_perturbed, g, 3, 0.0);
  for (std::size_t p = 0; p < ground.d.points(); ++p) {
    CHECK(ground.d(0, p) == 1.0);
    CHECK(ground.d(1, p) == 0.0);
  }
  CHECK(testing::max_abs(ground.u) == 0.0);

  const StepState s = initial_condition(IcKind::uniform_perturbed, g, 3, 0.2);
  const LengthStats len = director_length_stats(s.d);
  CHECK(len.min >= 0.8 - 1e-14);
  CHECK(len.max <= 1.2 + 1e-14);

  for (IcKind kind : {IcKind::uniform_perturbed, IcKind::random_smooth, IcKind::defect_pair}) {
    const StepState a = initial_condition(kind, g, 9, 0.3);
    const StepState b = initial_condition(kind, g, 9, 0.3);
    CHECK(a.d.data() == b.d.data());
    CHECK(a.u.data() == b.u.data());
    CHECK(testing::max_abs(divergence(a.u)) <= 1e-12);
    CHECK(testing::max_abs_diff(project_resolved(a.d), a.d) <= 1e-13);
  }
  CHECK_THROWS_AS(initial_condition(IcKind::defect_pair, GridSpec(3, 8), 0, 0.1), ConfigError);
}

TEST_CASE("shortest round-trip number formatting") {
  std::mt19937_64 rng(50);
  std::normal_distribution<double> normal(0.0, 1e3);
  for (int i = 0; i < 200; ++i) {
    const double x = normal(rng);
    const std::string s = format_number(x);
    double y = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), y);
    CHECK(y == x);
  }
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-11) == "1e-11");
}

TEST_CASE("snapshot encoding is bit-exact and round-trips") {
  std::mt19937_64 rng(51);
  const GridSpec g(2, 4);
  const StepState s{testing::noise(g, 2, rng), testing::noise(g, 2, rng), 0.0};
  const Snapshot snap = snapshot_of(s);
  const auto bytes = encode_snapshot(snap);
  // header: magic, dim, 2 x n, field count, ("d", 2), ("u", 2)
  const std::size_t header = 6 + 4 + 8 + 4 + (4 + 1 + 4) * 2;
  CHECK(bytes.size() == header + 2 * 2 * 16 * 8);
  CHECK(std::string(bytes.begin(), bytes.begin() + 6) == "NEMF1\n");
  CHECK(bytes[6] == 2);
  CHECK(bytes[10] == 4);
  const Snapshot back = decode_snapshot(bytes);
  CHECK(back.find("d")->data == s.d.data());
  CHECK(back.find("u")->data == s.u.data());
  CHECK(encode_snapshot(back) == bytes);

  auto broken = bytes;
  broken[0] = 'X';
  CHECK_THROWS_AS(decode_snapshot(broken), IoError);
  broken = bytes;
  broken.pop_back();
  CHECK_THROWS_AS(decode_snapshot(broken), IoError);
  CHECK_THROWS_AS(read_snapshot("/nonexistent/dir/x.nemf"), IoError);
}

TEST_CASE("run writes one trace row per step") {
  TempDir dir;
  RunConfig c = parse_config("dim = 2\nn = 8\ndealias = exact\ntau = 1e-3\nt_end = 3e-3\noutput.snapshot_every = 1\n");
  c.output.trace_path = (dir.path / "trace.csv").string();
  c.output.snapshot_dir = (dir.path / "snaps").string();
  std::ostringstream log;
  const RunSummary s = run_simulation(c, log);
  CHECK(s.status == exit_ok);
  CHECK(s.steps == 3);
  const std::string text = read_text(dir.path / "trace.csv");
  std::istringstream lines(text);
  std::string line;
  int count = 0;
  std::getline(lines, line);
  CHECK(line == trace_header());
  while (std::getline(lines, line)) ++count;
  CHECK(count == 3);
  CHECK(fs::exists(dir.path / "snaps" / snapshot_name(3)));
  CHECK(snapshot_name(10) == "snap_000010.nemf");
}

TEST_CASE("equilibrium run keeps zero energy") {
  RunConfig c = parse_config("dim = 2\nn = 8\ndealias = exact\ntau = 1e-3\nt_end = 5e-3\nic.amplitude = 0\n");
  double last = 1.0;
  bool inequality = true;
  std::ostringstream log;
  run_simulation(c, log, [&](const StepState&, const StepResult& r, const TraceRow&) {
    last = r.ledger.current.total;
    inequality = inequality && check_energy_inequality(r.ledger, 1e-12).pass;
  });
  CHECK(std::abs(last) <= 1e-12);
  CHECK(inequality);
}

TEST_CASE("solver failure keeps partial outputs and reports status 3") {
  TempDir dir;
  RunConfig c = parse_config(
      "dim = 2\nn = 16\ndealias = exact\ntau = 1e-2\nt_end = 0.1\nic.kind = random_smooth\nic.amplitude = 0.5\n"
      "picard.max_iter = 2\npicard.tol = 1e-13\npicard.tau_min = 5e-3\n");
  c.output.trace_path = (dir.path / "trace.csv").string();
  std::ostringstream log;
  const RunSummary s = run_simulation(c, log);
  CHECK(s.status == exit_solver_failure);
  CHECK(read_text(dir.path / "trace.csv").rfind(trace_header(), 0) == 0);
}

TEST_CASE("command-line exit codes") {
  TempDir dir;
  const fs::path good = dir.path / "good.cfg";
  const fs::path bad = dir.path / "bad.cfg";
  std::ofstream(good) << "dim = 2\nn = 8\ndealias = exact\ntau = 1e-3\nt_end = 2e-3\noutput.snapshot_every = 1\n"
                      << "output.snapshot_dir = " << (dir.path / "snaps").string() << "\n";
  std::ofstream(bad) << "dim = 2\nn = 8\ntau = 1e-3\nt_end = 1\nalpha = 2\n";
  CHECK(run_cli("check " + good.string()) == 0);
  CHECK(run_cli("check " + bad.string()) == 2);
  CHECK(run_cli("run " + bad.string()) == 2);
  CHECK(run_cli("run " + (dir.path / "missing.cfg").string()) == 4);
  CHECK(run_cli("--threads 1 run " + good.string()) == 0);
  CHECK(run_cli("inspect " + (dir.path / "snaps" / snapshot_name(2)).string()) == 0);
  CHECK(run_cli("inspect " + bad.string()) == 4);
}
