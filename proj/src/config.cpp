#include "nematic/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "nematic/errors.hpp"
#include "nematic/trace.hpp"

namespace nematic {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double as_double(const std::string& key, const Entry& e) {
  double v = 0.0;
  const char* end = e.value.data() + e.value.size();
  auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(e.line, key + " expects a number, got '" + e.value + "'");
  return v;
}

long long as_integer(const std::string& key, const Entry& e) {
  long long v = 0;
  const char* end = e.value.data() + e.value.size();
  auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(e.line, key + " expects an integer, got '" + e.value + "'");
  return v;
}

bool as_bool(const std::string& key, const Entry& e) {
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  fail(e.line, key + " expects true or false, got '" + e.value + "'");
}

const char* const kKeys[] = {
    "dim",          "n",           "dealias",          "padding_factor",   "rho",           "eta",
    "alpha",        "gamma",       "epsilon",          "tau",              "t_end",         "picard.tol",
    "picard.max_iter", "picard.damping", "picard.tau_shrink", "picard.tau_min", "picard.anderson",
    "picard.preconditioner", "ic.kind", "ic.seed",     "ic.amplitude",     "output.trace_path",
    "output.snapshot_dir", "output.snapshot_every", "output.full_state",
};

bool known(const std::string& key) {
  for (const char* k : kKeys)
    if (key == k) return true;
  return false;
}

}  // namespace

void RunConfig::validate() const {
  params.validate(true);
  picard.validate(params.tau);
  if (!(t_end > 0.0)) throw ConfigError("t_end > 0");
  if (output.snapshot_every < 0) throw ConfigError("output.snapshot_every >= 0");
  if (ic.kind == IcKind::defect_pair && grid.dim() != 2) throw ConfigError("ic.kind = defect_pair requires dim = 2");
  if (!(ic.amplitude >= 0.0)) throw ConfigError("ic.amplitude >= 0");
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Entry> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) fail(line_no, "missing key before '='");
    if (value.empty()) fail(line_no, "missing value for " + key);
    if (!known(key)) fail(line_no, "unknown key '" + key + "'");
    if (entries.count(key)) fail(line_no, "duplicate key '" + key + "'");
    entries.emplace(key, Entry{value, line_no});
  }

  auto get = [&](const char* key) -> const Entry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  for (const char* required : {"dim", "n", "tau", "t_end"})
    if (!get(required)) throw ConfigError(std::string("missing required key '") + required + "'");

  const int dim = static_cast<int>(as_integer("dim", *get("dim")));
  const int n = static_cast<int>(as_integer("n", *get("n")));
  Dealias dealias = Dealias::two_thirds;
  if (const Entry* e = get("dealias")) {
    try {
      dealias = parse_dealias(e->value);
    } catch (const ConfigError& err) {
      fail(e->line, err.what());
    }
  }
  std::optional<Padding> padding;
  if (const Entry* e = get("padding_factor")) {
    try {
      padding = parse_padding(e->value);
    } catch (const ConfigError& err) {
      fail(e->line, err.what());
    }
  }

  RunConfig cfg;
  cfg.grid = GridSpec(dim, n, dealias, padding);
  if (const Entry* e = get("rho")) cfg.params.rho = as_double("rho", *e);
  if (const Entry* e = get("eta")) cfg.params.eta = as_double("eta", *e);
  if (const Entry* e = get("alpha")) cfg.params.alpha = as_double("alpha", *e);
  if (const Entry* e = get("gamma")) cfg.params.gamma = as_double("gamma", *e);
  if (const Entry* e = get("epsilon")) cfg.params.epsilon = as_double("epsilon", *e);
  cfg.params.tau = as_double("tau", *get("tau"));
  cfg.t_end = as_double("t_end", *get("t_end"));

  cfg.picard.tau_min = cfg.params.tau * 1e-3;
  if (const Entry* e = get("picard.tol")) cfg.picard.tol = as_double("picard.tol", *e);
  if (const Entry* e = get("picard.max_iter")) cfg.picard.max_iter = static_cast<int>(as_integer("picard.max_iter", *e));
  if (const Entry* e = get("picard.damping")) cfg.picard.damping = as_double("picard.damping", *e);
  if (const Entry* e = get("picard.tau_shrink")) cfg.picard.tau_shrink = as_double("picard.tau_shrink", *e);
  if (const Entry* e = get("picard.tau_min")) cfg.picard.tau_min = as_double("picard.tau_min", *e);
  if (const Entry* e = get("picard.anderson"))
    cfg.picard.anderson_depth = static_cast<int>(as_integer("picard.anderson", *e));
  if (const Entry* e = get("picard.preconditioner")) {
    try {
      cfg.picard.preconditioner = parse_preconditioner(e->value);
    } catch (const ConfigError& err) {
      fail(e->line, err.what());
    }
  }

  if (const Entry* e = get("ic.kind")) {
    try {
      cfg.ic.kind = parse_ic_kind(e->value);
    } catch (const ConfigError& err) {
      fail(e->line, err.what());
    }
  }
  if (const Entry* e = get("ic.seed")) {
    const long long s = as_integer("ic.seed", *e);
    if (s < 0) fail(e->line, "ic.seed >= 0");
    cfg.ic.seed = static_cast<std::uint64_t>(s);
  }
  if (const Entry* e = get("ic.amplitude")) cfg.ic.amplitude = as_double("ic.amplitude", *e);

  if (const Entry* e = get("output.trace_path")) cfg.output.trace_path = e->value;
  if (const Entry* e = get("output.snapshot_dir")) cfg.output.snapshot_dir = e->value;
  if (const Entry* e = get("output.snapshot_every"))
    cfg.output.snapshot_every = static_cast<int>(as_integer("output.snapshot_every", *e));
  if (const Entry* e = get("output.full_state")) cfg.output.full_state = as_bool("output.full_state", *e);

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const RunConfig& cfg) {
  std::ostringstream o;
  const auto num = [](double v) { return format_number(v); };
  o << "dim = " << cfg.grid.dim() << "\n"
    << "n = " << cfg.grid.n() << "\n"
    << "dealias = " << to_string(cfg.grid.dealias()) << "\n"
    << "padding_factor = " << to_string(cfg.grid.padding()) << "\n"
    << "rho = " << num(cfg.params.rho) << "\n"
    << "eta = " << num(cfg.params.eta) << "\n"
    << "alpha = " << num(cfg.params.alpha) << "\n"
    << "gamma = " << num(cfg.params.gamma) << "\n"
    << "epsilon = " << num(cfg.params.epsilon) << "\n"
    << "tau = " << num(cfg.params.tau) << "\n"
    << "t_end = " << num(cfg.t_end) << "\n"
    << "picard.tol = " << num(cfg.picard.tol) << "\n"
    << "picard.max_iter = " << cfg.picard.max_iter << "\n"
    << "picard.damping = " << num(cfg.picard.damping) << "\n"
    << "picard.tau_shrink = " << num(cfg.picard.tau_shrink) << "\n"
    << "picard.tau_min = " << num(cfg.picard.tau_min) << "\n"
    << "picard.anderson = " << cfg.picard.anderson_depth << "\n"
    << "picard.preconditioner = " << to_string(cfg.picard.preconditioner) << "\n"
    << "ic.kind = " << to_string(cfg.ic.kind) << "\n"
    << "ic.seed = " << cfg.ic.seed << "\n"
    << "ic.amplitude = " << num(cfg.ic.amplitude) << "\n";
  if (!cfg.output.trace_path.empty()) o << "output.trace_path = " << cfg.output.trace_path << "\n";
  if (!cfg.output.snapshot_dir.empty()) o << "output.snapshot_dir = " << cfg.output.snapshot_dir << "\n";
  o << "output.snapshot_every = " << cfg.output.snapshot_every << "\n"
    << "output.full_state = " << (cfg.output.full_state ? "true" : "false") << "\n";
  return o.str();
}

}  // namespace nematic
