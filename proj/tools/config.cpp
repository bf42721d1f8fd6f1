#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rieszlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<KeySpec>& key_registry() {
  static const std::vector<KeySpec> keys = {
      {"seed", "seed", "1", "master seed"},
      {"model.d", "d", "2", "dimension"},
      {"model.s", "s", "0", "Riesz exponent, 0 for the log kernel"},
      {"model.c2", "c2", "0.5", "V = c2 |x|^2 + c4 |x|^4"},
      {"model.c4", "c4", "0", "quartic coefficient of V"},
      {"model.beta", "beta", "2", "inverse temperature, number or formula in N"},
      {"model.N", "N", "64", "number of points"},
      {"output.dir", "out", "", "output directory (default $RIESZLAB_OUT, then .)"},
      {"output.prefix", "prefix", "", "artifact file prefix (default: the subcommand)"},
      {"task.input", "input", "", "configuration CSV to start from"},
      {"task.spread", "spread", "1.5", "iid start points fill spread x the droplet radius"},
      {"task.splitting", "splitting", "false", "energy: report the splitting identity", true},
      {"task.method", "method", "analytic", "eqmeasure: analytic | obstacle"},
      {"task.grid", "grid", "128", "nodes per axis (eqmeasure, thermal, jellium scan)"},
      {"task.half_width", "half-width", "2", "box half width for gridded solvers"},
      {"task.theta", "theta", "100", "thermal: theta"},
      {"task.order", "order", "1", "thermal: expansion iterate compared against"},
      {"task.interior", "interior", "0.2", "thermal: radius of the comparison region"},
      {"task.steps", "steps", "10000", "sample: chain length"},
      {"task.step", "step", "0", "sample: step size, 0 for the default"},
      {"task.observe_every", "observe-every", "100", "sample: energy trace stride"},
      {"task.M", "M", "1", "number of samples"},
      {"task.flow", "flow", "gradient", "dynamics: gradient | conservative"},
      {"task.T", "T", "1", "dynamics: final time"},
      {"task.h", "dt", "0.001", "dynamics: time step"},
      {"task.snapshot_every", "snapshot-every", "10", "dynamics: snapshot stride"},
      {"task.noise", "noise", "false", "dynamics: add Langevin noise", true},
      {"task.lattice", "lattice", "cubic", "jellium: cubic | triangular"},
      {"task.x", "x", "0.25", "jellium green: evaluation point, comma separated"},
      {"task.im_max", "im-max", "1.5", "jellium scan: upper limit of Im tau"},
      {"task.sampler", "sampler", "ginibre", "stats: ginibre | hermite | iid | poisson"},
      {"task.center", "center", "0", "stats: center, comma separated (one value is broadcast)"},
      {"task.scale", "scale", "0.5", "stats: bump scale"},
      {"task.radius", "radius", "0.3", "stats discrepancy: ball radius"},
      {"task.radii", "radii", "0.12:0.48:0.02", "stats numbervar: lo:hi:step"},
      {"task.window", "window", "4", "stats localfield: blown-up window side"},
  };
  return keys;
}

Config::Config() {
  for (const auto& k : key_registry()) values_[k.key] = k.value;
}

void Config::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown key '" + key + "'");
  it->second = value;
}

void Config::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::load_text(const std::string& text, const std::string& origin) {
  std::istringstream is(text);
  std::set<std::string> seen;
  int lineno = 0;
  for (std::string line; std::getline(is, line);) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) throw ConfigError(where + ": repeated key '" + key + "'");
    try {
      set(key, trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  load_text(ss.str(), path);
}

const std::string& Config::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown key '" + key + "'");
  return it->second;
}

double Config::real(const std::string& key) const {
  const std::string& v = str(key);
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError(key + ": not a number: '" + v + "'");
  return x;
}

double Config::positive(const std::string& key) const {
  const double x = real(key);
  if (!(x > 0.0)) throw ConfigError(key + ": must be positive");
  return x;
}

long Config::integer(const std::string& key) const {
  const std::string& v = str(key);
  long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key + ": not an integer: '" + v + "'");
  return x;
}

std::size_t Config::count(const std::string& key, std::size_t min) const {
  const long x = integer(key);
  if (x < static_cast<long>(min)) throw ConfigError(key + ": must be at least " + std::to_string(min));
  return static_cast<std::size_t>(x);
}

std::uint64_t Config::seed() const {
  const std::string& v = str("seed");
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError("seed: not an unsigned integer: '" + v + "'");
  return x;
}

bool Config::flag(const std::string& key) const {
  const std::string& v = str(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<double> Config::reals(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(str(key));
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    double x = 0.0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (item.empty() || ec != std::errc() || p != item.data() + item.size())
      throw ConfigError(key + ": bad list entry '" + item + "'");
    out.push_back(x);
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

}  // namespace rieszlab
