#include "levypde/harness/config.hpp"

#include <array>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "levypde/solver/snapshot_io.hpp"

extern char** environ;

namespace levypde::harness {

namespace {

constexpr std::array<const char*, 7> kSections = {
    "problem.", "grid.", "solver.", "noise.", "ensemble.", "check.", "output."};

bool known_section(const std::string& key) {
  for (const char* s : kSections) {
    const std::string p(s);
    if (key.size() > p.size() && key.compare(0, p.size(), p) == 0) return true;
  }
  return false;
}

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw std::invalid_argument("config key '" + key + "': '" + value +
                                "' is not a number");
  return v;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value, got '" + t + "'");
    cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string ExperimentConfig::emit() const {
  std::string out;
  for (const auto& [k, v] : kv_) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

bool ExperimentConfig::has(const std::string& key) const {
  return kv_.count(key) != 0;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (!known_section(key))
    throw std::invalid_argument(
        "config key '" + key +
        "' lacks a known section prefix (problem. grid. solver. noise. "
        "ensemble. check. output.)");
  kv_[key] = value;
}

void ExperimentConfig::set_double(const std::string& key, double v) {
  set(key, solver::format_double(v));
}

void ExperimentConfig::set_int(const std::string& key, long long v) {
  set(key, std::to_string(v));
}

std::string ExperimentConfig::get_string(const std::string& key,
                                         const std::string& dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : it->second;
}

double ExperimentConfig::get_double(const std::string& key,
                                    double dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  return parse_double(key, it->second);
}

long long ExperimentConfig::get_int(const std::string& key,
                                    long long dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  char* end = nullptr;
  const long long v = std::strtoll(it->second.c_str(), &end, 10);
  if (end == it->second.c_str() || *end != '\0')
    throw std::invalid_argument("config key '" + key + "': '" + it->second +
                                "' is not an integer");
  return v;
}

std::vector<double> ExperimentConfig::get_list(
    const std::string& key, const std::vector<double>& dflt) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return dflt;
  std::vector<double> out;
  std::string item;
  std::istringstream in(it->second);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw std::invalid_argument("config key '" + key + "': empty list item");
    out.push_back(parse_double(key, item));
  }
  if (out.empty())
    throw std::invalid_argument("config key '" + key + "': empty list");
  return out;
}

std::vector<std::string> ExperimentConfig::apply_env_overrides(
    const std::string& prefix) {
  std::vector<std::string> applied;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    const std::string entry(*e);
    const size_t eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string name = entry.substr(0, eq);
    if (name.size() <= prefix.size() ||
        name.compare(0, prefix.size(), prefix) != 0)
      continue;
    std::string key = name.substr(prefix.size());
    size_t pos = 0;
    while ((pos = key.find("__", pos)) != std::string::npos) {
      key.replace(pos, 2, ".");
      pos += 1;
    }
    set(key, entry.substr(eq + 1));
    applied.push_back(key);
  }
  return applied;
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(emit()); }

model::ProblemSpec build_problem(const ExperimentConfig& cfg) {
  auto flux = model::make_flux(
      cfg.get_string("problem.flux", "zero"),
      cfg.get_double("problem.flux_scale", 1.0),
      {cfg.get_double("problem.flux_speed_x", 1.0),
       cfg.get_double("problem.flux_speed_y", 0.0)});
  auto phi = model::make_diffusion(cfg.get_string("problem.phi", "zero"),
                                   cfg.get_double("problem.phi_scale", 1.0),
                                   cfg.get_double("problem.phi_p", 2.0));
  auto sigma = model::make_sigma(cfg.get_string("problem.sigma", "zero"),
                                 cfg.get_double("problem.sigma_amp", 0.0),
                                 cfg.get_double("problem.sigma_uscale", 1.0));
  auto jump = model::make_jump(cfg.get_string("problem.jump", "zero"),
                               cfg.get_double("problem.jump_amp", 0.0),
                               cfg.get_double("problem.jump_uscale", 1.0));
  auto profile =
      model::make_jump_profile(cfg.get_string("problem.jump_profile", "abs-capped"));
  auto mark = model::make_mark_measure(cfg.get_double("noise.rate", 0.0),
                                       cfg.get_double("noise.z_lo", -1.0),
                                       cfg.get_double("noise.z_hi", 1.0),
                                       cfg.get_string("noise.density", "uniform"));
  auto u0 = model::make_initial_data(cfg.get_string("problem.u0", "box"),
                                     cfg.get_double("problem.u0_amp", 1.0),
                                     cfg.get_double("problem.u0_width", 1.0),
                                     cfg.get_double("problem.u0_center", 0.0));
  model::ProblemSpecOptions opt;
  opt.range_bound = cfg.get_double("problem.range_bound", 0.0);
  opt.state_bound = cfg.get_double("problem.state_bound", 0.0);
  const int dim = static_cast<int>(cfg.get_int("grid.dim", 1));
  return model::make_problem_spec(std::move(flux), std::move(phi),
                                  std::move(sigma), std::move(jump),
                                  std::move(profile), std::move(mark),
                                  std::move(u0), dim, opt);
}

solver::Grid build_grid(const ExperimentConfig& cfg) {
  solver::Grid g;
  g.dim = static_cast<int>(cfg.get_int("grid.dim", 1));
  g.n = static_cast<int>(cfg.get_int("grid.n", 128));
  g.half_width = cfg.get_double("grid.half_width", 2.0);
  if (g.dim != 1 && g.dim != 2)
    throw std::invalid_argument("grid.dim must be 1 or 2");
  if (g.n < 4) throw std::invalid_argument("grid.n must be >= 4");
  if (!(g.half_width > 0.0))
    throw std::invalid_argument("grid.half_width must be > 0");
  return g;
}

model::InitialData build_initial_b(const ExperimentConfig& cfg) {
  if (cfg.has("problem.u0b")) {
    return model::make_initial_data(cfg.get_string("problem.u0b", "box"),
                                    cfg.get_double("problem.u0b_amp", 1.0),
                                    cfg.get_double("problem.u0b_width", 1.0),
                                    cfg.get_double("problem.u0b_center", 0.0));
  }
  // Default paired data: the same profile shifted by half its width.
  const double width = cfg.get_double("problem.u0_width", 1.0);
  return model::make_initial_data(
      cfg.get_string("problem.u0", "box"),
      cfg.get_double("problem.u0_amp", 1.0), width,
      cfg.get_double("problem.u0_center", 0.0) + 0.5 * width);
}

}  // namespace levypde::harness
