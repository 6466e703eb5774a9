#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "levypde/model/problem_spec.hpp"
#include "levypde/solver/grid.hpp"

namespace levypde::harness {

// Flat key=value experiment configuration with dotted key prefixes
// (problem., grid., solver., noise., ensemble., check., output.).  Lines
// starting with '#' are comments.  emit() writes keys in sorted order with
// 17-significant-digit numbers, and parse(emit(c)) == c.
class ExperimentConfig {
 public:
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig parse_file(const std::string& path);
  std::string emit() const;

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double v);
  void set_int(const std::string& key, long long v);

  std::string get_string(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key, double dflt) const;
  long long get_int(const std::string& key, long long dflt) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& dflt) const;

  // Overrides from environment variables: PREFIX + key with '.' spelled
  // '__' (e.g. LEVYPDE_solver__eps=0.1).  Returns the keys overridden.
  std::vector<std::string> apply_env_overrides(
      const std::string& prefix = "LEVYPDE_");

  // FNV-1a 64 of the canonical emit; stable across runs and platforms.
  std::uint64_t hash() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

// Builders from the config keys (catalog names + scalar parameters).
model::ProblemSpec build_problem(const ExperimentConfig& cfg);
solver::Grid build_grid(const ExperimentConfig& cfg);

// Second initial data for paired checks (problem.u0b_* keys; falls back to
// a shifted copy of u0 when absent).
model::InitialData build_initial_b(const ExperimentConfig& cfg);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace levypde::harness
