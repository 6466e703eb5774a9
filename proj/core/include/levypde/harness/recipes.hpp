#pragma once

#include <string>
#include <vector>

#include "levypde/harness/config.hpp"

namespace levypde::harness {

// Named verification drills.  Each recipe runs its ensemble, writes a CSV
// trace plus a verdict JSON ({check, parameters, mean, se, budget, verdict})
// into out_dir, and reports PASS/FAIL per sub-check.
struct Verdict {
  std::string check;
  std::string parameters;
  double mean = 0.0;
  double se = 0.0;
  double budget = 0.0;
  bool pass = true;
};

struct RecipeResult {
  std::string name;
  std::vector<Verdict> verdicts;
  bool pass = true;
  std::vector<std::string> files;  // written, relative to out_dir
};

const std::vector<std::string>& recipe_names();

// Throws std::invalid_argument for unknown names.  workers <= 0 means one.
RecipeResult run_recipe(const std::string& name, const ExperimentConfig& cfg,
                        int workers, const std::string& out_dir);

// Verdict JSON writer shared by recipes and the report tool.
void write_verdicts(const std::string& out_dir, const RecipeResult& result);

}  // namespace levypde::harness
