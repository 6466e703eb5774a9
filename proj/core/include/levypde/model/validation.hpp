#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levypde/model/problem_spec.hpp"

namespace levypde::model {

// Deterministic assumption audit.  Probes are drawn from the counter RNG so
// the same seed always checks the same points; each entry reports the worst
// violation found and where it happened.
struct AssumptionCheck {
  std::string id;       // "A1" .. "A7"
  std::string what;     // human-readable statement
  bool pass = true;
  double worst = 0.0;   // most positive violation (<= tol means pass)
  double at_u = 0.0;    // probe location of the worst violation
  double at_v = 0.0;    // second probe (pairwise checks) or mark
  std::string note;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;
  bool all_pass = true;
  std::uint64_t seed = 0;
  int probe_count = 0;

  const AssumptionCheck* find(const std::string& id) const;
  std::string to_json() const;
};

// probe_count >= 100 enforced; throws std::invalid_argument on nonsense
// specs (negative jump rate, empty mark interval, non-finite coefficients).
AssumptionReport validate_assumptions(const ProblemSpec& spec,
                                      int probe_count = 256,
                                      std::uint64_t seed = 0);

}  // namespace levypde::model
