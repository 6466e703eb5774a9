#pragma once

#include <cstdint>
#include <vector>

#include "levypde/model/problem_spec.hpp"
#include "levypde/solver/scheme.hpp"

namespace levypde::functionals {

// Discrete truncation-defect measure of one path,
//   d mu = (K/delta) 1{l < |u| < l+delta} (|D_h G(u)|^2 + eps |D_h u|^2
//                                          + sigma(u)^2 / 2) dx dt,
// accumulated over the stored steps (left endpoints).  The histogram keeps
// only the cells inside the band; total_mass is dx^d * dt * sum(density) in
// entry order, by construction.
struct DefectEntry {
  std::int64_t step = 0;
  std::int64_t cell = 0;
  double density = 0.0;
};

struct DefectMeasure {
  double l = 0.0, delta = 0.0, weight = 0.0;  // weight = K
  double eps = 0.0;
  double dt = 0.0;
  double total_mass = 0.0;
  std::vector<DefectEntry> entries;
};

// Per-cell band density at one step; shared kernel of the path version and
// the streaming accumulator.
double defect_density_at(const model::ProblemSpec& spec,
                         const solver::Grid& grid,
                         std::span<const double> u, std::int64_t cell,
                         double eps, double l, double delta, double weight);

// Requires a PathSample stored every step (steps[j] == j); throws otherwise.
DefectMeasure defect_measure(const model::ProblemSpec& spec,
                             const solver::PathSample& path, double l,
                             double delta, double weight);

// Streaming twin for ensemble runs: feed StepRecords, read off the mass.
class DefectAccumulator {
 public:
  DefectAccumulator(const model::ProblemSpec& spec, const solver::Grid& grid,
                    double eps, double l, double delta, double weight,
                    bool keep_entries = false);
  void on_step(const solver::StepRecord& rec);
  double total_mass() const { return total_mass_; }
  const std::vector<DefectEntry>& entries() const { return entries_; }

 private:
  const model::ProblemSpec* spec_;
  solver::Grid grid_;
  double eps_, l_, delta_, weight_;
  bool keep_entries_;
  double total_mass_ = 0.0;
  std::vector<DefectEntry> entries_;
};

}  // namespace levypde::functionals
