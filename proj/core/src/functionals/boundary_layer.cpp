#include "levypde/functionals/boundary_layer.hpp"

#include <cmath>
#include <stdexcept>

#include "levypde/model/calculus.hpp"
#include "levypde/stats.hpp"

namespace levypde::functionals {

namespace {

void require_every_step(const solver::PathSample& path, const char* who) {
  for (size_t j = 0; j < path.steps.size(); ++j)
    if (path.steps[j] != static_cast<std::int64_t>(j))
      throw std::invalid_argument(std::string(who) +
                                  ": path must be stored every step");
}

bool in_band(double v, double l, double delta) {
  const double a = std::abs(v);
  return a > l && a < l + delta;
}

}  // namespace

double data_tail_mass(const model::ProblemSpec& spec, const solver::Grid& grid,
                      double l) {
  auto u0 = solver::sample_initial(spec, grid);
  double mass = 0.0;
  for (double v : u0)
    if (std::abs(v) > l) mass += std::abs(v);
  return mass * grid.cell_volume();
}

BoundaryLayerMass boundary_layer_mass(const model::ProblemSpec& spec,
                                      const solver::PathSample& path, double l,
                                      double delta) {
  require_every_step(path, "boundary_layer_mass");
  if (delta <= 0.0)
    throw std::invalid_argument("boundary_layer_mass: delta <= 0");
  BoundaryLayerMass out;
  out.l = l;
  out.delta = delta;
  out.e1 = data_tail_mass(spec, path.grid, l);

  const bool jumps = spec.has_jumps();
  const double cell_dt = path.grid.cell_volume() * path.dt;
  double e2 = 0.0, e3 = 0.0;
  for (std::int64_t k = 0; k < path.noise.n_steps; ++k) {
    const auto& u = path.snaps[static_cast<size_t>(k)];
    for (double uc : u) {
      if (in_band(uc, l, delta)) {
        const double s = spec.sigma.value(uc);
        e2 += s * s * cell_dt;
      }
      if (!jumps) continue;
      const double prof = spec.eta_profile(uc);
      if (prof == 0.0) continue;
      for (size_t q = 0; q < spec.mark.coarse_nodes.size(); ++q) {
        const double eta = prof * spec.jump_profile.value(spec.mark.coarse_nodes[q]);
        if (eta == 0.0) continue;
        double lam_sum = 0.0;
        for (int g = 0; g < model::kLambdaNodes; ++g) {
          const double lam = model::kLambdaNode[g];
          if (in_band(uc + lam * eta, l, delta))
            lam_sum += model::kLambdaWeight[g] * (1.0 - lam);
        }
        e3 += spec.mark.coarse_weights[q] * eta * eta * lam_sum * cell_dt;
      }
    }
  }
  out.e2 = e2 / delta;
  out.e3 = e3 / delta;
  return out;
}

BandMassAccumulator::BandMassAccumulator(const model::ProblemSpec& spec,
                                         const solver::Grid& grid,
                                         std::vector<double> levels,
                                         double delta)
    : spec_(&spec), grid_(grid), levels_(std::move(levels)), delta_(delta) {
  if (delta_ <= 0.0)
    throw std::invalid_argument("BandMassAccumulator: delta <= 0");
  for (size_t j = 1; j < levels_.size(); ++j)
    if (levels_[j] <= levels_[j - 1])
      throw std::invalid_argument("BandMassAccumulator: levels must increase");
  e2_.assign(levels_.size(), 0.0);
  e3_.assign(levels_.size(), 0.0);
}

void BandMassAccumulator::on_step(const solver::StepRecord& rec) {
  const bool jumps = spec_->has_jumps();
  const double cell_dt = grid_.cell_volume() * rec.dt;
  for (double uc : rec.before) {
    for (size_t j = 0; j < levels_.size(); ++j) {
      if (in_band(uc, levels_[j], delta_)) {
        const double s = spec_->sigma.value(uc);
        e2_[j] += s * s * cell_dt;
      }
    }
    if (!jumps) continue;
    const double prof = spec_->eta_profile(uc);
    if (prof == 0.0) continue;
    for (size_t q = 0; q < spec_->mark.coarse_nodes.size(); ++q) {
      const double eta =
          prof * spec_->jump_profile.value(spec_->mark.coarse_nodes[q]);
      if (eta == 0.0) continue;
      const double wq = spec_->mark.coarse_weights[q] * eta * eta * cell_dt;
      for (int g = 0; g < model::kLambdaNodes; ++g) {
        const double v = uc + model::kLambdaNode[g] * eta;
        const double wl =
            model::kLambdaWeight[g] * (1.0 - model::kLambdaNode[g]) * wq;
        for (size_t j = 0; j < levels_.size(); ++j)
          if (in_band(v, levels_[j], delta_)) e3_[j] += wl;
      }
    }
  }
}

std::vector<BoundaryLayerMass> BandMassAccumulator::finish(double) const {
  std::vector<BoundaryLayerMass> rows(levels_.size());
  for (size_t j = 0; j < levels_.size(); ++j) {
    rows[j].l = levels_[j];
    rows[j].delta = delta_;
    rows[j].e1 = data_tail_mass(*spec_, grid_, levels_[j]);
    rows[j].e2 = e2_[j] / delta_;
    rows[j].e3 = e3_[j] / delta_;
  }
  return rows;
}

LevelScan find_dissipating_levels(const model::ProblemSpec& spec,
                                  std::span<const solver::PathSample> ensemble,
                                  std::span<const double> level_grid,
                                  double delta) {
  if (ensemble.empty())
    throw std::invalid_argument("find_dissipating_levels: empty ensemble");
  if (delta <= 0.0)
    throw std::invalid_argument("find_dissipating_levels: delta <= 0");
  for (size_t j = 1; j < level_grid.size(); ++j)
    if (level_grid[j] <= level_grid[j - 1])
      throw std::invalid_argument(
          "find_dissipating_levels: level grid must increase");

  const size_t n_lev = level_grid.size();
  const size_t n_paths = ensemble.size();
  std::vector<std::vector<double>> e2(n_lev, std::vector<double>(n_paths));
  std::vector<std::vector<double>> e3(n_lev, std::vector<double>(n_paths));

  std::vector<double> levels(level_grid.begin(), level_grid.end());
  for (size_t p = 0; p < n_paths; ++p) {
    const auto& path = ensemble[p];
    require_every_step(path, "find_dissipating_levels");
    BandMassAccumulator acc(spec, path.grid, levels, delta);
    for (std::int64_t k = 0; k < path.noise.n_steps; ++k) {
      auto [lo, hi] = path.noise.events_in_step(k);
      solver::StepRecord rec;
      rec.k = k;
      rec.t = static_cast<double>(k) * path.dt;
      rec.dt = path.dt;
      rec.before = path.snaps[static_cast<size_t>(k)];
      rec.after = path.snaps[static_cast<size_t>(k) + 1];
      rec.dw = path.noise.dw[static_cast<size_t>(k)];
      rec.events = std::span<const noise::JumpEvent>(
          path.noise.jumps.data() + lo, hi - lo);
      acc.on_step(rec);
    }
    auto rows = acc.finish();
    for (size_t j = 0; j < n_lev; ++j) {
      e2[j][p] = rows[j].e2;
      e3[j][p] = rows[j].e3;
    }
  }

  LevelScan scan;
  scan.levels = levels;
  for (size_t j = 0; j < n_lev; ++j) {
    scan.e1.push_back(data_tail_mass(spec, ensemble[0].grid, levels[j]));
    auto m2 = stats::mean_se(e2[j]);
    auto m3 = stats::mean_se(e3[j]);
    scan.e2_mean.push_back(m2.mean);
    scan.e2_se.push_back(m2.se);
    scan.e3_mean.push_back(m3.mean);
    scan.e3_se.push_back(m3.se);
    scan.total.push_back(scan.e1[j] + m2.mean + m3.mean);
  }

  // Successive decade thresholds: record the first level whose layer mass
  // drops below each one, stopping at the first unreachable decade.
  for (int j = 1; j <= 12; ++j) {
    const double tau = std::pow(10.0, -j);
    size_t hit = n_lev;
    for (size_t i = 0; i < n_lev; ++i)
      if (scan.total[i] < tau) {
        hit = i;
        break;
      }
    if (hit == n_lev) {
      if (j == 1) scan.first_threshold_unreachable = true;
      break;
    }
    scan.thresholds.push_back(tau);
    scan.selected_levels.push_back(levels[hit]);
  }
  return scan;
}

}  // namespace levypde::functionals
