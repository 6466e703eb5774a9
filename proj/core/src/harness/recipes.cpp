#include "levypde/harness/recipes.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "levypde/functionals/boundary_layer.hpp"
#include "levypde/functionals/defect_measure.hpp"
#include "levypde/harness/ensemble.hpp"
#include "levypde/model/entropy_triple.hpp"
#include "levypde/noise/noise_path.hpp"
#include "levypde/solver/scheme.hpp"
#include "levypde/solver/snapshot_io.hpp"
#include "levypde/verify/contraction.hpp"
#include "levypde/verify/entropy_residual.hpp"
#include "levypde/verify/gronwall.hpp"
#include "levypde/verify/jump_sign.hpp"
#include "levypde/verify/test_function.hpp"
#include "levypde/verify/truncation_cauchy.hpp"
#include "levypde/verify/viscosity.hpp"

namespace levypde::harness {

namespace {

using solver::format_double;

struct Ctx {
  model::ProblemSpec spec;
  solver::Grid grid;
  double eps = 0.0;
  double t_final = 0.0;
  int n_paths = 0;
  std::uint64_t base_seed = 0;
};

Ctx make_ctx(const ExperimentConfig& cfg) {
  Ctx c;
  c.spec = build_problem(cfg);
  c.grid = build_grid(cfg);
  c.eps = cfg.get_double("solver.eps", 0.05);
  c.t_final = cfg.get_double("solver.t_final", 0.5);
  c.n_paths = static_cast<int>(cfg.get_int("ensemble.n_paths", 8));
  c.base_seed = static_cast<std::uint64_t>(cfg.get_int("ensemble.base_seed", 1));
  if (c.n_paths < 1)
    throw std::invalid_argument("ensemble.n_paths must be >= 1");
  if (!(c.t_final > 0.0))
    throw std::invalid_argument("solver.t_final must be > 0");
  return c;
}

std::string base_params(const Ctx& c) {
  std::ostringstream os;
  os << "n=" << c.grid.n << " dim=" << c.grid.dim << " eps="
     << format_double(c.eps) << " t_final=" << format_double(c.t_final)
     << " n_paths=" << c.n_paths << " base_seed=" << c.base_seed;
  return os.str();
}

void write_text(RecipeResult& res, const std::string& out_dir,
                const std::string& rel, const std::string& text) {
  std::ofstream out(out_dir + "/" + rel, std::ios::binary);
  if (!out) throw std::runtime_error("recipe: cannot write " + rel);
  out << text;
  res.files.push_back(rel);
}

void finish(RecipeResult& res, const std::string& out_dir) {
  res.pass = true;
  for (const auto& v : res.verdicts) res.pass = res.pass && v.pass;
  res.files.push_back(res.name + ".verdicts.json");
  write_verdicts(out_dir, res);
}

bool zero_noise(const model::ProblemSpec& spec) {
  return spec.sigma.kind == model::SigmaKind::Zero && !spec.has_jumps();
}

// --------------------------------------------------------------------------
// l1-bound: ensemble mean L1 norm stays under the initial mass at every
// stored time, up to a small slack plus five standard errors.
RecipeResult recipe_l1_bound(const ExperimentConfig& cfg, int workers,
                             const std::string& out_dir) {
  const Ctx c = make_ctx(cfg);
  solver::SolveOptions opt;
  opt.store_count = static_cast<int>(cfg.get_int("check.store_count", 33));
  const double slack = cfg.get_double("check.l1_slack", 0.02);

  const auto u0 = solver::sample_initial(c.spec, c.grid);
  const double mass0 = solver::norm_l1(c.grid, u0);
  const double bound = mass0 * (1.0 + slack);

  std::vector<std::vector<double>> rows(static_cast<size_t>(c.n_paths));
  std::vector<double> times;
  parallel_for_paths(c.n_paths, workers, [&](int p) {
    auto s = solver::solve_path(c.spec, c.grid, c.eps, c.t_final, c.base_seed,
                                static_cast<std::uint64_t>(p), opt);
    auto& row = rows[static_cast<size_t>(p)];
    row.reserve(s.snaps.size());
    for (const auto& snap : s.snaps)
      row.push_back(solver::norm_l1(c.grid, snap));
    if (p == 0) times = s.times;
  });
  const auto table = reduce_rows(rows);

  RecipeResult res;
  res.name = "l1-bound";
  std::string csv = "t,mean_l1,se,bound\n";
  bool ok = true;
  size_t worst = 0;
  double worst_gap = -1e300;
  for (size_t j = 0; j < times.size(); ++j) {
    if (table.mean[j] > bound + 5.0 * table.se[j]) ok = false;
    const double gap = table.mean[j] - 5.0 * table.se[j] - bound;
    if (gap > worst_gap) {
      worst_gap = gap;
      worst = j;
    }
    csv += format_double(times[j]) + "," + format_double(table.mean[j]) + "," +
           format_double(table.se[j]) + "," + format_double(bound) + "\n";
  }
  write_text(res, out_dir, "l1_bound.csv", csv);

  Verdict v;
  v.check = "l1-bound";
  v.parameters = base_params(c) + " slack=" + format_double(slack) +
                 " worst_t=" + format_double(times[worst]);
  v.mean = table.mean[worst];
  v.se = table.se[worst];
  v.budget = bound;
  v.pass = ok;
  res.verdicts.push_back(v);
  finish(res, out_dir);
  return res;
}

// --------------------------------------------------------------------------
// kirchhoff-bound: the truncated gradient energy
//   E int_0^T int (|D_h G(T_l u)|^2 + eps |D_h T_l u|^2) dx dt
// stays under C(l) = l ||u0||_1 + T sup_t E ||u(t)||_2^2 per level.
RecipeResult recipe_kirchhoff_bound(const ExperimentConfig& cfg, int workers,
                                    const std::string& out_dir) {
  const Ctx c = make_ctx(cfg);
  const double sup0 = c.spec.u0.sup_bound();
  const std::vector<double> levels =
      cfg.get_list("check.levels", {0.5 * sup0, sup0, 2.0 * sup0});
  const double slack = cfg.get_double("check.energy_slack", 0.05);
  const auto [n_steps, dt] =
      solver::step_partition(c.spec, c.grid, c.eps, c.t_final);
  const auto sel = solver::snapshot_steps(
      n_steps, static_cast<int>(cfg.get_int("check.store_count", 33)));
  const size_t L = levels.size();

  std::vector<std::vector<double>> rows(static_cast<size_t>(c.n_paths));
  parallel_for_paths(c.n_paths, workers, [&](int p) {
    auto noise = noise::generate_path(c.spec.mark, c.t_final, dt, c.base_seed,
                                      static_cast<std::uint64_t>(p));
    auto state = solver::sample_initial(c.spec, c.grid);
    std::vector<double> energy(L, 0.0);
    std::vector<double> l2(sel.size(), 0.0);
    size_t cursor = 0;
    if (sel[cursor] == 0) l2[cursor++] = solver::norm_l2sq(c.grid, state);
    const double dx = c.grid.dx();
    const double vol = c.grid.cell_volume();
    const int n = c.grid.n;
    solver::walk(
        c.spec, c.grid, c.eps, noise, state,
        [&](const solver::StepRecord& rec) {
          for (size_t q = 0; q < L; ++q) {
            const double l = levels[q];
            double acc = 0.0;
            if (c.grid.dim == 1) {
              for (int i = 0; i < n; ++i) {
                const double a = model::truncate(rec.before[static_cast<size_t>(i)], l);
                const double b = model::truncate(
                    rec.before[static_cast<size_t>(c.grid.wrap(i + 1))], l);
                const double dg =
                    (c.spec.kirchhoff_fast(b) - c.spec.kirchhoff_fast(a)) / dx;
                const double du = (b - a) / dx;
                acc += dg * dg + c.eps * du * du;
              }
            } else {
              for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                  const double a = model::truncate(
                      rec.before[static_cast<size_t>(c.grid.index(i, j))], l);
                  const double ga = c.spec.kirchhoff_fast(a);
                  const double bx = model::truncate(
                      rec.before[static_cast<size_t>(
                          c.grid.index(c.grid.wrap(i + 1), j))], l);
                  const double by = model::truncate(
                      rec.before[static_cast<size_t>(
                          c.grid.index(i, c.grid.wrap(j + 1)))], l);
                  const double dgx = (c.spec.kirchhoff_fast(bx) - ga) / dx;
                  const double dgy = (c.spec.kirchhoff_fast(by) - ga) / dx;
                  const double dux = (bx - a) / dx;
                  const double duy = (by - a) / dx;
                  acc += dgx * dgx + dgy * dgy +
                         c.eps * (dux * dux + duy * duy);
                }
            }
            energy[q] += acc * vol * rec.dt;
          }
          if (cursor < sel.size() && sel[cursor] == rec.k + 1)
            l2[cursor++] = solver::norm_l2sq(c.grid, rec.after);
        });
    auto& row = rows[static_cast<size_t>(p)];
    row = energy;
    row.insert(row.end(), l2.begin(), l2.end());
  });
  const auto table = reduce_rows(rows);

  double sup_l2 = 0.0;
  for (size_t j = 0; j < sel.size(); ++j)
    sup_l2 = std::max(sup_l2, table.mean[L + j]);
  const auto u0 = solver::sample_initial(c.spec, c.grid);
  const double mass0 = solver::norm_l1(c.grid, u0);

  RecipeResult res;
  res.name = "kirchhoff-bound";
  std::string csv = "level,mean_energy,se,c_l,budget\n";
  for (size_t q = 0; q < L; ++q) {
    const double cl = levels[q] * mass0 + c.t_final * sup_l2;
    const double budget = cl * (1.0 + slack);
    csv += format_double(levels[q]) + "," + format_double(table.mean[q]) +
           "," + format_double(table.se[q]) + "," + format_double(cl) + "," +
           format_double(budget) + "\n";
    Verdict v;
    v.check = "kirchhoff-bound";
    v.parameters = base_params(c) + " level=" + format_double(levels[q]) +
                   " sup_l2=" + format_double(sup_l2);
    v.mean = table.mean[q];
    v.se = table.se[q];
    v.budget = budget;
    v.pass = table.mean[q] <= budget + 5.0 * table.se[q];
    res.verdicts.push_back(v);
  }
  write_text(res, out_dir, "kirchhoff_bound.csv", csv);
  finish(res, out_dir);
  return res;
}

// --------------------------------------------------------------------------
// dissipation: the truncation-defect mass dies out along the level ladder
// (per band width), and the boundary-layer error scan finds a dissipating
// level below the first decade threshold.
RecipeResult recipe_dissipation(const ExperimentConfig& cfg, int workers,
                                const std::string& out_dir) {
  const Ctx c = make_ctx(cfg);
  const double sup0 = c.spec.u0.sup_bound();
  const std::vector<double> levels = cfg.get_list(
      "check.levels", {0.5 * sup0, sup0, 2.0 * sup0, 4.0 * sup0});
  const std::vector<double> deltas = cfg.get_list(
      "check.deltas", {0.2 * sup0, 0.1 * sup0, 0.05 * sup0});
  const double weight = cfg.get_double("check.weight", 1.0);
  const double ratio = cfg.get_double("check.mass_ratio", 1e-3);
  const auto [n_steps, dt] =
      solver::step_partition(c.spec, c.grid, c.eps, c.t_final);
  const size_t L = levels.size();
  const size_t D = deltas.size();
  const double scan_delta = deltas.back();

  // Row layout: defect mass per (delta, level), then E2 and E3 per level at
  // the finest band width.
  std::vector<std::vector<double>> rows(static_cast<size_t>(c.n_paths));
  parallel_for_paths(c.n_paths, workers, [&](int p) {
    auto noise = noise::generate_path(c.spec.mark, c.t_final, dt, c.base_seed,
                                      static_cast<std::uint64_t>(p));
    auto state = solver::sample_initial(c.spec, c.grid);
    std::vector<functionals::DefectAccumulator> defect;
    defect.reserve(D * L);
    for (size_t d = 0; d < D; ++d)
      for (size_t q = 0; q < L; ++q)
        defect.emplace_back(c.spec, c.grid, c.eps, levels[q], deltas[d],
                            weight);
    functionals::BandMassAccumulator band(c.spec, c.grid, levels, scan_delta);
    solver::walk(c.spec, c.grid, c.eps, noise, state,
                 [&](const solver::StepRecord& rec) {
                   for (auto& acc : defect) acc.on_step(rec);
                   band.on_step(rec);
                 });
    auto& row = rows[static_cast<size_t>(p)];
    row.reserve(D * L + 2 * L);
    for (const auto& acc : defect) row.push_back(acc.total_mass());
    for (const auto& bl : band.finish()) row.push_back(bl.e2);
    for (const auto& bl : band.finish()) row.push_back(bl.e3);
  });
  const auto table = reduce_rows(rows);

  RecipeResult res;
  res.name = "dissipation";
  std::string csv = "delta,level,mean_mass,se\n";
  for (size_t d = 0; d < D; ++d) {
    bool monotone = true;
    for (size_t q = 0; q < L; ++q) {
      const size_t col = d * L + q;
      csv += format_double(deltas[d]) + "," + format_double(levels[q]) + "," +
             format_double(table.mean[col]) + "," +
             format_double(table.se[col]) + "\n";
      if (q > 0) {
        const double prev = table.mean[col - 1];
        const double tol =
            5.0 * std::sqrt(table.se[col] * table.se[col] +
                            table.se[col - 1] * table.se[col - 1]);
        if (table.mean[col] > prev + tol) monotone = false;
      }
    }
    const size_t first = d * L, top = d * L + L - 1;
    Verdict v;
    v.check = "defect-mass-decay";
    v.parameters = base_params(c) + " delta=" + format_double(deltas[d]) +
                   " K=" + format_double(weight) +
                   " first_mass=" + format_double(table.mean[first]);
    v.mean = table.mean[top];
    v.se = table.se[top];
    v.budget = ratio * table.mean[first];
    v.pass = monotone &&
             table.mean[top] <= ratio * table.mean[first] + 5.0 * table.se[top];
    res.verdicts.push_back(v);
  }
  write_text(res, out_dir, "dissipation.csv", csv);

  // Boundary-layer scan at the finest band width: decade thresholds over the
  // ensemble-mean totals E1 + E2 + E3.
  std::string scan_csv = "level,e1,e2_mean,e2_se,e3_mean,e3_se,total\n";
  std::vector<double> totals(L);
  for (size_t q = 0; q < L; ++q) {
    const double e1 = functionals::data_tail_mass(c.spec, c.grid, levels[q]);
    const double e2m = table.mean[D * L + q], e2s = table.se[D * L + q];
    const double e3m = table.mean[D * L + L + q], e3s = table.se[D * L + L + q];
    totals[q] = e1 + e2m + e3m;
    scan_csv += format_double(levels[q]) + "," + format_double(e1) + "," +
                format_double(e2m) + "," + format_double(e2s) + "," +
                format_double(e3m) + "," + format_double(e3s) + "," +
                format_double(totals[q]) + "\n";
  }
  write_text(res, out_dir, "boundary_scan.csv", scan_csv);
  Verdict vb;
  vb.check = "boundary-layer-scan";
  vb.parameters = base_params(c) + " delta=" + format_double(scan_delta) +
                  " top_level=" + format_double(levels.back());
  vb.mean = totals.back();
  vb.se = 0.0;
  vb.budget = 0.1;  // first decade threshold
  vb.pass = totals.back() <= vb.budget;
  res.verdicts.push_back(vb);

  finish(res, out_dir);
  return res;
}

// --------------------------------------------------------------------------
// entropy-residual: the renormalized entropy inequality holds for a grid of
// shifted entropies and localized test functions; an injected steady
// expansion profile must be rejected by at least one combination.
RecipeResult recipe_entropy_residual(const ExperimentConfig& cfg, int workers,
                                     const std::string& out_dir) {
  const Ctx c = make_ctx(cfg);
  const double sup0 = c.spec.u0.sup_bound();
  const double xi = cfg.get_double("check.xi", 0.25);
  const double level = cfg.get_double("check.trunc_level", 2.0 * sup0);
  verify::MeasureParams measure;
  measure.l = level;
  measure.delta = cfg.get_double("check.delta", 0.2 * level);
  measure.weight = cfg.get_double("check.weight", 1.0);
  const double budget_c = cfg.get_double("check.budget_c", 0.5);
  double span = cfg.get_double("check.kruzkov_span", 0.0);
  if (span <= 0.0) span = c.spec.state_bound;
  const int count = static_cast<int>(cfg.get_int("check.kruzkov_count", 17));

  // Shifted entropies lose the flat slope at the origin that the jump terms
  // require, so full-noise runs scan the centered entropy only.
  std::vector<double> cs{0.0};
  if (!c.spec.has_jumps()) cs = verify::kruzkov_constants(span, count);

  const model::BetaXi beta{xi};
  std::vector<model::EntropyTriple> triples;
  triples.reserve(cs.size());
  for (double cc : cs)
    triples.push_back(model::make_entropy_triple(
        c.spec, cc == 0.0 ? beta.entropy() : beta.shifted(cc),
        c.spec.range_bound));

  auto psis = verify::default_bump_family(c.grid, c.t_final);
  {
    // Time-compact clones: zero weight at t = 0 and t = T, so violations are
    // not masked by the initial / terminal slack.
    const size_t base = psis.size();
    for (size_t j = 0; j < base; ++j) {
      verify::TestFunction tc = psis[j];
      tc.t0 = 0.5 * c.t_final;
      tc.rt = 0.3 * c.t_final;
      tc.label += "-tc";
      psis.push_back(tc);
    }
  }

  solver::SolveOptions opt;
  opt.store_every_step = true;

  const size_t combos = psis.size() * cs.size();
  std::vector<std::vector<double>> samples(
      combos, std::vector<double>(static_cast<size_t>(c.n_paths)));
  double dx = c.grid.dx(), dt_used = 0.0;
  {
    const auto part = solver::step_partition(c.spec, c.grid, c.eps, c.t_final);
    dt_used = part.second;
  }
  parallel_for_paths(c.n_paths, workers, [&](int p) {
    const auto path = solver::solve_path(c.spec, c.grid, c.eps, c.t_final,
                                         c.base_seed,
                                         static_cast<std::uint64_t>(p), opt);
    std::span<const solver::PathSample> one(&path, 1);
    for (size_t jp = 0; jp < psis.size(); ++jp)
      for (size_t jc = 0; jc < cs.size(); ++jc) {
        const auto rep = verify::renormalized_residual(
            c.spec, one, triples[jc], psis[jp], measure, budget_c);
        samples[jp * cs.size() + jc][static_cast<size_t>(p)] = rep.mean;
      }
  });

  const double budget = verify::residual_budget(budget_c, dx, dt_used);
  RecipeResult res;
  res.name = "entropy-residual";
  std::string csv = "psi,c,mean,se,budget,pass\n";
  for (size_t jp = 0; jp < psis.size(); ++jp) {
    double worst_mean = 1e300, worst_se = 0.0, worst_c = 0.0;
    bool ok = true;
    for (size_t jc = 0; jc < cs.size(); ++jc) {
      const auto ms = stats::mean_se(samples[jp * cs.size() + jc]);
      const bool pass = ms.mean >= -(budget + 5.0 * ms.se);
      ok = ok && pass;
      if (ms.mean - 5.0 * ms.se < worst_mean - 5.0 * worst_se) {
        worst_mean = ms.mean;
        worst_se = ms.se;
        worst_c = cs[jc];
      }
      csv += psis[jp].label + "," + format_double(cs[jc]) + "," +
             format_double(ms.mean) + "," + format_double(ms.se) + "," +
             format_double(budget) + "," + (pass ? "1" : "0") + "\n";
    }
    Verdict v;
    v.check = "entropy-residual " + psis[jp].label;
    v.parameters = base_params(c) + " xi=" + format_double(xi) +
                   " level=" + format_double(level) +
                   " worst_c=" + format_double(worst_c);
    v.mean = worst_mean;
    v.se = worst_se;
    v.budget = budget;
    v.pass = ok;
    res.verdicts.push_back(v);
  }
  write_text(res, out_dir, "entropy_residual.csv", csv);

  if (cfg.get_int("check.negative_control", 0) != 0) {
    // Steady expansion profile, frozen in time: a weak solution that
    // violates the entropy inequality at the origin.  The detector must
    // reject it for at least one (entropy shift, test function) pair.
    ExperimentConfig quiet = cfg;
    quiet.set("problem.sigma", "zero");
    quiet.set("problem.jump", "zero");
    quiet.set("noise.rate", "0");
    const auto cspec = build_problem(quiet);
    const double amp = cfg.get_double("check.control_amp", std::max(1.0, sup0));

    solver::PathSample frozen;
    frozen.grid = c.grid;
    frozen.eps = 0.0;
    const std::int64_t ctrl_steps = 256;
    frozen.dt = c.t_final / static_cast<double>(ctrl_steps);
    frozen.noise.dt = frozen.dt;
    frozen.noise.n_steps = ctrl_steps;
    frozen.noise.dw.assign(static_cast<size_t>(ctrl_steps), 0.0);
    std::vector<double> profile(static_cast<size_t>(c.grid.cells()));
    for (std::int64_t cell = 0; cell < c.grid.cells(); ++cell) {
      const double x = c.grid.x(static_cast<int>(
          c.grid.dim == 1 ? cell : cell % c.grid.n));
      profile[static_cast<size_t>(cell)] = x < 0.0 ? -amp : amp;
    }
    for (std::int64_t k = 0; k <= ctrl_steps; ++k) {
      frozen.steps.push_back(k);
      frozen.times.push_back(static_cast<double>(k) * frozen.dt);
      frozen.snaps.push_back(profile);
    }

    std::vector<model::EntropyTriple> ctriples;
    for (double cc : cs)
      ctriples.push_back(model::make_entropy_triple(
          cspec, cc == 0.0 ? beta.entropy() : beta.shifted(cc),
          cspec.range_bound));
    const double cbudget =
        verify::residual_budget(budget_c, c.grid.dx(), frozen.dt);
    std::span<const solver::PathSample> one(&frozen, 1);
    double min_margin = 1e300, fired_mean = 0.0;
    std::string fired_at = "none";
    for (size_t jp = 0; jp < psis.size(); ++jp)
      for (size_t jc = 0; jc < cs.size(); ++jc) {
        const auto rep = verify::renormalized_residual(
            cspec, one, ctriples[jc], psis[jp], measure, budget_c);
        const double margin = rep.mean + cbudget;
        if (margin < min_margin) {
          min_margin = margin;
          fired_mean = rep.mean;
          fired_at = psis[jp].label + " c=" + format_double(cs[jc]);
        }
      }
    Verdict v;
    v.check = "entropy-residual-control";
    v.parameters = base_params(c) + " control_amp=" + format_double(amp) +
                   " fired_at=" + fired_at;
    v.mean = fired_mean;
    v.se = 0.0;
    v.budget = cbudget;
    v.pass = min_margin < 0.0;  // the violation must be detected
    res.verdicts.push_back(v);
  }

  finish(res, out_dir);
  return res;
}

// --------------------------------------------------------------------------
// contraction: paired-noise L1 distance ratio, exact for zero noise and
// bounded for full noise.
RecipeResult recipe_contraction(const ExperimentConfig& cfg, int /*workers*/,
                                const std::string& out_dir) {
  const Ctx c = make_ctx(cfg);
  verify::ContractionOptions opt;
  opt.store_count = static_cast<int>(cfg.get_int("check.store_count", 33));
  opt.dt_override = cfg.get_double("solver.dt_override", 0.0);
  const auto u0b = build_initial_b(cfg);
  const auto curve = verify::contraction_check(
      c.spec, c.spec.u0, u0b, c.grid, c.eps, c.t_final, c.n_paths,
      c.base_seed, opt);
  const bool exact = zero_noise(c.spec);

  RecipeResult res;
  res.name = "contraction";
  std::string csv = "t,mean_ratio,se\n";
  for (size_t j = 0; j < curve.times.size(); ++j)
    csv += format_double(curve.times[j]) + "," +
           format_double(curve.mean_ratio[j]) + "," +
           format_double(curve.se[j]) + "\n";
  write_text(res, out_dir, "contraction.csv", csv);

  const std::string params =
      base_params(c) + " initial_distance=" +
      format_double(curve.initial_distance) +
      " growth_rate=" + format_double(curve.growth_rate);

  Verdict vb;
  vb.check = "contraction-bounded";
  vb.parameters = params;
  vb.mean = curve.sup_ratio;
  vb.se = 0.0;
  vb.budget = cfg.get_double("check.ratio_bound", exact ? 1.0 + 1e-9 : 2.0);
  vb.pass = curve.sup_ratio <= vb.budget;
  res.verdicts.push_back(vb);

  if (exact) {
    Verdict vd;
    vd.check = "contraction-exact-drift";
    vd.parameters = params;
    vd.mean = curve.max_step_drift;
    vd.se = 0.0;
    vd.budget = 1e-12 * std::max(1.0, curve.initial_distance);
    vd.pass = curve.max_step_drift <= vd.budget;
    res.verdicts.push_back(vd);

    bool nonincreasing = true;
    for (size_t j = 0; j + 1 < curve.mean_ratio.size(); ++j)
      if (curve.mean_ratio[j + 1] > curve.mean_ratio[j] + 1e-12)
        nonincreasing = false;
    Verdict vm;
    vm.check = "contraction-nonincreasing";
    vm.parameters = params;
    vm.mean = curve.sup_ratio;
    vm.se = 0.0;
    vm.budget = 1.0 + 1e-12;
    vm.pass = nonincreasing;
    res.verdicts.push_back(vm);
  }

  finish(res, out_dir);
  return res;
}

// --------------------------------------------------------------------------
// cauchy-truncation: truncated-data solves form a Cauchy ladder.
RecipeResult recipe_cauchy_truncation(const ExperimentConfig& cfg,
                                      int /*workers*/,
                                      const std::string& out_dir) {
  const Ctx c = make_ctx(cfg);
  const std::vector<double> levels =
      cfg.get_list("check.levels", {1.0, 2.0, 4.0, 8.0});
  const double constant = cfg.get_double("check.contraction_constant", 1.05);
  const int store_count =
      static_cast<int>(cfg.get_int("check.store_count", 33));
  const auto rep = verify::truncated_data_cauchy(
      c.spec, c.grid, c.eps, c.t_final, levels, c.n_paths, c.base_seed,
      constant, store_count);

  RecipeResult res;
  res.name = "cauchy-truncation";
  std::string csv = "n1,n2,data_distance,sup_distance,se_at_sup,bound\n";
  for (const auto& pair : rep.pairs) {
    const double bound =
        constant * pair.data_distance + 5.0 * pair.se_at_sup;
    csv += format_double(pair.n1) + "," + format_double(pair.n2) + "," +
           format_double(pair.data_distance) + "," +
           format_double(pair.sup_distance) + "," +
           format_double(pair.se_at_sup) + "," + format_double(bound) + "\n";
    Verdict v;
    v.check = "cauchy-bounded " + format_double(pair.n1) + "->" +
              format_double(pair.n2);
    v.parameters = base_params(c) + " C=" + format_double(constant);
    v.mean = pair.sup_distance;
    v.se = pair.se_at_sup;
    v.budget = constant * pair.data_distance;
    v.pass = pair.bounded;
    res.verdicts.push_back(v);
  }
  write_text(res, out_dir, "cauchy_truncation.csv", csv);

  Verdict vm;
  vm.check = "cauchy-monotone";
  vm.parameters = base_params(c);
  vm.mean = rep.pairs.back().sup_distance;
  vm.se = rep.pairs.back().se_at_sup;
  vm.budget = rep.pairs.front().sup_distance;
  vm.pass = rep.monotone;
  res.verdicts.push_back(vm);

  finish(res, out_dir);
  return res;
}

// --------------------------------------------------------------------------
// viscosity-limit: successive paired distances fall along a decreasing
// viscosity ladder.
RecipeResult recipe_viscosity_limit(const ExperimentConfig& cfg,
                                    int /*workers*/,
                                    const std::string& out_dir) {
  const Ctx c = make_ctx(cfg);
  const std::vector<double> ladder =
      cfg.get_list("check.eps_ladder", {0.2, 0.1, 0.05});
  const auto rep = verify::viscosity_convergence(
      c.spec, c.grid, ladder, c.t_final, c.n_paths, c.base_seed);

  RecipeResult res;
  res.name = "viscosity-limit";
  std::string csv = "eps_hi,eps_lo,mean_distance,se,resolved_hi,resolved_lo\n";
  for (size_t q = 0; q + 1 < ladder.size(); ++q)
    csv += format_double(ladder[q]) + "," + format_double(ladder[q + 1]) +
           "," + format_double(rep.distances[q]) + "," +
           format_double(rep.se[q]) + "," +
           (rep.rung_resolved[q] ? "1" : "0") + "," +
           (rep.rung_resolved[q + 1] ? "1" : "0") + "\n";
  write_text(res, out_dir, "viscosity_limit.csv", csv);

  std::string params = base_params(c) + " ladder=";
  for (size_t q = 0; q < ladder.size(); ++q)
    params += (q ? "|" : "") + format_double(ladder[q]);
  Verdict v;
  v.check = "viscosity-decreasing";
  v.parameters = params;
  v.mean = rep.distances.back();
  v.se = rep.se.back();
  v.budget = rep.distances.front();
  v.pass = rep.strictly_decreasing;
  res.verdicts.push_back(v);

  finish(res, out_dir);
  return res;
}

// --------------------------------------------------------------------------
// jump-sign: the truncation-vs-jump commutator is nonpositive for every
// nondecreasing catalog jump; a decreasing jump must be caught.
RecipeResult recipe_jump_sign(const ExperimentConfig& cfg, int /*workers*/,
                              const std::string& out_dir) {
  const Ctx c = make_ctx(cfg);
  const double sup0 = std::max(1.0, c.spec.u0.sup_bound());
  const std::vector<double> levels =
      cfg.get_list("check.levels", {0.5 * sup0, sup0, 2.0 * sup0});
  const int u_points = static_cast<int>(cfg.get_int("check.u_points", 201));
  const double u_span = cfg.get_double("check.u_span", c.spec.state_bound);
  const double tol = cfg.get_double("check.tolerance", 1e-12);
  const std::vector<double> xis =
      cfg.get_list("check.xi_ladder", {0.5, 0.25, 0.125});

  auto spec_with_jump = [&](const std::string& name) {
    ExperimentConfig cfg2 = cfg;
    cfg2.set("problem.jump", name);
    if (!cfg.has("problem.jump_amp")) cfg2.set_double("problem.jump_amp", 0.2);
    if (!cfg.has("problem.jump_uscale"))
      cfg2.set_double("problem.jump_uscale", 0.5);
    return build_problem(cfg2);
  };

  RecipeResult res;
  res.name = "jump-sign";
  std::string csv = "jump,xi,max_integrand,at_u,at_z,at_l,points,pass\n";
  std::int64_t total_points = 0;

  for (const std::string name : {"linear", "bounded-ramp"}) {
    const auto spec2 = spec_with_jump(name);
    double worst = -1e300, at_u = 0, at_z = 0, at_l = 0;
    bool ok = true;
    for (double xi : xis) {
      const auto rep = verify::jump_sign_check(
          spec2, model::BetaXi{xi}.entropy(), levels, u_points, u_span, tol);
      total_points += rep.points;
      ok = ok && rep.pass;
      if (rep.max_integrand > worst) {
        worst = rep.max_integrand;
        at_u = rep.at_u;
        at_z = rep.at_z;
        at_l = rep.at_l;
      }
      csv += name + "," + format_double(xi) + "," +
             format_double(rep.max_integrand) + "," +
             format_double(rep.at_u) + "," + format_double(rep.at_z) + "," +
             format_double(rep.at_l) + "," + std::to_string(rep.points) +
             "," + (rep.pass ? "1" : "0") + "\n";
    }
    Verdict v;
    v.check = "jump-sign " + name;
    v.parameters = base_params(c) + " u_points=" + std::to_string(u_points) +
                   " u_span=" + format_double(u_span) + " at_u=" +
                   format_double(at_u) + " at_z=" + format_double(at_z) +
                   " at_l=" + format_double(at_l);
    v.mean = worst;
    v.se = 0.0;
    v.budget = tol;
    v.pass = ok;
    res.verdicts.push_back(v);
  }

  // Negative control: a decreasing jump amplitude breaks the commutator
  // sign, and every entropy in the family must see it.
  {
    const auto spec2 = spec_with_jump("decreasing-ramp");
    double weakest = 1e300;
    bool all_fired = true;
    for (double xi : xis) {
      const auto rep = verify::jump_sign_check(
          spec2, model::BetaXi{xi}.entropy(), levels, u_points, u_span, tol);
      total_points += rep.points;
      all_fired = all_fired && !rep.pass;
      weakest = std::min(weakest, rep.max_integrand);
      csv += std::string("decreasing-ramp,") + format_double(xi) + "," +
             format_double(rep.max_integrand) + "," +
             format_double(rep.at_u) + "," + format_double(rep.at_z) + "," +
             format_double(rep.at_l) + "," + std::to_string(rep.points) +
             "," + (rep.pass ? "1" : "0") + "\n";
    }
    Verdict v;
    v.check = "jump-sign-control decreasing-ramp";
    v.parameters = base_params(c) + " points_total=" +
                   std::to_string(total_points);
    v.mean = weakest;
    v.se = 0.0;
    v.budget = tol;
    v.pass = all_fired;
    res.verdicts.push_back(v);
  }

  write_text(res, out_dir, "jump_sign.csv", csv);
  finish(res, out_dir);
  return res;
}

// --------------------------------------------------------------------------
// gronwall: truncated-data error stays under the exponential envelope; the
// growth rate comes from a contraction run when not pinned in the config.
RecipeResult recipe_gronwall(const ExperimentConfig& cfg, int /*workers*/,
                             const std::string& out_dir) {
  const Ctx c = make_ctx(cfg);
  const double sup0 = c.spec.u0.sup_bound();
  const double level = cfg.get_double("check.trunc_level", 0.5 * sup0);
  const double c_data = cfg.get_double("check.c_data", 1.0);
  const double floor = cfg.get_double("check.floor", 0.0);
  const int store_count =
      static_cast<int>(cfg.get_int("check.store_count", 33));

  double rate = 0.0;
  std::string rate_source = "config";
  if (cfg.has("check.rate")) {
    rate = cfg.get_double("check.rate", 0.0);
  } else {
    // Prerequisite auto-scheduling: estimate the growth rate from a paired
    // contraction run on the same problem.
    verify::ContractionOptions copt;
    copt.store_count = store_count;
    const auto curve = verify::contraction_check(
        c.spec, c.spec.u0, build_initial_b(cfg), c.grid, c.eps, c.t_final,
        c.n_paths, c.base_seed, copt);
    rate = curve.growth_rate;
    rate_source = "contraction";
  }

  const auto rep = verify::gronwall_stability(
      c.spec, c.grid, c.eps, c.t_final, level, c.n_paths, c.base_seed, rate,
      c_data, floor, store_count);

  RecipeResult res;
  res.name = "gronwall";
  std::string csv = "t,lhs,se,rhs,margin\n";
  size_t worst = 0;
  for (size_t j = 0; j < rep.times.size(); ++j) {
    csv += format_double(rep.times[j]) + "," + format_double(rep.lhs[j]) +
           "," + format_double(rep.se[j]) + "," + format_double(rep.rhs[j]) +
           "," + format_double(rep.margin[j]) + "\n";
    if (rep.margin[j] < rep.margin[worst]) worst = j;
  }
  write_text(res, out_dir, "gronwall.csv", csv);

  Verdict v;
  v.check = "gronwall";
  v.parameters = base_params(c) + " trunc_level=" + format_double(level) +
                 " rate=" + format_double(rate) + " rate_source=" +
                 rate_source + " data_distance=" +
                 format_double(rep.data_distance) + " worst_t=" +
                 format_double(rep.times[worst]);
  v.mean = rep.lhs[worst];
  v.se = rep.se[worst];
  v.budget = rep.rhs[worst];
  v.pass = rep.pass;
  res.verdicts.push_back(v);

  finish(res, out_dir);
  return res;
}

}  // namespace

const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names = {
      "l1-bound",       "kirchhoff-bound",  "dissipation",
      "entropy-residual", "contraction",    "cauchy-truncation",
      "viscosity-limit",  "jump-sign",      "gronwall"};
  return names;
}

RecipeResult run_recipe(const std::string& name, const ExperimentConfig& cfg,
                        int workers, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  if (workers <= 0) workers = 1;
  if (name == "l1-bound") return recipe_l1_bound(cfg, workers, out_dir);
  if (name == "kirchhoff-bound")
    return recipe_kirchhoff_bound(cfg, workers, out_dir);
  if (name == "dissipation") return recipe_dissipation(cfg, workers, out_dir);
  if (name == "entropy-residual")
    return recipe_entropy_residual(cfg, workers, out_dir);
  if (name == "contraction") return recipe_contraction(cfg, workers, out_dir);
  if (name == "cauchy-truncation")
    return recipe_cauchy_truncation(cfg, workers, out_dir);
  if (name == "viscosity-limit")
    return recipe_viscosity_limit(cfg, workers, out_dir);
  if (name == "jump-sign") return recipe_jump_sign(cfg, workers, out_dir);
  if (name == "gronwall") return recipe_gronwall(cfg, workers, out_dir);
  std::string known;
  for (const auto& r : recipe_names()) known += (known.empty() ? "" : ", ") + r;
  throw std::invalid_argument("unknown recipe '" + name + "' (known: " +
                              known + ")");
}

void write_verdicts(const std::string& out_dir, const RecipeResult& result) {
  nlohmann::json j;
  j["recipe"] = result.name;
  j["pass"] = result.pass;
  j["verdicts"] = nlohmann::json::array();
  for (const auto& v : result.verdicts)
    j["verdicts"].push_back({{"check", v.check},
                             {"parameters", v.parameters},
                             {"mean", v.mean},
                             {"se", v.se},
                             {"budget", v.budget},
                             {"verdict", v.pass ? "PASS" : "FAIL"}});
  std::ofstream out(out_dir + "/" + result.name + ".verdicts.json",
                    std::ios::binary);
  if (!out)
    throw std::runtime_error("recipe: cannot write verdicts into " + out_dir);
  out << j.dump(2) << "\n";
}

}  // namespace levypde::harness
