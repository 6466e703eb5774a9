#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>
#include <unistd.h>

#include "levypde/harness/config.hpp"
#include "levypde/harness/ensemble.hpp"
#include "levypde/harness/manifest.hpp"
#include "levypde/harness/recipes.hpp"
#include "levypde/solver/scheme.hpp"

namespace fs = std::filesystem;
using namespace levypde;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() /
               ("levypde_ht_" + std::to_string(::getpid()) + "_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

harness::ExperimentConfig tiny_burgers_config() {
  harness::ExperimentConfig cfg;
  cfg.set("problem.flux", "burgers");
  cfg.set("problem.phi", "linear");
  cfg.set("problem.phi_scale", "0.05");
  cfg.set("problem.u0", "box");
  cfg.set("problem.u0_amp", "1");
  cfg.set("problem.u0_width", "1");
  cfg.set("grid.dim", "1");
  cfg.set("grid.n", "32");
  cfg.set("grid.half_width", "2");
  cfg.set("solver.eps", "0.1");
  cfg.set("solver.t_final", "0.1");
  cfg.set("ensemble.n_paths", "2");
  cfg.set("ensemble.base_seed", "7");
  return cfg;
}

}  // namespace

TEST_CASE("experiment config parses, emits sorted, and round-trips") {
  const std::string text =
      "# experiment\n"
      "\n"
      "solver.eps = 0.25\r\n"
      "grid.n=16\n"
      "  problem.flux = burgers  \n";
  auto cfg = harness::ExperimentConfig::parse(text);
  CHECK(cfg.entries().size() == 3);
  CHECK(cfg.get_string("problem.flux", "") == "burgers");
  CHECK(cfg.get_double("solver.eps", 0.0) == 0.25);
  CHECK(cfg.get_int("grid.n", 0) == 16);
  CHECK(cfg.has("grid.n"));
  CHECK(!cfg.has("grid.dim"));
  CHECK(cfg.get_int("grid.dim", 2) == 2);  // default passes through

  // emit writes keys sorted, one per line.
  CHECK(cfg.emit() == "grid.n=16\nproblem.flux=burgers\nsolver.eps=0.25\n");
  auto back = harness::ExperimentConfig::parse(cfg.emit());
  CHECK(back.entries() == cfg.entries());
  CHECK(back.hash() == cfg.hash());

  // Input order does not matter for the canonical form.
  auto other = harness::ExperimentConfig::parse(
      "problem.flux=burgers\nsolver.eps=0.25\ngrid.n=16\n");
  CHECK(other.hash() == cfg.hash());
}

TEST_CASE("experiment config hash is the pinned FNV-1a of the canonical form") {
  // Independently computed FNV-1a 64 values.
  CHECK(harness::fnv1a64("") == 0xcbf29ce484222325ULL);
  harness::ExperimentConfig cfg;
  CHECK(cfg.hash() == 0xcbf29ce484222325ULL);  // empty emit
  cfg.set("grid.n", "16");
  cfg.set("problem.flux", "burgers");
  cfg.set("solver.eps", "0.25");
  CHECK(cfg.hash() == 0xd1ffa2feef7cfecfULL);
  cfg.set("solver.eps", "0.5");
  CHECK(cfg.hash() != 0xd1ffa2feef7cfecfULL);
}

TEST_CASE("experiment config rejects malformed input") {
  CHECK_THROWS_AS((void)harness::ExperimentConfig::parse("grid.n=4\nnokey\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)harness::ExperimentConfig::parse("bogus.key=1\n"),
                  std::invalid_argument);
  harness::ExperimentConfig cfg;
  CHECK_THROWS_AS(cfg.set("bogus.key", "1"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("problem.", "1"), std::invalid_argument);
  cfg.set("solver.eps", "not-a-number");
  CHECK_THROWS_AS((void)cfg.get_double("solver.eps", 0.0),
                  std::invalid_argument);
  cfg.set("check.levels", "1,,2");
  CHECK_THROWS_AS((void)cfg.get_list("check.levels", {}),
                  std::invalid_argument);
}

TEST_CASE("experiment config lists and setters") {
  harness::ExperimentConfig cfg;
  cfg.set("check.levels", "0.5, 1, 2");
  const auto levels = cfg.get_list("check.levels", {});
  REQUIRE(levels.size() == 3);
  CHECK(levels[0] == 0.5);
  CHECK(levels[1] == 1.0);
  CHECK(levels[2] == 2.0);
  const auto dflt = cfg.get_list("check.deltas", {0.25, 0.125});
  REQUIRE(dflt.size() == 2);
  CHECK(dflt[0] == 0.25);

  cfg.set_double("solver.eps", 0.1);
  CHECK(cfg.get_double("solver.eps", 0.0) == 0.1);
  cfg.set_int("grid.n", 64);
  CHECK(cfg.get_int("grid.n", 0) == 64);
  // set_double emits round-trippable decimal text.
  cfg.set_double("solver.t_final", 0.3);
  CHECK(cfg.get_double("solver.t_final", 0.0) == 0.3);
}

TEST_CASE("experiment config applies environment overrides") {
  ::setenv("LEVYPDE_solver__eps", "0.125", 1);
  ::setenv("LEVYPDE_grid__n", "64", 1);
  ::setenv("UNRELATED_VAR", "1", 1);
  harness::ExperimentConfig cfg;
  cfg.set("solver.eps", "0.5");
  auto applied = cfg.apply_env_overrides();
  std::sort(applied.begin(), applied.end());
  REQUIRE(applied.size() == 2);
  CHECK(applied[0] == "grid.n");
  CHECK(applied[1] == "solver.eps");
  CHECK(cfg.get_double("solver.eps", 0.0) == 0.125);
  CHECK(cfg.get_int("grid.n", 0) == 64);
  ::unsetenv("LEVYPDE_solver__eps");
  ::unsetenv("LEVYPDE_grid__n");
  ::unsetenv("UNRELATED_VAR");

  ::setenv("LEVYPDE_bogus__x", "1", 1);
  harness::ExperimentConfig cfg2;
  CHECK_THROWS_AS((void)cfg2.apply_env_overrides(), std::invalid_argument);
  ::unsetenv("LEVYPDE_bogus__x");
}

TEST_CASE("config builders map catalog names onto problems and grids") {
  harness::ExperimentConfig cfg;
  cfg.set("problem.flux", "burgers");
  cfg.set("problem.flux_scale", "2");
  cfg.set("problem.phi", "porous-medium");
  cfg.set("problem.phi_scale", "0.5");
  cfg.set("problem.phi_p", "2");
  cfg.set("problem.sigma", "clamp");
  cfg.set("problem.sigma_amp", "0.2");
  cfg.set("problem.jump", "linear");
  cfg.set("problem.jump_amp", "0.1");
  cfg.set("noise.rate", "2");
  cfg.set("problem.u0", "box");
  cfg.set("problem.u0_amp", "1");
  cfg.set("problem.u0_width", "1");
  cfg.set("grid.dim", "1");
  cfg.set("grid.n", "32");
  cfg.set("grid.half_width", "2");

  const auto spec = harness::build_problem(cfg);
  CHECK(spec.flux.kind == model::FluxKind::Burgers);
  CHECK(spec.flux.value(0.5, 0) == doctest::Approx(2.0 * 0.125));
  CHECK(spec.phi.kind == model::DiffusionKind::PorousMedium);
  CHECK(spec.sigma.kind == model::SigmaKind::Clamp);
  CHECK(spec.jump.kind == model::JumpKind::Linear);
  CHECK(spec.mark.rate == 2.0);
  CHECK(spec.has_jumps());
  CHECK(spec.u0.sup_bound() == doctest::Approx(1.0));

  const auto grid = harness::build_grid(cfg);
  CHECK(grid.dim == 1);
  CHECK(grid.n == 32);
  CHECK(grid.half_width == 2.0);

  // Sanity limits on the grid keys.
  harness::ExperimentConfig bad = cfg;
  bad.set("grid.dim", "3");
  CHECK_THROWS_AS((void)harness::build_grid(bad), std::invalid_argument);
  bad.set("grid.dim", "1");
  bad.set("grid.n", "2");
  CHECK_THROWS_AS((void)harness::build_grid(bad), std::invalid_argument);

  harness::ExperimentConfig badp = cfg;
  badp.set("problem.flux", "no-such-flux");
  CHECK_THROWS_AS((void)harness::build_problem(badp), std::invalid_argument);

  // Secondary data: defaults to a shifted copy of u0.
  const auto u0b = harness::build_initial_b(cfg);
  CHECK(u0b.sup_bound() == doctest::Approx(1.0));
  harness::ExperimentConfig cfgb = cfg;
  cfgb.set("problem.u0b", "gaussian");
  cfgb.set("problem.u0b_amp", "0.5");
  const auto u0b2 = harness::build_initial_b(cfgb);
  CHECK(u0b2.sup_bound() == doctest::Approx(0.5));
}

TEST_CASE("reduce_rows computes column means and standard errors") {
  const std::vector<std::vector<double>> rows{{1.0, 2.0}, {3.0, 4.0},
                                              {5.0, 6.0}};
  const auto table = harness::reduce_rows(rows);
  REQUIRE(table.mean.size() == 2);
  CHECK(table.mean[0] == doctest::Approx(3.0));
  CHECK(table.mean[1] == doctest::Approx(4.0));
  // sample sd 2, se = 2/sqrt(3)
  CHECK(table.se[0] == doctest::Approx(1.1547005383792515));
  CHECK(table.se[1] == doctest::Approx(1.1547005383792515));

  const auto single = harness::reduce_rows({{2.5}});
  CHECK(single.mean[0] == 2.5);
  CHECK(single.se[0] == 0.0);

  CHECK_THROWS_AS((void)harness::reduce_rows({{1.0}, {1.0, 2.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)harness::reduce_rows({}), std::invalid_argument);
}

TEST_CASE("parallel_for_paths visits every index once and forwards errors") {
  std::vector<int> hits(7, 0);
  harness::parallel_for_paths(7, 3, [&](int p) { hits[size_t(p)] += 1; });
  for (int h : hits) CHECK(h == 1);

  std::vector<int> serial(5, 0);
  harness::parallel_for_paths(5, 1, [&](int p) { serial[size_t(p)] += 1; });
  for (int h : serial) CHECK(h == 1);

  CHECK_THROWS_WITH_AS(
      harness::parallel_for_paths(4, 2,
                                  [&](int p) {
                                    if (p == 2)
                                      throw std::runtime_error("path exploded");
                                  }),
      "path exploded", std::runtime_error);
}

TEST_CASE("simulate runs are worker-count invariant and self-describing") {
  auto cfg = tiny_burgers_config();
  cfg.set("problem.sigma", "clamp");
  cfg.set("problem.sigma_amp", "0.1");
  cfg.set("problem.jump", "linear");
  cfg.set("problem.jump_amp", "0.05");
  cfg.set("noise.rate", "2");
  cfg.set("ensemble.n_paths", "3");
  cfg.set("output.store_count", "5");

  const auto dir1 = scratch_dir("sim1");
  const auto dir3 = scratch_dir("sim3");
  CHECK(harness::run_simulate(cfg, 1, dir1.string()) == 0);
  CHECK(harness::run_simulate(cfg, 3, dir3.string()) == 0);

  const std::string norms1 = slurp(dir1 / "norms.csv");
  const std::string norms3 = slurp(dir3 / "norms.csv");
  CHECK(norms1 == norms3);  // byte-identical reduction
  CHECK(norms1.rfind("t,mean_l1,se_l1,mean_l2sq,se_l2sq,mean_linf\n", 0) == 0);

  // The t = 0 row reports the sampled data norms exactly (shared by all
  // paths, so zero standard error).
  {
    std::istringstream in(norms1);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    std::replace(row.begin(), row.end(), ',', ' ');
    std::istringstream cells(row);
    double t, mean_l1, se_l1;
    cells >> t >> mean_l1 >> se_l1;
    CHECK(t == 0.0);
    const auto grid = harness::build_grid(cfg);
    const auto u0 = solver::sample_initial(harness::build_problem(cfg), grid);
    CHECK(mean_l1 == doctest::Approx(solver::norm_l1(grid, u0)));
    CHECK(se_l1 == 0.0);
  }

  // Manifest: config hash echo, seed rule, and a file inventory that covers
  // the artifacts.
  const auto manifest = nlohmann::json::parse(slurp(dir1 / "manifest.json"));
  char hex[32];
  std::snprintf(hex, sizeof hex, "0x%016llx",
                static_cast<unsigned long long>(cfg.hash()));
  CHECK(manifest.at("config_hash").get<std::string>() == hex);
  CHECK(manifest.at("n_paths").get<int>() == 3);
  CHECK(manifest.at("base_seed").get<std::uint64_t>() == 7);
  CHECK(manifest.at("seed_rule").get<std::string>().find("philox") !=
        std::string::npos);
  bool saw_norms = false;
  for (const auto& f : manifest.at("files")) {
    if (f.at("path").get<std::string>() == "norms.csv") {
      saw_norms = true;
      CHECK(f.at("bytes").get<std::uint64_t>() == norms1.size());
    }
  }
  CHECK(saw_norms);
  CHECK(fs::exists(dir1 / "snapshots" / "path0_0.csv"));

  // Same config, fresh run: identical manifests up to wall-clock time.
  const auto manifest3 = nlohmann::json::parse(slurp(dir3 / "manifest.json"));
  auto a = manifest, b = manifest3;
  a.erase("wall_seconds");
  b.erase("wall_seconds");
  b["workers"] = a["workers"];
  CHECK(a == b);

  fs::remove_all(dir1);
  fs::remove_all(dir3);
}

TEST_CASE("simulate handles the t_final = 0 config") {
  auto cfg = tiny_burgers_config();
  cfg.set("solver.t_final", "0");
  cfg.set("ensemble.n_paths", "1");
  const auto dir = scratch_dir("sim0");
  CHECK(harness::run_simulate(cfg, 1, dir.string()) == 0);
  const std::string norms = slurp(dir / "norms.csv");
  // Header plus exactly one row.
  CHECK(std::count(norms.begin(), norms.end(), '\n') == 2);
  CHECK(fs::exists(dir / "snapshots" / "path0_0.csv"));
  fs::remove_all(dir);
}

TEST_CASE("recipe catalog dispatch") {
  CHECK(harness::recipe_names().size() == 9);
  harness::ExperimentConfig cfg;
  const auto dir = scratch_dir("dispatch");
  CHECK_THROWS_AS(
      (void)harness::run_recipe("no-such-recipe", cfg, 1, dir.string()),
      std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("l1-bound recipe is exact for a frozen state") {
  // All coefficients off: the state never changes, so every stored mean
  // equals the initial mass and the slack bound holds with margin.
  harness::ExperimentConfig cfg;
  cfg.set("problem.u0", "box");
  cfg.set("problem.u0_amp", "1");
  cfg.set("problem.u0_width", "1");
  cfg.set("grid.n", "32");
  cfg.set("solver.eps", "0.1");
  cfg.set("solver.t_final", "0.05");
  cfg.set("ensemble.n_paths", "2");
  const auto dir = scratch_dir("l1");
  const auto res = harness::run_recipe("l1-bound", cfg, 1, dir.string());
  CHECK(res.name == "l1-bound");
  CHECK(res.pass);
  REQUIRE(res.verdicts.size() == 1);
  const auto grid = harness::build_grid(cfg);
  const auto u0 = solver::sample_initial(harness::build_problem(cfg), grid);
  const double mass0 = solver::norm_l1(grid, u0);
  CHECK(res.verdicts[0].mean == doctest::Approx(mass0).epsilon(1e-13));
  CHECK(res.verdicts[0].budget == doctest::Approx(mass0 * 1.02));
  CHECK(res.verdicts[0].se == 0.0);
  CHECK(fs::exists(dir / "l1_bound.csv"));
  CHECK(fs::exists(dir / "l1-bound.verdicts.json"));
  const auto j = nlohmann::json::parse(slurp(dir / "l1-bound.verdicts.json"));
  CHECK(j.at("recipe") == "l1-bound");
  CHECK(j.at("pass").get<bool>());
  CHECK(j.at("verdicts").size() == 1);
  CHECK(j.at("verdicts")[0].at("verdict") == "PASS");
  fs::remove_all(dir);
}

TEST_CASE("kirchhoff-bound and dissipation recipes pass on a small problem") {
  auto cfg = tiny_burgers_config();
  cfg.set("problem.sigma", "clamp");
  cfg.set("problem.sigma_amp", "0.1");
  const auto dir = scratch_dir("energy");

  const auto rk = harness::run_recipe("kirchhoff-bound", cfg, 1, dir.string());
  CHECK(rk.pass);
  CHECK(rk.verdicts.size() == 3);  // one per level
  CHECK(fs::exists(dir / "kirchhoff_bound.csv"));

  const auto rd = harness::run_recipe("dissipation", cfg, 1, dir.string());
  CHECK(rd.pass);
  CHECK(rd.verdicts.size() == 4);  // three band widths + boundary scan
  CHECK(rd.verdicts.back().check == "boundary-layer-scan");
  CHECK(fs::exists(dir / "dissipation.csv"));
  CHECK(fs::exists(dir / "boundary_scan.csv"));
  fs::remove_all(dir);
}

TEST_CASE("contraction and gronwall recipes pass deterministically") {
  auto cfg = tiny_burgers_config();
  const auto dir = scratch_dir("pairs");

  const auto rc = harness::run_recipe("contraction", cfg, 1, dir.string());
  CHECK(rc.pass);
  CHECK(rc.verdicts.size() == 3);  // bounded + exact drift + nonincreasing
  CHECK(fs::exists(dir / "contraction.csv"));

  const auto rg = harness::run_recipe("gronwall", cfg, 1, dir.string());
  CHECK(rg.pass);
  REQUIRE(rg.verdicts.size() == 1);
  CHECK(rg.verdicts[0].parameters.find("rate_source=contraction") !=
        std::string::npos);
  CHECK(fs::exists(dir / "gronwall.csv"));
  fs::remove_all(dir);
}

TEST_CASE("cauchy-truncation and viscosity-limit recipes pass on a small problem") {
  auto cfg = tiny_burgers_config();
  cfg.set("problem.u0", "tail");
  cfg.set("problem.u0_amp", "6");
  cfg.set("check.levels", "1,2,4");
  const auto dir = scratch_dir("ladders");

  const auto rt = harness::run_recipe("cauchy-truncation", cfg, 1, dir.string());
  CHECK(rt.pass);
  CHECK(rt.verdicts.size() == 3);  // two pairs + monotone
  CHECK(fs::exists(dir / "cauchy_truncation.csv"));

  cfg.set("check.eps_ladder", "0.4,0.2,0.1");
  const auto rv = harness::run_recipe("viscosity-limit", cfg, 1, dir.string());
  CHECK(rv.pass);
  REQUIRE(rv.verdicts.size() == 1);
  CHECK(fs::exists(dir / "viscosity_limit.csv"));
  fs::remove_all(dir);
}

TEST_CASE("jump-sign recipe passes the catalog and catches the control") {
  auto cfg = tiny_burgers_config();
  const auto dir = scratch_dir("jumps");
  const auto res = harness::run_recipe("jump-sign", cfg, 1, dir.string());
  CHECK(res.pass);
  REQUIRE(res.verdicts.size() == 3);
  CHECK(res.verdicts[0].check == "jump-sign linear");
  CHECK(res.verdicts[1].check == "jump-sign bounded-ramp");
  CHECK(res.verdicts[2].check == "jump-sign-control decreasing-ramp");
  CHECK(res.verdicts[2].pass);       // the violation was detected
  CHECK(res.verdicts[2].mean > 1e-12);  // with a visible positive commutator
  CHECK(fs::exists(dir / "jump_sign.csv"));
  fs::remove_all(dir);
}

TEST_CASE("entropy-residual recipe passes and its control fires") {
  auto cfg = tiny_burgers_config();
  cfg.set("ensemble.n_paths", "1");
  // The injected expansion must beat the discretization budget: its
  // residual scales with amp^2 * t_final, the budget with dx + sqrt(dt).
  cfg.set("solver.t_final", "0.5");
  cfg.set("check.control_amp", "1.5");
  cfg.set("check.kruzkov_count", "5");
  cfg.set("check.negative_control", "1");
  const auto dir = scratch_dir("residual");
  const auto res = harness::run_recipe("entropy-residual", cfg, 1, dir.string());
  REQUIRE(res.verdicts.size() == 7);  // six test functions + control
  for (size_t j = 0; j + 1 < res.verdicts.size(); ++j)
    CHECK(res.verdicts[j].pass);
  const auto& ctrl = res.verdicts.back();
  CHECK(ctrl.check == "entropy-residual-control");
  CHECK(ctrl.pass);
  CHECK(ctrl.mean < -ctrl.budget);  // residual beyond the budget, detected
  CHECK(fs::exists(dir / "entropy_residual.csv"));
  CHECK(fs::exists(dir / "entropy-residual.verdicts.json"));
  fs::remove_all(dir);
}
