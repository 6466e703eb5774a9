// Command-line front end: seeded ensemble simulation, named verification
// recipes, assumption audits, and run-directory reports.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "levypde/harness/config.hpp"
#include "levypde/harness/ensemble.hpp"
#include "levypde/harness/manifest.hpp"
#include "levypde/harness/recipes.hpp"
#include "levypde/model/validation.hpp"

namespace fs = std::filesystem;
using namespace levypde;

namespace {

harness::ExperimentConfig load_config(const std::string& path, long long seed) {
  harness::ExperimentConfig cfg;
  if (!path.empty()) cfg = harness::ExperimentConfig::parse_file(path);
  for (const auto& key : cfg.apply_env_overrides())
    std::fprintf(stderr, "note: %s overridden from the environment\n",
                 key.c_str());
  if (seed >= 0) cfg.set_int("ensemble.base_seed", seed);
  return cfg;
}

void print_verdicts(const harness::RecipeResult& res) {
  for (const auto& v : res.verdicts)
    std::printf("[%s] %s  mean=%.6g se=%.6g budget=%.6g  (%s)\n",
                v.pass ? "PASS" : "FAIL", v.check.c_str(), v.mean, v.se,
                v.budget, v.parameters.c_str());
  std::printf("recipe %s: %s\n", res.name.c_str(),
              res.pass ? "PASS" : "FAIL");
}

int cmd_report(const std::string& out_dir) {
  bool any_artifact = false, all_ok = true;

  const fs::path manifest_path = fs::path(out_dir) / "manifest.json";
  if (fs::exists(manifest_path)) {
    any_artifact = true;
    std::ifstream in(manifest_path, std::ios::binary);
    nlohmann::json m = nlohmann::json::parse(in);
    std::printf("manifest: %s  config=%s  base_seed=%llu  n_paths=%d  "
                "workers=%d  wall=%.3gs\n",
                m.value("code_version", std::string("?")).c_str(),
                m.value("config_hash", std::string("?")).c_str(),
                static_cast<unsigned long long>(
                    m.value("base_seed", std::uint64_t(0))),
                m.value("n_paths", 0), m.value("workers", 0),
                m.value("wall_seconds", 0.0));
    int verified = 0, mismatched = 0, missing = 0;
    for (const auto& f : m.value("files", nlohmann::json::array())) {
      const std::string rel = f.at("path").get<std::string>();
      const fs::path p = fs::path(out_dir) / rel;
      if (!fs::exists(p)) {
        std::printf("  MISSING %s\n", rel.c_str());
        ++missing;
        continue;
      }
      std::ifstream fin(p, std::ios::binary);
      std::ostringstream bytes;
      bytes << fin.rdbuf();
      char hex[32];
      std::snprintf(hex, sizeof hex, "0x%016llx",
                    static_cast<unsigned long long>(
                        harness::fnv1a64(bytes.str())));
      if (f.at("hash").get<std::string>() == hex &&
          f.at("bytes").get<std::uint64_t>() == bytes.str().size()) {
        ++verified;
      } else {
        std::printf("  MODIFIED %s\n", rel.c_str());
        ++mismatched;
      }
    }
    std::printf("files: %d verified, %d modified, %d missing\n", verified,
                mismatched, missing);
    if (mismatched > 0 || missing > 0) all_ok = false;
  }

  std::vector<fs::path> verdict_files;
  if (fs::is_directory(out_dir))
    for (const auto& e : fs::directory_iterator(out_dir)) {
      const std::string name = e.path().filename().string();
      if (name.size() > 14 &&
          name.compare(name.size() - 14, 14, ".verdicts.json") == 0)
        verdict_files.push_back(e.path());
    }
  std::sort(verdict_files.begin(), verdict_files.end());
  int n_pass = 0, n_fail = 0;
  for (const auto& p : verdict_files) {
    any_artifact = true;
    std::ifstream in(p, std::ios::binary);
    nlohmann::json j = nlohmann::json::parse(in);
    for (const auto& v : j.value("verdicts", nlohmann::json::array())) {
      const bool pass = v.value("verdict", std::string()) == "PASS";
      pass ? ++n_pass : ++n_fail;
      std::printf("[%s] %s: %s  mean=%.6g budget=%.6g\n",
                  pass ? "PASS" : "FAIL",
                  j.value("recipe", std::string("?")).c_str(),
                  v.value("check", std::string("?")).c_str(),
                  v.value("mean", 0.0), v.value("budget", 0.0));
      if (!pass) all_ok = false;
    }
  }
  if (!verdict_files.empty())
    std::printf("verdicts: %d PASS, %d FAIL\n", n_pass, n_fail);

  if (!any_artifact) {
    std::fprintf(stderr, "error: no manifest.json or *.verdicts.json in %s\n",
                 out_dir.c_str());
    return 2;
  }
  std::printf("report: %s\n", all_ok ? "PASS" : "FAIL");
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seeded simulator and verification harness for degenerate "
               "parabolic-hyperbolic SPDEs with Brownian and jump noise"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  long long seed = -1;
  int workers = 1;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path,
                    "experiment config file (key=value lines)");
    sub->add_option("--seed", seed, "override ensemble.base_seed");
    sub->add_option("--workers", workers, "worker threads for path jobs");
    sub->add_option("--out", out_dir, "output directory");
  };

  auto* sim = app.add_subcommand(
      "simulate", "run the configured ensemble; write norms.csv, snapshots, "
                  "manifest.json");
  add_common(sim);

  std::string recipe_name;
  std::string names;
  for (const auto& r : harness::recipe_names())
    names += (names.empty() ? "" : ", ") + r;
  auto* rec =
      app.add_subcommand("recipe", "run a named verification recipe");
  rec->add_option("name", recipe_name, "one of: " + names)->required();
  add_common(rec);

  int probes = 256;
  auto* val = app.add_subcommand(
      "validate", "audit the structural assumptions of the configured "
                  "problem; print the report as JSON");
  add_common(val);
  val->add_option("--probes", probes, "probe count for the assumption scan");

  auto* rep = app.add_subcommand(
      "report", "summarize verdicts and check the file inventory of a run "
                "directory");
  rep->add_option("--out", out_dir, "run directory to summarize");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      const auto cfg = load_config(config_path, seed);
      const int rc = harness::run_simulate(cfg, workers, out_dir);
      std::printf("simulate: wrote %s/norms.csv and manifest.json "
                  "(config 0x%016llx)\n",
                  out_dir.c_str(),
                  static_cast<unsigned long long>(cfg.hash()));
      return rc;
    }
    if (rec->parsed()) {
      const auto cfg = load_config(config_path, seed);
      const auto res =
          harness::run_recipe(recipe_name, cfg, workers, out_dir);
      print_verdicts(res);
      return res.pass ? 0 : 1;
    }
    if (val->parsed()) {
      const auto cfg = load_config(config_path, seed);
      const auto spec = harness::build_problem(cfg);
      const auto report = model::validate_assumptions(
          spec, probes,
          static_cast<std::uint64_t>(
              cfg.get_int("ensemble.base_seed", 1)));
      std::printf("%s\n", report.to_json().c_str());
      if (val->count("--out") > 0) {
        fs::create_directories(out_dir);
        std::ofstream out(fs::path(out_dir) / "assumptions.json",
                          std::ios::binary);
        out << report.to_json() << "\n";
      }
      return report.all_pass ? 0 : 1;
    }
    if (rep->parsed()) return cmd_report(out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
