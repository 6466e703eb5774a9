#include "levypde/harness/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace levypde::harness {

const char* kCodeVersion = "levypde 0.1.0";

namespace {

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

RunManifest make_manifest(const ExperimentConfig& cfg, int workers) {
  RunManifest m;
  m.code_version = kCodeVersion;
  m.config_hash = cfg.hash();
  m.config_echo = cfg.emit();
  m.base_seed = static_cast<std::uint64_t>(cfg.get_int("ensemble.base_seed", 1));
  m.n_paths = static_cast<int>(cfg.get_int("ensemble.n_paths", 1));
  m.workers = workers;
  m.seed_rule =
      "philox4x32-10 keyed by (base_seed, path_index); "
      "streams: brownian=0, jump-time=1, jump-mark=2";
  return m;
}

void record_file(RunManifest& m, const std::string& out_dir,
                 const std::string& rel_path) {
  std::ifstream in(out_dir + "/" + rel_path, std::ios::binary);
  if (!in)
    throw std::runtime_error("manifest: cannot read output file " + rel_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  RunManifest::FileEntry e;
  e.path = rel_path;
  e.bytes = bytes.size();
  e.hash = fnv1a64(bytes);
  m.files.push_back(std::move(e));
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["code_version"] = code_version;
  j["config_hash"] = hex64(config_hash);
  j["config_echo"] = config_echo;
  j["base_seed"] = base_seed;
  j["n_paths"] = n_paths;
  j["workers"] = workers;
  j["seed_rule"] = seed_rule;
  j["wall_seconds"] = wall_seconds;
  j["files"] = nlohmann::json::array();
  for (const auto& f : files)
    j["files"].push_back(
        {{"path", f.path}, {"bytes", f.bytes}, {"hash", hex64(f.hash)}});
  return j.dump(2) + "\n";
}

void write_manifest(const RunManifest& m, const std::string& out_dir) {
  std::ofstream out(out_dir + "/manifest.json", std::ios::binary);
  if (!out)
    throw std::runtime_error("manifest: cannot write to " + out_dir);
  out << m.to_json();
}

}  // namespace levypde::harness
