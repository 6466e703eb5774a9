#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levypde/harness/config.hpp"

namespace levypde::harness {

// Record of one run: everything needed to reproduce every output byte plus
// an inventory (size and FNV-1a hash) of the files the run wrote.
struct RunManifest {
  std::string code_version;
  std::uint64_t config_hash = 0;
  std::string config_echo;       // canonical emit of the config
  std::uint64_t base_seed = 0;
  int n_paths = 0;
  int workers = 0;
  std::string seed_rule;         // how per-path draws derive from the seed
  double wall_seconds = 0.0;

  struct FileEntry {
    std::string path;            // relative to the output directory
    std::uint64_t bytes = 0;
    std::uint64_t hash = 0;
  };
  std::vector<FileEntry> files;

  std::string to_json() const;
};

extern const char* kCodeVersion;

RunManifest make_manifest(const ExperimentConfig& cfg, int workers);
// Hashes and appends an output file (path must exist).
void record_file(RunManifest& m, const std::string& out_dir,
                 const std::string& rel_path);
void write_manifest(const RunManifest& m, const std::string& out_dir);

}  // namespace levypde::harness
