#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scrip {

/// One experiment run: which preset, the game parameters, and the run
/// controls. Serializes to a flat JSON object with these exact keys; parsing
/// then re-serializing reproduces the text byte for byte.
struct ExperimentConfig {
  std::string experiment = "sim";
  int n = 1000;
  double m = 2.0;
  double gamma = 5.0;
  double beta = 1.0;
  double alpha = 0.1;
  double delta = 0.95;
  std::int64_t rounds = 0;           // 0: preset default
  std::vector<std::uint64_t> seeds;  // empty: preset default
  std::int64_t stride = 0;           // 0: max(1, n/10)
  std::string out = "out";
  bool plot = false;
  double scale = 1.0;                // enables the larger preset sizes when raised
  std::int64_t budget = 100'000'000;
  int threads = 0;                   // 0: library default
  int n2 = 0;                        // ratio preset: second game size (0: 2n)
  std::vector<double> deltas;        // fig5 grid (empty: preset default)
  double mGridMax = 12.0;
  double mGridStep = 0.25;
  int gammaMax = 0;                  // curve presets (0: preset default)

  void validate() const;             // throws DomainError naming the bad field
  std::string to_json_text() const;
  static ExperimentConfig from_json_text(const std::string& text);
  std::uint64_t hash() const;
};

/// Baseline configuration for each experiment id; CLI flags and config files
/// are applied on top of this.
ExperimentConfig preset(const std::string& experiment);

const std::vector<std::string>& experiment_ids();

struct ArtifactSet {
  std::string outDir;
  std::vector<std::string> files;    // relative to outDir, manifest last
  std::string manifestPath;
};

/// Runs the configured experiment, writing CSVs (plus SVGs when plot is set),
/// the fully resolved config, and a manifest with a config hash and output
/// checksums. Rerunning with the same config reproduces the CSVs byte for
/// byte.
ArtifactSet run_experiment(const ExperimentConfig& config);

/// Recomputes the checksums recorded in a manifest. False on any mismatch.
bool verify_manifest(const std::string& manifestPath);

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace scrip
