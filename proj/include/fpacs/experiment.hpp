#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpacs/pattern.hpp"
#include "fpacs/solver.hpp"
#include "fpacs/tv.hpp"
#include "fpacs/types.hpp"

namespace fpacs {

struct PatternSpec {
  PatternKind kind = PatternKind::RandomBinary;
  int count = 16;
  double density = 0.5;
  // pixel-scan / calibration group grid; 0 = one group per sensor block
  int groups_rows = 0;
  int groups_cols = 0;
};

struct SceneSpec {
  std::string kind = "bars";  // bars | checker | usaf-like | moving-box
  double frequency = 0.03125;
  int cell = 8;
  int levels = 3;
  int object_size = 0;  // moving-box edge length; 0 = one block
  double velocity_rows = 0.0;
  double velocity_cols = 1.0;
};

// The full experiment description; every field maps 1:1 onto a
// "[section] key=value" line of the plain-text config format.
struct ExperimentConfig {
  GeometryConfig geometry;
  OpticsConfig optics;
  PatternSpec patterns;
  std::optional<double> snr_db;
  SolverConfig solver;
  TvKind tv = TvKind::TV2D;
  int frame_count = 1;
  SceneSpec scene;
  std::string output_dir;  // manifest-excluded (location, not content)
  std::uint64_t base_seed = 0;
};

// Strict parser: unknown sections or keys are configuration errors.
ExperimentConfig load_config(const std::string& path);
void set_config_value(ExperimentConfig& cfg, const std::string& section,
                      const std::string& key, const std::string& value);

// Deterministic (section.key, value) listing; excludes output_dir.
std::vector<std::pair<std::string, std::string>> config_lines(
    const ExperimentConfig& cfg);

// Seeds for the independent random streams an experiment uses.
std::uint64_t pattern_seed(const ExperimentConfig& cfg);
std::uint64_t noise_seed(const ExperimentConfig& cfg);

// The pattern sequence the experiment measures with. Pixel-scan counts
// of 0 mean the full covering sequence; explicit counts truncate it.
PatternSequence make_pattern_sequence(const ExperimentConfig& cfg);

// Scene factories; the cube variant replicates static charts and
// animates "moving-box".
HiResFrame make_scene_frame(const ExperimentConfig& cfg);
VideoCube make_scene_cube(const ExperimentConfig& cfg, int n_frames);

std::uint64_t fnv1a(const void* data, std::size_t size,
                    std::uint64_t h = 14695981039346656037ULL);
std::uint64_t fnv1a_file(const std::string& path);

// manifest.txt: config lines, per-file content hashes (sorted by name),
// and a combined content hash. No timestamps, no absolute paths.
void write_manifest(const std::string& dir, const ExperimentConfig& cfg,
                    std::vector<std::string> filenames);

// Reads the config lines back out of a manifest (for reconstruct etc.).
ExperimentConfig read_manifest_config(const std::string& manifest_path);
// The combined hash line, for determinism checks.
std::string read_manifest_hash(const std::string& manifest_path);

}  // namespace fpacs
