#include "fpacs/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fpacs/rng.hpp"
#include "fpacs/scenes.hpp"

namespace fpacs {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void bad_value(const std::string& section, const std::string& key,
                            const std::string& value) {
  throw ConfigError("bad value for [" + section + "] " + key + ": '" + value + "'");
}

long long parse_int(const std::string& section, const std::string& key,
                    const std::string& value) {
  long long out = 0;
  const auto* begin = value.data();
  const auto* end = begin + value.size();
  auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc{} || res.ptr != end) bad_value(section, key, value);
  return out;
}

std::uint64_t parse_u64(const std::string& section, const std::string& key,
                        const std::string& value) {
  std::uint64_t out = 0;
  const auto* begin = value.data();
  const auto* end = begin + value.size();
  auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc{} || res.ptr != end) bad_value(section, key, value);
  return out;
}

double parse_double(const std::string& section, const std::string& key,
                    const std::string& value) {
  if (value.empty()) bad_value(section, key, value);
  char* end = nullptr;
  const double out = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size()) bad_value(section, key, value);
  return out;
}

bool parse_bool(const std::string& section, const std::string& key,
                const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(section, key, value);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void set_config_value(ExperimentConfig& cfg, const std::string& section,
                      const std::string& key, const std::string& value) {
  auto unknown = [&]() -> ConfigError {
    return ConfigError("unknown config key: [" + section + "] " + key);
  };
  if (section == "experiment") {
    if (key == "seed") cfg.base_seed = parse_u64(section, key, value);
    else if (key == "output_dir") cfg.output_dir = value;
    else throw unknown();
  } else if (section == "geometry") {
    if (key == "dmd_rows") cfg.geometry.dmd_rows = static_cast<int>(parse_int(section, key, value));
    else if (key == "dmd_cols") cfg.geometry.dmd_cols = static_cast<int>(parse_int(section, key, value));
    else if (key == "sensor_rows") cfg.geometry.sensor_rows = static_cast<int>(parse_int(section, key, value));
    else if (key == "sensor_cols") cfg.geometry.sensor_cols = static_cast<int>(parse_int(section, key, value));
    else if (key == "block_rows") cfg.geometry.block_rows = static_cast<int>(parse_int(section, key, value));
    else if (key == "block_cols") cfg.geometry.block_cols = static_cast<int>(parse_int(section, key, value));
    else if (key == "f_dmd") cfg.geometry.f_dmd = parse_double(section, key, value);
    else throw unknown();
  } else if (section == "optics") {
    if (key == "objective_blur_sigma") cfg.optics.objective_blur_sigma = parse_double(section, key, value);
    else if (key == "relay_blur_sigma") cfg.optics.relay_blur_sigma = parse_double(section, key, value);
    else if (key == "shift_rows") cfg.optics.shift_rows = static_cast<int>(parse_int(section, key, value));
    else if (key == "shift_cols") cfg.optics.shift_cols = static_cast<int>(parse_int(section, key, value));
    else throw unknown();
  } else if (section == "patterns") {
    if (key == "kind") cfg.patterns.kind = pattern_kind_from_name(value);
    else if (key == "count") cfg.patterns.count = static_cast<int>(parse_int(section, key, value));
    else if (key == "density") cfg.patterns.density = parse_double(section, key, value);
    else if (key == "groups_rows") cfg.patterns.groups_rows = static_cast<int>(parse_int(section, key, value));
    else if (key == "groups_cols") cfg.patterns.groups_cols = static_cast<int>(parse_int(section, key, value));
    else throw unknown();
  } else if (section == "noise") {
    if (key == "snr_db") {
      if (value == "none") cfg.snr_db.reset();
      else cfg.snr_db = parse_double(section, key, value);
    } else {
      throw unknown();
    }
  } else if (section == "solver") {
    if (key == "lambda") cfg.solver.lambda = parse_double(section, key, value);
    else if (key == "max_iters") cfg.solver.max_iters = static_cast<int>(parse_int(section, key, value));
    else if (key == "inner_prox_iters") cfg.solver.inner_prox_iters = static_cast<int>(parse_int(section, key, value));
    else if (key == "tol") cfg.solver.tol = parse_double(section, key, value);
    else if (key == "step") cfg.solver.step = parse_double(section, key, value);
    else if (key == "nonneg") cfg.solver.nonneg = parse_bool(section, key, value);
    else if (key == "tv") cfg.tv = tv_kind_from_name(value);
    else if (key == "frame_count") cfg.frame_count = static_cast<int>(parse_int(section, key, value));
    else throw unknown();
  } else if (section == "scene") {
    if (key == "kind") cfg.scene.kind = value;
    else if (key == "frequency") cfg.scene.frequency = parse_double(section, key, value);
    else if (key == "cell") cfg.scene.cell = static_cast<int>(parse_int(section, key, value));
    else if (key == "levels") cfg.scene.levels = static_cast<int>(parse_int(section, key, value));
    else if (key == "object_size") cfg.scene.object_size = static_cast<int>(parse_int(section, key, value));
    else if (key == "velocity_rows") cfg.scene.velocity_rows = parse_double(section, key, value);
    else if (key == "velocity_cols") cfg.scene.velocity_cols = parse_double(section, key, value);
    else throw unknown();
  } else {
    throw ConfigError("unknown config section: [" + section + "]");
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config: " + path);
  ExperimentConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed section");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    if (section.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": key outside a section");
    set_config_value(cfg, section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return cfg;
}

std::vector<std::pair<std::string, std::string>> config_lines(
    const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](const char* k, const std::string& v) { out.emplace_back(k, v); };
  add("experiment.seed", std::to_string(cfg.base_seed));
  add("geometry.dmd_rows", std::to_string(cfg.geometry.dmd_rows));
  add("geometry.dmd_cols", std::to_string(cfg.geometry.dmd_cols));
  add("geometry.sensor_rows", std::to_string(cfg.geometry.sensor_rows));
  add("geometry.sensor_cols", std::to_string(cfg.geometry.sensor_cols));
  add("geometry.block_rows", std::to_string(cfg.geometry.block_rows));
  add("geometry.block_cols", std::to_string(cfg.geometry.block_cols));
  add("geometry.f_dmd", fmt_double(cfg.geometry.f_dmd));
  add("optics.objective_blur_sigma", fmt_double(cfg.optics.objective_blur_sigma));
  add("optics.relay_blur_sigma", fmt_double(cfg.optics.relay_blur_sigma));
  add("optics.shift_rows", std::to_string(cfg.optics.shift_rows));
  add("optics.shift_cols", std::to_string(cfg.optics.shift_cols));
  add("patterns.kind", pattern_kind_name(cfg.patterns.kind));
  add("patterns.count", std::to_string(cfg.patterns.count));
  add("patterns.density", fmt_double(cfg.patterns.density));
  add("patterns.groups_rows", std::to_string(cfg.patterns.groups_rows));
  add("patterns.groups_cols", std::to_string(cfg.patterns.groups_cols));
  add("noise.snr_db", cfg.snr_db ? fmt_double(*cfg.snr_db) : std::string("none"));
  add("solver.lambda", fmt_double(cfg.solver.lambda));
  add("solver.max_iters", std::to_string(cfg.solver.max_iters));
  add("solver.inner_prox_iters", std::to_string(cfg.solver.inner_prox_iters));
  add("solver.tol", fmt_double(cfg.solver.tol));
  add("solver.step", fmt_double(cfg.solver.step));
  add("solver.nonneg", cfg.solver.nonneg ? "true" : "false");
  add("solver.tv", tv_kind_name(cfg.tv));
  add("solver.frame_count", std::to_string(cfg.frame_count));
  add("scene.kind", cfg.scene.kind);
  add("scene.frequency", fmt_double(cfg.scene.frequency));
  add("scene.cell", std::to_string(cfg.scene.cell));
  add("scene.levels", std::to_string(cfg.scene.levels));
  add("scene.object_size", std::to_string(cfg.scene.object_size));
  add("scene.velocity_rows", fmt_double(cfg.scene.velocity_rows));
  add("scene.velocity_cols", fmt_double(cfg.scene.velocity_cols));
  return out;
}

std::uint64_t pattern_seed(const ExperimentConfig& cfg) {
  return derive_seed(cfg.base_seed, 0x501);
}

std::uint64_t noise_seed(const ExperimentConfig& cfg) {
  return derive_seed(cfg.base_seed, 0x502);
}

PatternSequence make_pattern_sequence(const ExperimentConfig& cfg) {
  const auto& spec = cfg.patterns;
  switch (spec.kind) {
    case PatternKind::RandomBinary:
      if (spec.count < 1) throw ConfigError("patterns.count must be >= 1");
      return random_binary_sequence(cfg.geometry, spec.count, spec.density,
                                    pattern_seed(cfg));
    case PatternKind::Hadamard:
      return hadamard_sequence(cfg.geometry, spec.count);
    case PatternKind::PixelScan: {
      const int gr = spec.groups_rows > 0 ? spec.groups_rows : cfg.geometry.sensor_rows;
      const int gc = spec.groups_cols > 0 ? spec.groups_cols : cfg.geometry.sensor_cols;
      PatternSequence seq = pixel_scan_sequence(cfg.geometry, gr, gc);
      if (spec.count > seq.count())
        throw ConfigError("patterns.count exceeds the pixel-scan sequence length");
      if (spec.count > 0 && spec.count < seq.count())
        seq.patterns.resize(static_cast<std::size_t>(spec.count));
      return seq;
    }
  }
  throw ConfigError("unhandled pattern kind");
}

HiResFrame make_scene_frame(const ExperimentConfig& cfg) {
  if (cfg.scene.kind == "moving-box")
    throw ConfigError("moving-box scenes need frame_count > 1");
  ChartParams params;
  params.frequency = cfg.scene.frequency;
  params.cell = cfg.scene.cell;
  params.levels = cfg.scene.levels;
  return make_chart(cfg.geometry, chart_kind_from_name(cfg.scene.kind), params);
}

VideoCube make_scene_cube(const ExperimentConfig& cfg, int n_frames) {
  if (n_frames < 1) throw ConfigError("scene cube needs at least one frame");
  if (cfg.scene.kind == "moving-box") {
    const int edge =
        cfg.scene.object_size > 0 ? cfg.scene.object_size : cfg.geometry.block_rows;
    const HiResFrame object(edge, edge, 1.0);
    return make_moving_scene(cfg.geometry, object, cfg.scene.velocity_rows,
                             cfg.scene.velocity_cols, n_frames);
  }
  VideoCube cube;
  cube.frames.assign(static_cast<std::size_t>(n_frames), make_scene_frame(cfg));
  cube.frame_rate = cfg.geometry.f_dmd;
  return cube;
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for hashing: " + path);
  std::uint64_t h = 14695981039346656037ULL;
  char buf[1 << 16];
  while (is) {
    is.read(buf, sizeof(buf));
    h = fnv1a(buf, static_cast<std::size_t>(is.gcount()), h);
  }
  return h;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void write_manifest(const std::string& dir, const ExperimentConfig& cfg,
                    std::vector<std::string> filenames) {
  std::sort(filenames.begin(), filenames.end());
  std::ostringstream file_block;
  for (const auto& name : filenames) {
    if (name.find('/') != std::string::npos)
      throw ConfigError("manifest filenames must be directory-relative: " + name);
    file_block << "file " << name << " fnv1a=" << hex64(fnv1a_file(dir + "/" + name))
               << '\n';
  }
  const std::string files = file_block.str();
  const std::uint64_t combined = fnv1a(files.data(), files.size());

  std::ofstream os(dir + "/manifest.txt");
  if (!os) throw IoError("cannot open for writing: " + dir + "/manifest.txt");
  os << "manifest_version=1\n";
  for (const auto& [k, v] : config_lines(cfg)) os << "config " << k << '=' << v << '\n';
  os << files;
  os << "content_hash=" << hex64(combined) << '\n';
  if (!os) throw IoError("write failed: " + dir + "/manifest.txt");
}

ExperimentConfig read_manifest_config(const std::string& manifest_path) {
  std::ifstream is(manifest_path);
  if (!is) throw IoError("cannot open manifest: " + manifest_path);
  ExperimentConfig cfg;
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("config ", 0) != 0) continue;
    const std::string body = line.substr(7);
    const auto dot = body.find('.');
    const auto eq = body.find('=');
    if (dot == std::string::npos || eq == std::string::npos || dot > eq)
      throw IoError("malformed manifest line: " + line);
    set_config_value(cfg, body.substr(0, dot), body.substr(dot + 1, eq - dot - 1),
                     body.substr(eq + 1));
  }
  return cfg;
}

std::string read_manifest_hash(const std::string& manifest_path) {
  std::ifstream is(manifest_path);
  if (!is) throw IoError("cannot open manifest: " + manifest_path);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("content_hash=", 0) == 0) return line.substr(13);
  }
  throw IoError("manifest has no content hash: " + manifest_path);
}

}  // namespace fpacs
