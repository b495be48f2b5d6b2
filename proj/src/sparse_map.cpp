#include "fpacs/sparse_map.hpp"

#include <fstream>
#include <sstream>

#include "fpacs/binary_io.hpp"

namespace fpacs {

void SparseMap::validate() const {
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const MapEntry& e = entries[k];
    if (e.sensor_index >= n_sensor_pixels || e.dmd_index >= n_dmd_pixels)
      throw ConfigError("sparse map entry out of range");
    if (!(e.weight > 0.0)) throw ConfigError("sparse map weight must be > 0");
    if (k > 0) {
      const MapEntry& p = entries[k - 1];
      const bool ordered = p.sensor_index < e.sensor_index ||
                           (p.sensor_index == e.sensor_index && p.dmd_index < e.dmd_index);
      if (!ordered) throw ConfigError("sparse map entries not in canonical order");
    }
  }
}

bool SparseMap::operator==(const SparseMap& other) const {
  if (n_sensor_pixels != other.n_sensor_pixels || n_dmd_pixels != other.n_dmd_pixels ||
      entries.size() != other.entries.size())
    return false;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (entries[k].sensor_index != other.entries[k].sensor_index ||
        entries[k].dmd_index != other.entries[k].dmd_index ||
        entries[k].weight != other.entries[k].weight)
      return false;
  }
  return true;
}

namespace {
constexpr char kMagic[] = "FPCS";
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_sparse_map(const SparseMap& map, const std::string& path) {
  auto os = detail::open_out(path);
  os.write(kMagic, 4);
  detail::put_u32(os, kVersion);
  detail::put_u64(os, map.n_sensor_pixels);
  detail::put_u64(os, map.n_dmd_pixels);
  detail::put_u64(os, map.entries.size());
  for (const MapEntry& e : map.entries) {
    detail::put_u64(os, e.sensor_index);
    detail::put_u64(os, e.dmd_index);
    detail::put_f64(os, e.weight);
  }
  if (!os) throw IoError("write failed: " + path);
}

SparseMap load_sparse_map(const std::string& path) {
  auto is = detail::open_in(path);
  detail::expect_magic(is, kMagic, path);
  const std::uint32_t version = detail::get_u32(is);
  if (version != kVersion) throw IoError("unsupported sparse map version in " + path);
  SparseMap map;
  map.n_sensor_pixels = detail::get_u64(is);
  map.n_dmd_pixels = detail::get_u64(is);
  const std::uint64_t nnz = detail::get_u64(is);
  map.entries.resize(nnz);
  for (std::uint64_t k = 0; k < nnz; ++k) {
    map.entries[k].sensor_index = detail::get_u64(is);
    map.entries[k].dmd_index = detail::get_u64(is);
    map.entries[k].weight = detail::get_f64(is);
  }
  if (!is) throw IoError("truncated sparse map file: " + path);
  map.validate();
  return map;
}

void save_sparse_map_text(const SparseMap& map, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << map.n_sensor_pixels << ' ' << map.n_dmd_pixels << '\n';
  os.precision(17);
  for (const MapEntry& e : map.entries)
    os << e.sensor_index << ' ' << e.dmd_index << ' ' << e.weight << '\n';
  if (!os) throw IoError("write failed: " + path);
}

SparseMap load_sparse_map_text(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open for reading: " + path);
  SparseMap map;
  if (!(is >> map.n_sensor_pixels >> map.n_dmd_pixels))
    throw IoError("bad header in " + path);
  MapEntry e;
  while (is >> e.sensor_index >> e.dmd_index >> e.weight) map.entries.push_back(e);
  map.validate();
  return map;
}

}  // namespace fpacs
