#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpacs/types.hpp"

namespace fpacs {

struct MapEntry {
  std::uint64_t sensor_index = 0;  // i
  std::uint64_t dmd_index = 0;     // j
  double weight = 0.0;             // C_ij > 0
};

// The sparse sensor-to-DMD response matrix C. Entries are kept in
// canonical order (sorted by sensor index, then DMD index) so that equal
// maps are byte-equal when serialized.
struct SparseMap {
  std::uint64_t n_sensor_pixels = 0;
  std::uint64_t n_dmd_pixels = 0;
  std::vector<MapEntry> entries;

  std::size_t nnz() const { return entries.size(); }

  // Checks canonical ordering, index bounds, positive weights, and the
  // absence of duplicate (i, j) pairs.
  void validate() const;

  bool operator==(const SparseMap& other) const;
};

// Binary format: magic "FPCS", u32 version, u64 n_sensor, u64 n_dmd,
// u64 nnz (all little-endian), then nnz triplets (u64 i, u64 j, f64 w)
// in canonical order.
void save_sparse_map(const SparseMap& map, const std::string& path);
SparseMap load_sparse_map(const std::string& path);

// Debug text format: "n_sensor n_dmd" on the first line, then one
// "i j w" triplet per line.
void save_sparse_map_text(const SparseMap& map, const std::string& path);
SparseMap load_sparse_map_text(const std::string& path);

}  // namespace fpacs
