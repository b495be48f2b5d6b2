#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpacs/types.hpp"

namespace fpacs {

// A binary DMD mask; data holds 0/1 per mirror, row-major.
struct DmdPattern {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> data;

  DmdPattern() = default;
  DmdPattern(int r, int c, std::uint8_t fill = 0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

  std::uint8_t& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  std::uint8_t at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  std::size_t size() const { return data.size(); }

  std::size_t ones_count() const {
    std::size_t n = 0;
    for (auto v : data) n += v;
    return n;
  }
};

enum class PatternKind { RandomBinary, Hadamard, PixelScan };

std::string pattern_kind_name(PatternKind kind);
PatternKind pattern_kind_from_name(const std::string& name);

struct PatternSequence {
  std::vector<DmdPattern> patterns;
  PatternKind kind = PatternKind::RandomBinary;
  std::uint64_t seed = 0;  // meaningful for RandomBinary only

  int count() const { return static_cast<int>(patterns.size()); }
  const DmdPattern& operator[](int t) const { return patterns[static_cast<std::size_t>(t)]; }
};

// Each mirror is on independently with probability `density`.
PatternSequence random_binary_sequence(const GeometryConfig& geometry, int count,
                                       double density, std::uint64_t seed);

// Per-block binarized Sylvester-Hadamard codes. Pattern t tiles every
// block with row t+1 of H_{B^2} mapped h -> (1+h)/2 and reshaped
// row-major; the all-ones DC row is skipped, so each pattern opens
// exactly half the mirrors of every block. Requires B^2 a power of two
// and count <= B^2 - 1.
PatternSequence hadamard_sequence(const GeometryConfig& geometry, int count);

// Non-multiplexed scanning: the DMD is split into a groups_rows x
// groups_cols grid (each group gets floor-size cells, the last row/col
// of groups absorbs the remainder) and pattern p opens the p-th mirror,
// in row-major order, of every group that still has one. The sequence
// covers every mirror exactly once.
PatternSequence pixel_scan_sequence(const GeometryConfig& geometry, int groups_rows,
                                    int groups_cols);

// Group extents used by pixel_scan_sequence and the calibration
// estimator; span [begin, end) along one axis for group g of n.
struct GroupExtent {
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
};
GroupExtent group_extent(int length, int groups, int g);

// Binary format: magic "FPAT", u32 version, u64 count, u64 rows,
// u64 cols, then each pattern's bits packed row-major MSB-first and
// padded to a byte boundary per pattern.
void save_pattern_sequence(const PatternSequence& seq, const std::string& path);
PatternSequence load_pattern_sequence(const std::string& path);

// Plain PBM (P1) text dump of one pattern; '1' marks an open mirror.
void save_pattern_pbm(const DmdPattern& pattern, const std::string& path);

}  // namespace fpacs
