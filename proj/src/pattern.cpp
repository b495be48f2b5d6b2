#include "fpacs/pattern.hpp"

#include <bit>
#include <fstream>

#include "fpacs/binary_io.hpp"
#include "fpacs/rng.hpp"

namespace fpacs {

std::string pattern_kind_name(PatternKind kind) {
  switch (kind) {
    case PatternKind::RandomBinary: return "random-binary";
    case PatternKind::Hadamard: return "hadamard";
    case PatternKind::PixelScan: return "pixel-scan";
  }
  throw ConfigError("unknown pattern kind");
}

PatternKind pattern_kind_from_name(const std::string& name) {
  if (name == "random-binary") return PatternKind::RandomBinary;
  if (name == "hadamard") return PatternKind::Hadamard;
  if (name == "pixel-scan") return PatternKind::PixelScan;
  throw ConfigError("unknown pattern kind: " + name);
}

PatternSequence random_binary_sequence(const GeometryConfig& geometry, int count,
                                       double density, std::uint64_t seed) {
  geometry.validate();
  if (count < 1) throw ConfigError("pattern count must be >= 1");
  if (!(density > 0.0 && density < 1.0))
    throw ConfigError("random pattern density must lie in (0,1)");

  PatternSequence seq;
  seq.kind = PatternKind::RandomBinary;
  seq.seed = seed;
  seq.patterns.reserve(count);
  SeededRng rng(seed);
  for (int t = 0; t < count; ++t) {
    DmdPattern p(geometry.dmd_rows, geometry.dmd_cols);
    for (auto& v : p.data) v = rng.bernoulli(density) ? 1 : 0;
    seq.patterns.push_back(std::move(p));
  }
  return seq;
}

PatternSequence hadamard_sequence(const GeometryConfig& geometry, int count) {
  geometry.validate();
  if (count < 1) throw ConfigError("pattern count must be >= 1");
  const unsigned n = static_cast<unsigned>(geometry.block_size());
  if (!std::has_single_bit(n))
    throw ConfigError("hadamard patterns need a power-of-two block size");
  if (count > static_cast<int>(n) - 1)
    throw ConfigError("hadamard sequence supports at most block_size - 1 patterns");

  PatternSequence seq;
  seq.kind = PatternKind::Hadamard;
  seq.patterns.reserve(count);
  for (int t = 0; t < count; ++t) {
    // Sylvester row t+1: H[r][c] = (-1)^popcount(r & c); row 0 (DC) is skipped.
    const unsigned row = static_cast<unsigned>(t) + 1;
    std::vector<std::uint8_t> code(n);
    for (unsigned c = 0; c < n; ++c)
      code[c] = (std::popcount(row & c) % 2 == 0) ? 1 : 0;

    DmdPattern p(geometry.dmd_rows, geometry.dmd_cols);
    for (int r = 0; r < geometry.dmd_rows; ++r) {
      const int br = r % geometry.block_rows;
      for (int c = 0; c < geometry.dmd_cols; ++c) {
        const int bc = c % geometry.block_cols;
        p.at(r, c) = code[static_cast<std::size_t>(br) * geometry.block_cols + bc];
      }
    }
    seq.patterns.push_back(std::move(p));
  }
  return seq;
}

GroupExtent group_extent(int length, int groups, int g) {
  const int base = length / groups;
  GroupExtent e;
  e.begin = g * base;
  e.end = (g == groups - 1) ? length : (g + 1) * base;
  return e;
}

PatternSequence pixel_scan_sequence(const GeometryConfig& geometry, int groups_rows,
                                    int groups_cols) {
  geometry.validate();
  if (groups_rows < 1 || groups_cols < 1)
    throw ConfigError("group grid must be at least 1x1");
  if (groups_rows > geometry.dmd_rows || groups_cols > geometry.dmd_cols)
    throw ConfigError("group grid exceeds DMD dimensions");

  // Sequence length = largest group area (the last row/col groups absorb
  // the division remainder).
  int max_group = 0;
  for (int gr = 0; gr < groups_rows; ++gr) {
    for (int gc = 0; gc < groups_cols; ++gc) {
      const int h = group_extent(geometry.dmd_rows, groups_rows, gr).size();
      const int w = group_extent(geometry.dmd_cols, groups_cols, gc).size();
      max_group = std::max(max_group, h * w);
    }
  }

  PatternSequence seq;
  seq.kind = PatternKind::PixelScan;
  seq.patterns.reserve(max_group);
  for (int p = 0; p < max_group; ++p) {
    DmdPattern pat(geometry.dmd_rows, geometry.dmd_cols);
    for (int gr = 0; gr < groups_rows; ++gr) {
      const GroupExtent er = group_extent(geometry.dmd_rows, groups_rows, gr);
      for (int gc = 0; gc < groups_cols; ++gc) {
        const GroupExtent ec = group_extent(geometry.dmd_cols, groups_cols, gc);
        if (p >= er.size() * ec.size()) continue;
        const int r = er.begin + p / ec.size();
        const int c = ec.begin + p % ec.size();
        pat.at(r, c) = 1;
      }
    }
    seq.patterns.push_back(std::move(pat));
  }
  return seq;
}

namespace {
constexpr char kMagic[] = "FPAT";
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_pattern_sequence(const PatternSequence& seq, const std::string& path) {
  if (seq.patterns.empty()) throw ConfigError("refusing to save empty pattern sequence");
  const int rows = seq.patterns.front().rows;
  const int cols = seq.patterns.front().cols;
  auto os = detail::open_out(path);
  os.write(kMagic, 4);
  detail::put_u32(os, kVersion);
  detail::put_u64(os, seq.patterns.size());
  detail::put_u64(os, static_cast<std::uint64_t>(rows));
  detail::put_u64(os, static_cast<std::uint64_t>(cols));
  for (const DmdPattern& p : seq.patterns) {
    if (p.rows != rows || p.cols != cols)
      throw ConfigError("pattern sequence has mixed dimensions");
    unsigned char byte = 0;
    int nbits = 0;
    for (std::uint8_t v : p.data) {
      byte = static_cast<unsigned char>((byte << 1) | (v & 1));
      if (++nbits == 8) {
        os.put(static_cast<char>(byte));
        byte = 0;
        nbits = 0;
      }
    }
    if (nbits > 0) os.put(static_cast<char>(byte << (8 - nbits)));
  }
  if (!os) throw IoError("write failed: " + path);
}

PatternSequence load_pattern_sequence(const std::string& path) {
  auto is = detail::open_in(path);
  detail::expect_magic(is, kMagic, path);
  if (detail::get_u32(is) != kVersion)
    throw IoError("unsupported pattern file version in " + path);
  const std::uint64_t count = detail::get_u64(is);
  const std::uint64_t rows = detail::get_u64(is);
  const std::uint64_t cols = detail::get_u64(is);
  PatternSequence seq;
  seq.patterns.reserve(count);
  const std::uint64_t nbytes = (rows * cols + 7) / 8;
  std::vector<char> buf(nbytes);
  for (std::uint64_t t = 0; t < count; ++t) {
    is.read(buf.data(), static_cast<std::streamsize>(nbytes));
    if (!is) throw IoError("truncated pattern file: " + path);
    DmdPattern p(static_cast<int>(rows), static_cast<int>(cols));
    for (std::uint64_t k = 0; k < rows * cols; ++k)
      p.data[k] = (static_cast<unsigned char>(buf[k / 8]) >> (7 - k % 8)) & 1;
    seq.patterns.push_back(std::move(p));
  }
  return seq;
}

void save_pattern_pbm(const DmdPattern& pattern, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "P1\n" << pattern.cols << ' ' << pattern.rows << '\n';
  for (int r = 0; r < pattern.rows; ++r) {
    for (int c = 0; c < pattern.cols; ++c) {
      os << int(pattern.at(r, c));
      os << (c + 1 == pattern.cols ? '\n' : ' ');
    }
  }
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace fpacs
