#include "fpacs/raster_io.hpp"

#include <algorithm>
#include <cmath>

#include "fpacs/binary_io.hpp"

namespace fpacs {

namespace {
constexpr char kMagic[] = "FPFR";
constexpr std::uint32_t kVersion = 1;

void save_raster(const std::vector<double>& data, int rows, int cols,
                 const std::string& path) {
  auto os = detail::open_out(path);
  os.write(kMagic, 4);
  detail::put_u32(os, kVersion);
  detail::put_u64(os, static_cast<std::uint64_t>(rows));
  detail::put_u64(os, static_cast<std::uint64_t>(cols));
  for (double v : data) detail::put_f32(os, static_cast<float>(v));
  if (!os) throw IoError("write failed: " + path);
}

void load_raster(std::vector<double>& data, int& rows, int& cols,
                 const std::string& path) {
  auto is = detail::open_in(path);
  detail::expect_magic(is, kMagic, path);
  if (detail::get_u32(is) != kVersion)
    throw IoError("unsupported raster version in " + path);
  const std::uint64_t r = detail::get_u64(is);
  const std::uint64_t c = detail::get_u64(is);
  if (r == 0 || c == 0 || r > (1u << 20) || c > (1u << 20))
    throw IoError("implausible raster dimensions in " + path);
  rows = static_cast<int>(r);
  cols = static_cast<int>(c);
  data.resize(r * c);
  for (auto& v : data) v = detail::get_f32(is);
  if (!is) throw IoError("truncated raster file: " + path);
}

}  // namespace

void save_frame_fpfr(const HiResFrame& frame, const std::string& path) {
  frame.validate_shape();
  save_raster(frame.data, frame.rows, frame.cols, path);
}

HiResFrame load_frame_fpfr(const std::string& path) {
  HiResFrame f;
  load_raster(f.data, f.rows, f.cols, path);
  return f;
}

void save_sensor_fpfr(const SensorFrame& frame, const std::string& path) {
  save_raster(frame.data, frame.rows, frame.cols, path);
}

SensorFrame load_sensor_fpfr(const std::string& path) {
  SensorFrame f;
  load_raster(f.data, f.rows, f.cols, path);
  return f;
}

void save_frame_pgm16(const HiResFrame& frame, const std::string& path, double peak) {
  frame.validate_shape();
  if (peak <= 0.0) peak = *std::max_element(frame.data.begin(), frame.data.end());
  auto os = detail::open_out(path);
  os << "P5\n" << frame.cols << ' ' << frame.rows << "\n65535\n";
  for (double v : frame.data) {
    double scaled = peak > 0.0 ? v / peak : 0.0;
    scaled = std::clamp(scaled, 0.0, 1.0);
    const auto q = static_cast<std::uint16_t>(std::lround(scaled * 65535.0));
    os.put(static_cast<char>(q >> 8));    // big-endian per the format
    os.put(static_cast<char>(q & 0xff));
  }
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace fpacs
