#include "fpacs/median_filter.hpp"

#include <algorithm>
#include <vector>

#include "fpacs/types.hpp"

namespace fpacs {

VideoCube median_filter_3d(const VideoCube& cube, int radius_rows, int radius_cols,
                           int radius_frames) {
  cube.validate();
  if (radius_rows < 0 || radius_cols < 0 || radius_frames < 0)
    throw ConfigError("median filter radii must be >= 0");

  const int nf = cube.frame_count();
  const int nr = cube.rows();
  const int nc = cube.cols();
  auto clamp = [](int v, int n) { return v < 0 ? 0 : (v >= n ? n - 1 : v); };

  VideoCube out = cube;
  std::vector<double> window;
  window.reserve(static_cast<std::size_t>(2 * radius_frames + 1) *
                 (2 * radius_rows + 1) * (2 * radius_cols + 1));
  for (int f = 0; f < nf; ++f) {
    for (int r = 0; r < nr; ++r) {
      for (int c = 0; c < nc; ++c) {
        window.clear();
        for (int df = -radius_frames; df <= radius_frames; ++df) {
          const auto& src = cube.frames[static_cast<std::size_t>(clamp(f + df, nf))];
          for (int dr = -radius_rows; dr <= radius_rows; ++dr) {
            const int rr = clamp(r + dr, nr);
            for (int dc = -radius_cols; dc <= radius_cols; ++dc)
              window.push_back(src.at(rr, clamp(c + dc, nc)));
          }
        }
        auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
        std::nth_element(window.begin(), mid, window.end());
        out.frames[static_cast<std::size_t>(f)].at(r, c) = *mid;
      }
    }
  }
  return out;
}

}  // namespace fpacs
