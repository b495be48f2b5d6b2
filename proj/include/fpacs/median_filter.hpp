#pragma once

#include "fpacs/frame.hpp"

namespace fpacs {

// Per-voxel median over a (2*radius_frames+1) x (2*radius_rows+1) x
// (2*radius_cols+1) neighborhood with replicate boundary. Output values
// are always elements of the input neighborhood.
VideoCube median_filter_3d(const VideoCube& cube, int radius_rows = 1,
                           int radius_cols = 1, int radius_frames = 1);

}  // namespace fpacs
