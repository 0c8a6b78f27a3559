#pragma once

#include <cstddef>
#include <vector>

namespace autozoom {

// Frames the detector actually runs on: {0, stride, 2*stride, ...} below
// frame_count, with the final frame always included so interpolation never
// has to extrapolate.
struct KeyFrameSchedule {
  std::size_t frame_count = 0;
  std::size_t stride = 1;
  std::vector<std::size_t> key_indices;

  bool is_key(std::size_t frame_index) const noexcept;
};

// stride = round(1 / fraction). Throws ValidationError for frame_count == 0
// or fraction outside (0, 1].
KeyFrameSchedule schedule_keyframes(std::size_t frame_count, double fraction);

}  // namespace autozoom
