#include "autozoom/core/keyframes.hpp"

#include <algorithm>
#include <cmath>

#include "autozoom/core/errors.hpp"

namespace autozoom {

bool KeyFrameSchedule::is_key(std::size_t frame_index) const noexcept {
  return std::binary_search(key_indices.begin(), key_indices.end(), frame_index);
}

KeyFrameSchedule schedule_keyframes(std::size_t frame_count, double fraction) {
  if (frame_count == 0) throw ValidationError("frame_count must be at least 1");
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw ValidationError("keyframe fraction must lie in (0, 1]");
  }
  KeyFrameSchedule s;
  s.frame_count = frame_count;
  s.stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1.0 / fraction)));
  for (std::size_t i = 0; i < frame_count; i += s.stride) s.key_indices.push_back(i);
  if (s.key_indices.back() != frame_count - 1) s.key_indices.push_back(frame_count - 1);
  return s;
}

}  // namespace autozoom
