#include "autozoom/zoom/params.hpp"

#include <cmath>

#include "autozoom/core/errors.hpp"

namespace autozoom::zoom {

void ZoomParams::validate() const {
  if (!(keyframe_fraction > 0.0) || keyframe_fraction > 1.0) {
    throw ValidationError("keyframe fraction must lie in (0, 1]");
  }
  if (score_threshold < 0.0 || score_threshold > 1.0) {
    throw ValidationError("score threshold must lie in [0, 1]");
  }
  if (distance_threshold && !(*distance_threshold > 0.0 && std::isfinite(*distance_threshold))) {
    throw ValidationError("distance threshold must be positive");
  }
  if (!(threshold_diagonal_factor > 0.0) || min_distance_threshold < 0.0) {
    throw ValidationError("adaptive distance threshold settings must be positive");
  }
  if (crop_candidates.empty()) throw ValidationError("crop candidate list is empty");
  for (std::size_t i = 0; i < crop_candidates.size(); ++i) {
    if (crop_candidates[i] == 0 || (i > 0 && crop_candidates[i] <= crop_candidates[i - 1])) {
      throw ValidationError("crop candidates must be positive and strictly increasing");
    }
  }
  if (!(occupancy_low > 0.0 && occupancy_low < occupancy_high && occupancy_high < 1.0)) {
    throw ValidationError("occupancy range needs 0 < low < high < 1");
  }
  if (input_size == 0) throw ValidationError("input size must be at least 1");
}

}  // namespace autozoom::zoom
