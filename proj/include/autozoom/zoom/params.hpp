#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace autozoom::zoom {

struct ZoomParams {
  double keyframe_fraction = 0.10;
  double score_threshold = 0.8;
  // Gate between predicted and detected centers. When unset it adapts to the
  // target: threshold_diagonal_factor x diagonal of the last accepted box,
  // never below min_distance_threshold.
  std::optional<double> distance_threshold;
  double threshold_diagonal_factor = 0.5;
  double min_distance_threshold = 20.0;
  std::vector<std::size_t> crop_candidates{480, 640, 720, 960};
  double occupancy_low = 0.15;
  double occupancy_high = 0.20;
  std::size_t input_size = 172;
  // Lets width and height come from different candidates when no square
  // crop reaches the occupancy band.
  bool allow_rectangular = true;

  // Throws ValidationError on out-of-range values.
  void validate() const;
};

}  // namespace autozoom::zoom
