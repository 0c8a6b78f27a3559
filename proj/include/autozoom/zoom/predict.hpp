#pragma once

#include "autozoom/core/bbox.hpp"

namespace autozoom::zoom {

// Motion history from the three most recent key-frame centers.
//
//   distance       = |latest - previous|          (D_t)
//   prev_distance  = |previous - oldest|          (D_{t-1})
//   heading        = atan2 of previous -> latest  (theta_{t-1})
//   prev_heading   = atan2 of oldest -> previous  (theta_{t-2})
//   distance_change = distance - prev_distance
//   turn           = wrap(heading - prev_heading)
//
// A zero-length step has no direction of its own and reuses the other
// step's heading, so it never introduces a turn.
struct PredictionState {
  Point oldest;
  Point previous;
  Point latest;
  double distance = 0.0;
  double prev_distance = 0.0;
  double heading = 0.0;
  double prev_heading = 0.0;
  double distance_change = 0.0;
  double turn = 0.0;

  static PredictionState from_centers(Point oldest, Point previous, Point latest);
};

// Extrapolates one key-frame step:
//   latest + (D + dD) * (cos, sin)(heading + turn)
// step_scale stretches the step when the next key frame is closer or further
// than the history spacing (1 for an equally spaced schedule).
Point predict_next(const PredictionState& state, double step_scale = 1.0);

// Maps an angle into (-pi, pi].
double wrap_angle(double radians) noexcept;

}  // namespace autozoom::zoom
