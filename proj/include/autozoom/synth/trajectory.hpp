#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "autozoom/core/bbox.hpp"
#include "autozoom/core/track.hpp"

namespace autozoom::synth {

struct LinearMotion {
  Point velocity;  // px per frame
};

// Constant speed, constant turn rate. The circle center sits `radius` away
// from the start point, opposite the direction `phase`.
struct CircularMotion {
  double radius = 100.0;
  double angular_step = 0.1;  // rad per frame
  double phase = 0.0;
};

// Linear drift plus a sine offset perpendicular to the drift direction.
struct SinusoidalMotion {
  Point velocity;
  double amplitude = 0.0;
  double period = 10.0;  // frames
};

using Motion = std::variant<LinearMotion, CircularMotion, SinusoidalMotion>;

struct TrajectorySpec {
  Motion motion;
  Point start;
  std::size_t n_frames = 0;
  FrameSize bounds;
};

// Throws ValidationError when a center leaves [0,W] x [0,H].
std::vector<Point> gen_trajectory(const TrajectorySpec& spec);

}  // namespace autozoom::synth
