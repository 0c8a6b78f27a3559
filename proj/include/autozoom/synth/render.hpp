#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "autozoom/core/bbox.hpp"
#include "autozoom/core/frame_buffer.hpp"
#include "autozoom/core/track.hpp"

namespace autozoom::synth {

enum class Background {
  Flat,      // mid-gray
  Gradient,  // position-coded ramps: channel 0 grows with x, channel 1 with y
};

inline constexpr float kActorValue = 1.0f;
inline constexpr float kBackgroundValue = 0.5f;

struct RenderOptions {
  FrameSize frame{640, 360};
  std::size_t actor_w = 32;
  std::size_t actor_h = 64;
  std::size_t channels = 1;
  double noise = 0.0;  // uniform +/- amplitude on background pixels
  Background background = Background::Flat;
  std::uint64_t seed = 0;
};

struct SyntheticClip {
  std::vector<FrameBuffer> frames;
  Track gt_track;
  int label = -1;
};

// Solid actor rectangles (value 1.0) over the background. The rectangle for
// center c covers columns [round(c.x - w/2), +w) and likewise for rows. The
// ground-truth track holds the exact centers, every frame Detected, score 1.
// Throws ValidationError if the actor leaves the frame.
SyntheticClip render_clip(const std::vector<Point>& trajectory, const RenderOptions& options);

// Left/top pixel of the rendered actor along one axis.
long long actor_origin(double center, std::size_t extent) noexcept;

struct ActorSize {
  std::size_t w = 0;
  std::size_t h = 0;
};

// Actor whose area is `fraction` of the frame with w:h close to `aspect`.
ActorSize actor_size_for_occupancy(FrameSize frame, double fraction, double aspect = 2.0);

// Pixels equal to the actor value in channel 0.
std::size_t count_actor_pixels(const FrameBuffer& frame);

}  // namespace autozoom::synth
