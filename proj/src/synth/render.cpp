#include "autozoom/synth/render.hpp"

#include <algorithm>
#include <cmath>

#include "autozoom/core/errors.hpp"
#include "autozoom/core/random.hpp"

namespace autozoom::synth {

long long actor_origin(double center, std::size_t extent) noexcept {
  return std::llround(center - static_cast<double>(extent) / 2.0);
}

ActorSize actor_size_for_occupancy(FrameSize frame, double fraction, double aspect) {
  if (!(fraction > 0.0 && fraction < 1.0) || !(aspect > 0.0)) {
    throw ValidationError("occupancy fraction must lie in (0,1) and aspect be positive");
  }
  const double area = fraction * static_cast<double>(frame.width) * static_cast<double>(frame.height);
  ActorSize s;
  s.w = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::sqrt(area * aspect))));
  s.h = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(area / static_cast<double>(s.w))));
  return s;
}

std::size_t count_actor_pixels(const FrameBuffer& frame) {
  std::size_t n = 0;
  for (std::size_t y = 0; y < frame.height(); ++y)
    for (std::size_t x = 0; x < frame.width(); ++x)
      if (frame.at(x, y, 0) == kActorValue) ++n;
  return n;
}

namespace {

float background_value(const RenderOptions& o, std::size_t x, std::size_t y, std::size_t c) {
  if (o.background == Background::Flat) return kBackgroundValue;
  const double u = static_cast<double>(x) / static_cast<double>(o.frame.width);
  const double v = static_cast<double>(y) / static_cast<double>(o.frame.height);
  if (o.channels == 1) return static_cast<float>(0.15 + 0.25 * (u + v));
  switch (c) {
    case 0:
      return static_cast<float>(0.15 + 0.5 * u);
    case 1:
      return static_cast<float>(0.15 + 0.5 * v);
    default:
      return 0.4f;
  }
}

}  // namespace

SyntheticClip render_clip(const std::vector<Point>& trajectory, const RenderOptions& o) {
  if (o.actor_w == 0 || o.actor_h == 0) throw ValidationError("actor size must be positive");
  if (o.noise < 0.0 || o.noise > 0.5) throw ValidationError("noise amplitude must lie in [0, 0.5]");

  FrameBuffer background(o.frame.width, o.frame.height, o.channels);
  for (std::size_t y = 0; y < o.frame.height; ++y)
    for (std::size_t x = 0; x < o.frame.width; ++x)
      for (std::size_t c = 0; c < o.channels; ++c) background.at(x, y, c) = background_value(o, x, y, c);

  Rng rng(o.seed);
  std::vector<FrameBuffer> frames;
  std::vector<TrackEntry> entries;
  frames.reserve(trajectory.size());
  entries.reserve(trajectory.size());
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const Point p = trajectory[i];
    const long long x0 = actor_origin(p.x, o.actor_w);
    const long long y0 = actor_origin(p.y, o.actor_h);
    if (x0 < 0 || y0 < 0 || x0 + static_cast<long long>(o.actor_w) > static_cast<long long>(o.frame.width) ||
        y0 + static_cast<long long>(o.actor_h) > static_cast<long long>(o.frame.height)) {
      throw ValidationError("actor leaves the frame at step " + std::to_string(i));
    }
    FrameBuffer f = background;
    if (o.noise > 0.0) {
      for (auto& v : f.data()) {
        v = static_cast<float>(std::clamp(v + rng.uniform(-o.noise, o.noise), 0.0, 0.999));
      }
    }
    for (std::size_t y = 0; y < o.actor_h; ++y)
      for (std::size_t x = 0; x < o.actor_w; ++x)
        for (std::size_t c = 0; c < o.channels; ++c)
          f.at(static_cast<std::size_t>(x0) + x, static_cast<std::size_t>(y0) + y, c) = kActorValue;
    frames.push_back(std::move(f));
    entries.push_back({i, BBox(p.x, p.y, static_cast<double>(o.actor_w),
                               static_cast<double>(o.actor_h), 1.0),
                       Provenance::Detected});
  }
  return SyntheticClip{std::move(frames), Track(trajectory.size(), o.frame, std::move(entries)), -1};
}

}  // namespace autozoom::synth
