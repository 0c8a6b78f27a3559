#include "autozoom/synth/trajectory.hpp"

#include <cmath>
#include <numbers>

#include "autozoom/core/errors.hpp"

namespace autozoom::synth {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::vector<Point> gen_trajectory(const TrajectorySpec& spec) {
  std::vector<Point> pts;
  pts.reserve(spec.n_frames);
  for (std::size_t i = 0; i < spec.n_frames; ++i) {
    const double k = static_cast<double>(i);
    const Point p = std::visit(
        overloaded{
            [&](const LinearMotion& m) {
              return Point{spec.start.x + k * m.velocity.x, spec.start.y + k * m.velocity.y};
            },
            [&](const CircularMotion& m) {
              if (!(m.radius > 0.0)) throw ValidationError("circular motion needs a positive radius");
              const double cx = spec.start.x - m.radius * std::cos(m.phase);
              const double cy = spec.start.y - m.radius * std::sin(m.phase);
              const double a = m.phase + k * m.angular_step;
              return Point{cx + m.radius * std::cos(a), cy + m.radius * std::sin(a)};
            },
            [&](const SinusoidalMotion& m) {
              if (!(m.period > 0.0)) throw ValidationError("sinusoidal motion needs a positive period");
              const double speed = std::hypot(m.velocity.x, m.velocity.y);
              // Unit normal to the drift; x-drift-free motion wiggles along x.
              const double nx = speed > 0.0 ? -m.velocity.y / speed : 1.0;
              const double ny = speed > 0.0 ? m.velocity.x / speed : 0.0;
              const double off = m.amplitude * std::sin(2.0 * std::numbers::pi * k / m.period);
              return Point{spec.start.x + k * m.velocity.x + off * nx,
                           spec.start.y + k * m.velocity.y + off * ny};
            },
        },
        spec.motion);
    if (!(p.x >= 0.0 && p.y >= 0.0 && p.x <= static_cast<double>(spec.bounds.width) &&
          p.y <= static_cast<double>(spec.bounds.height))) {
      throw ValidationError("trajectory leaves the frame at step " + std::to_string(i));
    }
    pts.push_back(p);
  }
  return pts;
}

}  // namespace autozoom::synth
