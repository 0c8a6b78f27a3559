#include "autozoom/zoom/predict.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace autozoom::zoom {

double wrap_angle(double a) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::remainder(a, two_pi);  // [-pi, pi]
  if (a <= -std::numbers::pi) a += two_pi;
  return a;
}

PredictionState PredictionState::from_centers(Point oldest, Point previous, Point latest) {
  PredictionState s;
  s.oldest = oldest;
  s.previous = previous;
  s.latest = latest;

  const double dx0 = previous.x - oldest.x, dy0 = previous.y - oldest.y;
  const double dx1 = latest.x - previous.x, dy1 = latest.y - previous.y;
  s.prev_distance = std::hypot(dx0, dy0);
  s.distance = std::hypot(dx1, dy1);

  std::optional<double> h0, h1;
  if (s.prev_distance > 0.0) h0 = wrap_angle(std::atan2(dy0, dx0));
  if (s.distance > 0.0) h1 = wrap_angle(std::atan2(dy1, dx1));
  if (!h0) h0 = h1;
  if (!h1) h1 = h0;
  s.prev_heading = h0.value_or(0.0);
  s.heading = h1.value_or(0.0);

  s.distance_change = s.distance - s.prev_distance;
  s.turn = wrap_angle(s.heading - s.prev_heading);
  return s;
}

Point predict_next(const PredictionState& s, double step_scale) {
  const double step = (s.distance + s.distance_change) * step_scale;
  const double direction = s.heading + s.turn * step_scale;
  return {s.latest.x + step * std::cos(direction), s.latest.y + step * std::sin(direction)};
}

}  // namespace autozoom::zoom
