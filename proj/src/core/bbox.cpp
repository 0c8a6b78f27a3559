#include "autozoom/core/bbox.hpp"

#include <cmath>

#include "autozoom/core/errors.hpp"

namespace autozoom {

BBox::BBox(double cx, double cy, double w, double h, double score)
    : cx_(cx), cy_(cy), w_(w), h_(h), score_(score) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(w) || !std::isfinite(h) ||
      !std::isfinite(score)) {
    throw ValidationError("bbox fields must be finite");
  }
  if (!(w > 0.0) || !(h > 0.0)) {
    throw ValidationError("bbox width and height must be positive");
  }
  if (score < 0.0 || score > 1.0) {
    throw ValidationError("bbox score must lie in [0,1]");
  }
}

double BBox::diagonal() const noexcept { return std::hypot(w_, h_); }

double distance(Point a, Point b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

double center_distance(const BBox& a, const BBox& b) noexcept {
  return distance(a.center(), b.center());
}

}  // namespace autozoom
