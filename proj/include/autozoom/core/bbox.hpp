#pragma once

#include <compare>

namespace autozoom {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Axis-aligned, center-parameterized box with a detection score.
// Sub-pixel coordinates are kept; rounding happens only when cropping.
class BBox {
 public:
  // Throws ValidationError unless w > 0, h > 0, score in [0,1] and every
  // field is finite.
  BBox(double cx, double cy, double w, double h, double score = 1.0);

  double cx() const noexcept { return cx_; }
  double cy() const noexcept { return cy_; }
  double w() const noexcept { return w_; }
  double h() const noexcept { return h_; }
  double score() const noexcept { return score_; }

  Point center() const noexcept { return {cx_, cy_}; }
  double area() const noexcept { return w_ * h_; }
  double diagonal() const noexcept;

  BBox with_center(Point c) const { return BBox(c.x, c.y, w_, h_, score_); }

  friend bool operator==(const BBox&, const BBox&) = default;

 private:
  double cx_;
  double cy_;
  double w_;
  double h_;
  double score_;
};

double center_distance(const BBox& a, const BBox& b) noexcept;
double distance(Point a, Point b) noexcept;

}  // namespace autozoom
