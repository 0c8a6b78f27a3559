#include "autozoom/synth/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "autozoom/core/errors.hpp"
#include "autozoom/core/random.hpp"

namespace autozoom::synth {

namespace {

// Fisher-Yates with the project RNG; std::shuffle's output is not portable.
void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

bool inside(Point p, FrameSize f) {
  return p.x >= 0.0 && p.y >= 0.0 && p.x <= static_cast<double>(f.width) &&
         p.y <= static_cast<double>(f.height);
}

}  // namespace

PerturbedDetections perturb_detections(const Track& gt, const PerturbOptions& o) {
  if (o.dropout < 0.0 || o.dropout > 1.0) throw ValidationError("dropout must lie in [0,1]");
  if (o.jitter < 0.0) throw ValidationError("jitter must be non-negative");

  std::vector<std::size_t> eligible;
  if (o.keys) {
    eligible = o.keys->key_indices;
  } else {
    for (const auto& e : gt.entries()) eligible.push_back(e.frame_index);
  }
  for (auto f : eligible) gt.at(f);  // ground truth must cover every eligible frame

  Rng rng(o.seed);
  PerturbedDetections out;

  const auto n_drop = static_cast<std::size_t>(std::llround(o.dropout * static_cast<double>(eligible.size())));
  std::vector<std::size_t> order(eligible.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle(order, rng);
  std::vector<bool> dropped(eligible.size(), false);
  for (std::size_t i = 0; i < n_drop; ++i) dropped[order[i]] = true;

  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    if (dropped[i]) {
      out.dropped_frames.push_back(eligible[i]);
    } else {
      survivors.push_back(i);
    }
  }

  std::vector<bool> outlier(eligible.size(), false);
  if (o.outliers > 0) {
    if (survivors.size() < 3 + o.outliers) {
      throw ValidationError("not enough surviving detections to place " +
                            std::to_string(o.outliers) + " outliers");
    }
    std::vector<std::size_t> pool(survivors.begin() + 3, survivors.end());
    shuffle(pool, rng);
    for (std::size_t i = 0; i < o.outliers; ++i) outlier[pool[i]] = true;
  }

  for (std::size_t i = 0; i < eligible.size(); ++i) {
    if (dropped[i]) continue;
    const std::size_t frame = eligible[i];
    const BBox& truth = gt.at(frame).bbox;
    if (outlier[i]) {
      // Random direction first, then the compass points, until one fits.
      const double start = rng.uniform(0.0, 2.0 * std::numbers::pi);
      bool placed = false;
      for (int k = 0; k < 9 && !placed; ++k) {
        const double a = k == 0 ? start : (k - 1) * std::numbers::pi / 4.0;
        const Point p{truth.cx() + o.outlier_distance * std::cos(a),
                      truth.cy() + o.outlier_distance * std::sin(a)};
        if (inside(p, gt.frame_size())) {
          out.detections.by_frame[frame].push_back(
              BBox(p.x, p.y, truth.w(), truth.h(), o.outlier_score));
          placed = true;
        }
      }
      if (!placed) throw ValidationError("outlier distance does not fit inside the frame");
      out.outlier_frames.push_back(frame);
      continue;
    }
    Point c = truth.center();
    if (o.jitter > 0.0) {
      c.x = std::clamp(c.x + rng.uniform(-o.jitter, o.jitter), 0.0,
                       static_cast<double>(gt.frame_size().width));
      c.y = std::clamp(c.y + rng.uniform(-o.jitter, o.jitter), 0.0,
                       static_cast<double>(gt.frame_size().height));
    }
    out.detections.by_frame[frame].push_back(truth.with_center(c));
  }
  std::sort(out.outlier_frames.begin(), out.outlier_frames.end());
  return out;
}

TrackError track_error(const Track& predicted, const Track& gt) {
  if (predicted.frame_count() != gt.frame_count()) {
    throw ValidationError("track lengths differ: " + std::to_string(predicted.frame_count()) +
                          " vs " + std::to_string(gt.frame_count()));
  }
  if (!predicted.complete() || !gt.complete()) throw ValidationError("track_error needs complete tracks");
  TrackError err;
  if (gt.frame_count() == 0) return err;
  double sum = 0.0;
  for (std::size_t i = 0; i < gt.frame_count(); ++i) {
    const double d = center_distance(predicted.entries()[i].bbox, gt.entries()[i].bbox);
    sum += d;
    err.max = std::max(err.max, d);
  }
  err.mean = sum / static_cast<double>(gt.frame_count());
  return err;
}

}  // namespace autozoom::synth
