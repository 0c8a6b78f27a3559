#include "autozoom/zoom/track_builder.hpp"

#include <algorithm>
#include <vector>

#include "autozoom/core/errors.hpp"
#include "autozoom/zoom/predict.hpp"

namespace autozoom::zoom {

Validated validate(Point predicted, const std::optional<BBox>& detected, double threshold,
                   double fallback_w, double fallback_h) {
  if (detected && distance(predicted, detected->center()) <= threshold) {
    return {*detected, Provenance::Detected};
  }
  return {BBox(predicted.x, predicted.y, fallback_w, fallback_h, 0.0), Provenance::Predicted};
}

BBox interpolate(const TrackEntry& before, const TrackEntry& after, std::size_t frame_index) {
  if (!(before.frame_index < frame_index && frame_index < after.frame_index)) {
    throw ValidationError("interpolation frame " + std::to_string(frame_index) +
                          " outside open interval (" + std::to_string(before.frame_index) + ", " +
                          std::to_string(after.frame_index) + ")");
  }
  const double t = static_cast<double>(frame_index - before.frame_index) /
                   static_cast<double>(after.frame_index - before.frame_index);
  const BBox& a = before.bbox;
  const BBox& b = after.bbox;
  auto lerp = [t](double u, double v) { return u + (v - u) * t; };
  return BBox(lerp(a.cx(), b.cx()), lerp(a.cy(), b.cy()), lerp(a.w(), b.w()), lerp(a.h(), b.h()),
              std::min(a.score(), b.score()));
}

namespace {

Point clamp_to_frame(Point p, FrameSize frame) {
  return {std::clamp(p.x, 0.0, static_cast<double>(frame.width)),
          std::clamp(p.y, 0.0, static_cast<double>(frame.height))};
}

double gate_threshold(const ZoomParams& params, const BBox& last_detected) {
  if (params.distance_threshold) return *params.distance_threshold;
  return std::max(params.min_distance_threshold,
                  params.threshold_diagonal_factor * last_detected.diagonal());
}

// Key frames scanned before three seeds were found get boxes from the seeds:
// copied from the first seed before it, interpolated between seeds after.
void fill_unseeded(std::vector<TrackEntry>& keys) {
  std::vector<std::size_t> seeds;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (keys[i].provenance == Provenance::Detected) seeds.push_back(i);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i].provenance == Provenance::Detected) continue;
    auto next = std::upper_bound(seeds.begin(), seeds.end(), i);
    if (next == seeds.begin()) {
      const BBox& first = keys[*next].bbox;
      keys[i].bbox = BBox(first.cx(), first.cy(), first.w(), first.h(), 0.0);
    } else {
      const auto& lo = keys[*(next - 1)];
      const auto& hi = keys[*next];
      const BBox b = interpolate(lo, hi, keys[i].frame_index);
      keys[i].bbox = BBox(b.cx(), b.cy(), b.w(), b.h(), 0.0);
    }
  }
}

}  // namespace

Track build_track(locator::Detector& detector, const KeyFrameSchedule& schedule,
                  const ZoomParams& params, FrameSize frame_size, const FramePathFn& frame_path,
                  TrackBuildStats* stats) {
  params.validate();
  TrackBuildStats local;
  TrackBuildStats& st = stats ? *stats : local;

  auto observe = [&](std::size_t frame) -> std::optional<BBox> {
    ++st.detector_calls;
    std::vector<BBox> boxes;
    try {
      boxes = locator::query_detector(detector, frame,
                                      frame_path ? frame_path(frame) : std::filesystem::path());
    } catch (const DetectorUnavailable&) {
      ++st.detector_failures;
      return std::nullopt;
    }
    // Boxes centered outside the frame cannot anchor a crop.
    std::erase_if(boxes, [&](const BBox& b) { return clamp_to_frame(b.center(), frame_size) != b.center(); });
    return locator::best_detection(locator::filter_by_score(boxes, params.score_threshold));
  };

  // Placeholder box for key frames that are still waiting on seeds.
  const BBox pending(0.0, 0.0, 1.0, 1.0, 0.0);

  std::vector<TrackEntry> keys;
  keys.reserve(schedule.key_indices.size());
  std::size_t seeds = 0;
  std::size_t k = 0;
  for (; k < schedule.key_indices.size() && seeds < 3; ++k) {
    const std::size_t frame = schedule.key_indices[k];
    if (auto det = observe(frame)) {
      keys.push_back({frame, *det, Provenance::Detected});
      ++seeds;
    } else {
      keys.push_back({frame, pending, Provenance::Predicted});
    }
  }
  if (seeds < 3) {
    // Keep the invocation budget: the remaining key frames are still probed
    // so the count of valid detections is exact.
    for (; k < schedule.key_indices.size(); ++k) {
      if (observe(schedule.key_indices[k])) ++seeds;
    }
    if (seeds < 3) throw BootstrapError(seeds);
  }
  fill_unseeded(keys);

  BBox last_detected = keys.front().bbox;
  for (const auto& e : keys)
    if (e.provenance == Provenance::Detected) last_detected = e.bbox;

  for (; k < schedule.key_indices.size(); ++k) {
    const std::size_t frame = schedule.key_indices[k];
    const auto& a = keys[keys.size() - 3];
    const auto& b = keys[keys.size() - 2];
    const auto& c = keys[keys.size() - 1];
    const auto state = PredictionState::from_centers(a.bbox.center(), b.bbox.center(),
                                                     c.bbox.center());
    const double step_scale = static_cast<double>(frame - c.frame_index) /
                              static_cast<double>(c.frame_index - b.frame_index);
    const Point predicted = clamp_to_frame(predict_next(state, step_scale), frame_size);

    const auto det = observe(frame);
    auto v = validate(predicted, det, gate_threshold(params, last_detected), last_detected.w(),
                      last_detected.h());
    if (v.provenance == Provenance::Detected) last_detected = v.bbox;
    keys.push_back({frame, v.bbox, v.provenance});
  }

  std::vector<TrackEntry> entries;
  entries.reserve(schedule.frame_count);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    entries.push_back(keys[i]);
    if (i + 1 == keys.size()) break;
    for (std::size_t f = keys[i].frame_index + 1; f < keys[i + 1].frame_index; ++f) {
      entries.push_back({f, interpolate(keys[i], keys[i + 1], f), Provenance::Interpolated});
    }
  }
  return Track(schedule.frame_count, frame_size, std::move(entries));
}

Track build_track(const locator::DetectionSet& dets, const KeyFrameSchedule& schedule,
                  const ZoomParams& params, FrameSize frame_size) {
  locator::TrackFileDetector detector(dets);
  return build_track(detector, schedule, params, frame_size);
}

}  // namespace autozoom::zoom
