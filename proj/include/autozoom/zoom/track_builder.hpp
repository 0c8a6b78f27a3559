#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>

#include "autozoom/core/bbox.hpp"
#include "autozoom/core/keyframes.hpp"
#include "autozoom/core/track.hpp"
#include "autozoom/locator/detections.hpp"
#include "autozoom/locator/detector.hpp"
#include "autozoom/zoom/params.hpp"

namespace autozoom::zoom {

struct Validated {
  BBox bbox;
  Provenance provenance;
};

// Accepts the detection when its center is within `threshold` of the
// prediction; otherwise places a box of the fallback size at the prediction
// (score 0).
Validated validate(Point predicted, const std::optional<BBox>& detected, double threshold,
                   double fallback_w, double fallback_h);

// Linear blend of all four box fields at frame_index, strictly between the
// two entries. Score is the smaller endpoint score. Throws ValidationError
// outside the open interval.
BBox interpolate(const TrackEntry& before, const TrackEntry& after, std::size_t frame_index);

struct TrackBuildStats {
  std::size_t detector_calls = 0;
  std::size_t detector_failures = 0;
};

using FramePathFn = std::function<std::filesystem::path(std::size_t)>;

// Runs the key-frame detection loop.
//
// The first three key frames with a score-valid detection seed the history
// as-is; key frames skipped while seeding get boxes interpolated between (or
// copied from) the seeds. Every later key frame is extrapolated from the
// previous three key-frame centers and gated against its detection. The
// detector is called exactly once per key frame; a failing detector counts as
// "no detection". Non-key frames are interpolated.
//
// Throws BootstrapError if fewer than three valid detections exist.
Track build_track(locator::Detector& detector, const KeyFrameSchedule& schedule,
                  const ZoomParams& params, FrameSize frame_size,
                  const FramePathFn& frame_path = {}, TrackBuildStats* stats = nullptr);

Track build_track(const locator::DetectionSet& dets, const KeyFrameSchedule& schedule,
                  const ZoomParams& params, FrameSize frame_size);

}  // namespace autozoom::zoom
