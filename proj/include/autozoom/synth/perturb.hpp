#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "autozoom/core/keyframes.hpp"
#include "autozoom/core/track.hpp"
#include "autozoom/locator/detections.hpp"

namespace autozoom::synth {

struct PerturbOptions {
  double dropout = 0.0;  // fraction of eligible detections removed
  double jitter = 0.0;   // uniform +/- px on each center coordinate
  std::size_t outliers = 0;
  double outlier_distance = 200.0;  // px from the true center
  double outlier_score = 0.9;
  std::uint64_t seed = 0;
  // Restrict to key frames; all ground-truth frames otherwise.
  std::optional<KeyFrameSchedule> keys;
};

struct PerturbedDetections {
  locator::DetectionSet detections;
  std::vector<std::size_t> dropped_frames;
  std::vector<std::size_t> outlier_frames;
};

// Turns a ground-truth track into detector output. round(dropout * n) frames
// are removed; `outliers` of the remaining frames have their box replaced by
// one `outlier_distance` away. The first three surviving frames never carry
// outliers since they seed motion prediction as-is. Deterministic per seed.
PerturbedDetections perturb_detections(const Track& gt, const PerturbOptions& options);

struct TrackError {
  double mean = 0.0;
  double max = 0.0;
};

// Per-frame center distance. Throws ValidationError on mismatched or
// incomplete tracks.
TrackError track_error(const Track& predicted, const Track& gt);

}  // namespace autozoom::synth
