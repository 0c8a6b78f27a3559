#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "autozoom/core/frame_buffer.hpp"
#include "autozoom/reason/config.hpp"
#include "autozoom/reason/trainer.hpp"
#include "autozoom/synth/toy.hpp"
#include "autozoom/zoom/params.hpp"

namespace autozoom::cli {

// Everything that defines one run of the toy motion task.
struct ToySetup {
  std::size_t clips = 200;
  std::uint64_t seed = 7;
  synth::ToyOptions data;
  zoom::ZoomParams zoom;
  reason::ReasonConfig model;
  reason::TrainOptions train;
};

// Defaults sized for the 96x96 toy clips: 8x8 actor, 6x6 zoomed frames.
ToySetup default_toy_setup();

// Zoomed clip -> model input. Each pixel's mean over time is removed and the
// clip is scaled to unit variance, leaving the background drift the crop
// leaves behind. Attention layout is [T x (s*s*C)], conv layout
// [C x T x s x s].
tensor::Tensor clip_input(std::span<const FrameBuffer> zoomed, reason::Variant variant);

// Key-frame detections from the ground truth, build_track, auto-zoom, then
// clip_input.
reason::Example toy_example(const synth::SyntheticClip& clip, const ToySetup& setup);

struct ToyData {
  std::vector<reason::Example> train;
  std::vector<reason::Example> test;
};
ToyData prepare_toy_data(const ToySetup& setup);

struct ToyResult {
  reason::TrainReport report;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  reason::ModelWeights weights;
};

ToyResult run_toy(const ToySetup& setup);

}  // namespace autozoom::cli
