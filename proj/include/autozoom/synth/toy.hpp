#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "autozoom/core/track.hpp"
#include "autozoom/synth/render.hpp"

namespace autozoom::synth {

// Class labels of the motion task.
enum class Direction : int { Left = 0, Right = 1, Up = 2, Down = 3 };
inline constexpr int kToyClasses = 4;

struct ToyOptions {
  FrameSize frame{96, 96};
  std::size_t frames = 12;
  std::size_t actor = 8;
  double min_speed = 2.0;  // px per frame
  double max_speed = 3.5;
  double noise = 0.02;
};

struct ToyDataset {
  std::vector<SyntheticClip> train;
  std::vector<SyntheticClip> test;
};

// Balanced four-direction clips on a position-coded background (the crop
// follows the actor, so motion shows up as background drift). Each class is
// split 80/20 into train/test. Deterministic per seed. Throws
// ValidationError for n_clips < 4.
ToyDataset make_toy_dataset(std::size_t n_clips, std::uint64_t seed, const ToyOptions& options = {});

}  // namespace autozoom::synth
