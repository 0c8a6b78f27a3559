#include "autozoom/cli/toy.hpp"

#include <cmath>

#include "autozoom/core/errors.hpp"
#include "autozoom/core/keyframes.hpp"
#include "autozoom/reason/weights.hpp"
#include "autozoom/zoom/crop.hpp"
#include "autozoom/zoom/track_builder.hpp"

namespace autozoom::cli {

ToySetup default_toy_setup() {
  ToySetup s;
  s.zoom.keyframe_fraction = 0.25;
  s.zoom.crop_candidates = {18, 20, 24, 32};
  s.zoom.input_size = 6;

  const std::size_t px = s.zoom.input_size * s.zoom.input_size;
  s.model.T = s.data.frames;
  s.model.D = 16;
  s.model.N = 4;
  s.model.M = 16;
  s.model.S = 16;
  s.model.L = 1;
  s.model.num_classes = synth::kToyClasses;
  s.model.in_features = px * 3;
  s.model.conv.channels = 3;

  s.train.epochs = 150;
  s.train.learning_rate = 0.01;
  return s;
}

tensor::Tensor clip_input(std::span<const FrameBuffer> zoomed, reason::Variant variant) {
  if (zoomed.empty()) throw ValidationError("clip has no frames");
  for (const auto& f : zoomed) {
    if (f.width() != zoomed.front().width() || f.height() != f.width() ||
        f.channels() != zoomed.front().channels()) {
      throw ValidationError("clip frames must share one square size and channel count");
    }
  }
  const std::size_t T = zoomed.size();
  const std::size_t s = zoomed.front().width();
  const std::size_t C = zoomed.front().channels();
  std::vector<std::vector<double>> px(T);
  for (std::size_t t = 0; t < T; ++t) px[t].assign(zoomed[t].data().begin(), zoomed[t].data().end());
  const std::size_t F = px.front().size();
  double var = 0.0;
  for (std::size_t i = 0; i < F; ++i) {
    double mean = 0.0;
    for (std::size_t t = 0; t < T; ++t) mean += px[t][i];
    mean /= static_cast<double>(T);
    for (std::size_t t = 0; t < T; ++t) {
      px[t][i] -= mean;
      var += px[t][i] * px[t][i];
    }
  }
  const double inv_std = var > 0.0 ? 1.0 / std::sqrt(var / static_cast<double>(T * F)) : 1.0;
  for (auto& row : px)
    for (double& v : row) v *= inv_std;

  tensor::Tensor input;
  if (variant == reason::Variant::Attention) {
    input = tensor::Tensor({T, s * s * C});
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t i = 0; i < F; ++i) input(t, i) = px[t][i];
    }
  } else {
    input = tensor::Tensor({C, T, s, s});
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t y = 0; y < s; ++y)
          for (std::size_t x = 0; x < s; ++x)
            input[((c * T + t) * s + y) * s + x] = px[t][(y * s + x) * C + c];
  }
  return input;
}

reason::Example toy_example(const synth::SyntheticClip& clip, const ToySetup& setup) {
  const auto& gt = clip.gt_track;
  const auto schedule = schedule_keyframes(gt.frame_count(), setup.zoom.keyframe_fraction);
  locator::DetectionSet dets;
  for (std::size_t k : schedule.key_indices) dets.by_frame[k] = {gt.at(k).bbox};
  const Track track = zoom::build_track(dets, schedule, setup.zoom, gt.frame_size());
  const auto zoomed = zoom::auto_zoom_clip(clip.frames, track, setup.zoom);

  reason::Example ex;
  ex.input = clip_input(zoomed, setup.model.variant);
  ex.label = static_cast<std::size_t>(clip.label);
  return ex;
}

ToyData prepare_toy_data(const ToySetup& setup) {
  const auto ds = synth::make_toy_dataset(setup.clips, setup.seed, setup.data);
  ToyData out;
  for (const auto& c : ds.train) out.train.push_back(toy_example(c, setup));
  for (const auto& c : ds.test) out.test.push_back(toy_example(c, setup));
  return out;
}

ToyResult run_toy(const ToySetup& setup) {
  const ToyData data = prepare_toy_data(setup);
  ToyResult r;
  r.weights = reason::init_weights(setup.model, setup.seed);
  r.report = reason::train(setup.model, r.weights, data.train, setup.train);
  r.train_accuracy = reason::accuracy(setup.model, r.weights, data.train);
  r.test_accuracy = reason::accuracy(setup.model, r.weights, data.test);
  return r;
}

}  // namespace autozoom::cli
