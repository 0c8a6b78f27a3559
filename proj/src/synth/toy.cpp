#include "autozoom/synth/toy.hpp"

#include <cmath>

#include "autozoom/core/errors.hpp"
#include "autozoom/core/random.hpp"
#include "autozoom/synth/trajectory.hpp"

namespace autozoom::synth {

ToyDataset make_toy_dataset(std::size_t n_clips, std::uint64_t seed, const ToyOptions& o) {
  if (n_clips < static_cast<std::size_t>(kToyClasses)) {
    throw ValidationError("toy dataset needs at least one clip per class");
  }
  const double travel = o.max_speed * static_cast<double>(o.frames - 1);
  const double margin = static_cast<double>(o.actor);
  const double W = static_cast<double>(o.frame.width), H = static_cast<double>(o.frame.height);
  if (2.0 * margin + travel >= std::min(W, H)) {
    throw ValidationError("toy frame too small for the configured motion");
  }

  std::vector<std::vector<SyntheticClip>> by_class(kToyClasses);
  for (std::size_t i = 0; i < n_clips; ++i) {
    const int label = static_cast<int>(i % kToyClasses);
    Rng rng(derive_seed(seed, i));
    const double speed = rng.uniform(o.min_speed, o.max_speed);
    // Start far enough from the edge the actor is heading toward.
    double sx = rng.uniform(margin, W - margin);
    double sy = rng.uniform(margin, H - margin);
    Point v{0.0, 0.0};
    switch (static_cast<Direction>(label)) {
      case Direction::Left:
        v.x = -speed;
        sx = rng.uniform(margin + travel, W - margin);
        break;
      case Direction::Right:
        v.x = speed;
        sx = rng.uniform(margin, W - margin - travel);
        break;
      case Direction::Up:
        v.y = -speed;
        sy = rng.uniform(margin + travel, H - margin);
        break;
      case Direction::Down:
        v.y = speed;
        sy = rng.uniform(margin, H - margin - travel);
        break;
    }
    TrajectorySpec spec{LinearMotion{v}, {sx, sy}, o.frames, o.frame};
    RenderOptions ro;
    ro.frame = o.frame;
    ro.actor_w = ro.actor_h = o.actor;
    ro.channels = 3;
    ro.noise = o.noise;
    ro.background = Background::Gradient;
    ro.seed = rng.next_u64();
    SyntheticClip clip = render_clip(gen_trajectory(spec), ro);
    clip.label = label;
    by_class[static_cast<std::size_t>(label)].push_back(std::move(clip));
  }

  ToyDataset ds;
  for (auto& clips : by_class) {
    const auto n_train = static_cast<std::size_t>(std::llround(0.8 * static_cast<double>(clips.size())));
    for (std::size_t i = 0; i < clips.size(); ++i) {
      (i < n_train ? ds.train : ds.test).push_back(std::move(clips[i]));
    }
  }
  return ds;
}

}  // namespace autozoom::synth
