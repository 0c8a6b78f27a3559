// Acceptance gate. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "autozoom/cli/toy.hpp"
#include "autozoom/core/keyframes.hpp"
#include "autozoom/core/random.hpp"
#include "autozoom/locator/detector.hpp"
#include "autozoom/reason/model.hpp"
#include "autozoom/reason/weights.hpp"
#include "autozoom/synth/perturb.hpp"
#include "autozoom/synth/render.hpp"
#include "autozoom/synth/trajectory.hpp"
#include "autozoom/tensor/gradcheck.hpp"
#include "autozoom/tensor/ops.hpp"
#include "autozoom/zoom/crop.hpp"
#include "autozoom/zoom/predict.hpp"
#include "autozoom/zoom/track_builder.hpp"
#include "support/naive.hpp"

using namespace autozoom;
using tensor::Tensor;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& check) {
  const auto t0 = Clock::now();
  Outcome r{false, ""};
  try {
    r = check();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("%s %s: %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", name, r.detail.c_str(), s);
  std::fflush(stdout);
  failures += r.pass ? 0 : 1;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Tensor rand_t(tensor::Shape s, Rng& rng) {
  Tensor t(std::move(s));
  for (double& v : t.data()) v = rng.uniform(-1.0, 1.0);
  return t;
}

std::vector<double> vec(const Tensor& t) { return {t.values().begin(), t.values().end()}; }

double diff(const std::vector<double>& a, const Tensor& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double diff(const naive::Mat& a, const Tensor& b) {
  double m = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < a[r].size(); ++c) m = std::max(m, std::abs(a[r][c] - b(r, c)));
  return m;
}

// Next key-frame center from three equally spaced ones, on lines and circles.
Outcome motion_prediction() {
  const auto t0 = Clock::now();
  Rng rng(101);
  double worst = 0.0;
  const int specs = 2000;
  for (int i = 0; i < specs; ++i) {
    const Point start{rng.uniform(200, 1700), rng.uniform(200, 900)};
    std::vector<Point> p(4);
    if (i % 2 == 0) {
      const double speed = rng.uniform(0, 40), dir = rng.uniform(-std::numbers::pi, std::numbers::pi);
      for (int k = 0; k < 4; ++k)
        p[k] = {start.x + k * speed * std::cos(dir), start.y + k * speed * std::sin(dir)};
    } else {
      const double r = rng.uniform(5, 150), step = rng.uniform(-1.2, 1.2), phase = rng.uniform(0, 6.28);
      for (int k = 0; k < 4; ++k)
        p[k] = {start.x + r * (std::cos(phase + k * step) - std::cos(phase)),
                start.y + r * (std::sin(phase + k * step) - std::sin(phase))};
    }
    const Point got = zoom::predict_next(zoom::PredictionState::from_centers(p[0], p[1], p[2]));
    worst = std::max(worst, std::hypot(got.x - p[3].x, got.y - p[3].y));
  }
  const double s = seconds_since(t0);
  return {worst < 1e-9 && s < 1.0, fmt("%.0f specs, max error %.3g px", specs, worst)};
}

// Pixel-measured occupancy after auto-zoom on 1080p clips with a 2-5% actor.
Outcome occupancy_band() {
  const auto t0 = Clock::now();
  const FrameSize size{1920, 1080};
  zoom::ZoomParams zp;
  double lo = 1.0, hi = 0.0;
  std::size_t frames = 0;
  for (int step = 0; step <= 30; ++step) {
    const double fraction = 0.02 + 0.001 * step;
    synth::RenderOptions ro;
    ro.frame = size;
    const auto actor = synth::actor_size_for_occupancy(size, fraction);
    ro.actor_w = actor.w;
    ro.actor_h = actor.h;
    const auto traj = synth::gen_trajectory(
        {synth::LinearMotion{{12.0 - step * 0.5, 4.0 - step * 0.2}}, {700, 480}, 20, size});
    const auto clip = synth::render_clip(traj, ro);
    synth::PerturbOptions po;
    po.keys = schedule_keyframes(traj.size(), zp.keyframe_fraction);
    const auto dets = synth::perturb_detections(clip.gt_track, po).detections;
    const Track track = zoom::build_track(dets, *po.keys, zp, size);
    const auto plan = zoom::plan_zoom(track, zp);
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const FrameBuffer cropped = zoom::crop(clip.frames[i], plan[i].window);
      const double occ = static_cast<double>(synth::count_actor_pixels(cropped)) /
                         static_cast<double>(cropped.width() * cropped.height());
      lo = std::min(lo, occ);
      hi = std::max(hi, occ);
      ++frames;
    }
  }
  const double s = seconds_since(t0);
  return {lo >= 0.15 && hi <= 0.22 && s < 30.0,
          fmt("%.0f frames, occupancy in [%.4f, %.4f]", static_cast<double>(frames), lo, hi)};
}

Outcome detector_budget() {
  bool ok = true;
  std::size_t clips = 0;
  for (double fraction : {0.10, 0.20}) {
    for (std::size_t n : {30u, 100u, 101u, 250u, 999u}) {
      std::vector<Point> traj;
      for (std::size_t i = 0; i < n; ++i) traj.push_back({100 + 0.5 * i, 200 + 0.2 * i});
      synth::RenderOptions ro;
      ro.frame = {1280, 720};
      std::vector<TrackEntry> e;
      for (std::size_t i = 0; i < n; ++i) e.push_back({i, BBox(traj[i].x, traj[i].y, 32, 64), Provenance::Detected});
      locator::TrackFileDetector inner(synth::perturb_detections(Track(n, ro.frame, e), {}).detections);
      locator::CountingDetector counting(inner);
      zoom::ZoomParams zp;
      zp.keyframe_fraction = fraction;
      const auto schedule = schedule_keyframes(n, fraction);
      zoom::build_track(counting, schedule, zp, ro.frame);
      ok = ok && counting.calls() == schedule.key_indices.size();
      ++clips;
    }
  }
  return {ok, fmt("%.0f clips at fractions 0.10/0.20, calls == key frames", static_cast<double>(clips))};
}

// Outliers 5x the gate away from the truth on linear and circular tracks.
Outcome outlier_rejection() {
  Rng rng(202);
  const FrameSize size{1920, 1080};
  bool never_detected = true;
  double worst_mean = 0.0;
  std::size_t outliers = 0;
  for (int c = 0; c < 60; ++c) {
    zoom::ZoomParams zp;
    synth::TrajectorySpec spec;
    spec.n_frames = 100;
    spec.bounds = size;
    spec.start = {rng.uniform(860, 1060), rng.uniform(480, 600)};
    if (c % 2 == 0) {
      spec.motion = synth::LinearMotion{{rng.uniform(-3, 3), rng.uniform(-2, 2)}};
    } else {
      spec.motion = synth::CircularMotion{rng.uniform(80, 200), rng.uniform(-0.03, 0.03), rng.uniform(0, 6.28)};
    }
    const auto traj = synth::gen_trajectory(spec);
    std::vector<TrackEntry> e;
    for (std::size_t i = 0; i < traj.size(); ++i)
      e.push_back({i, BBox(traj[i].x, traj[i].y, 32, 64), Provenance::Detected});
    const Track gt(traj.size(), size, e);
    const double gate = std::max(zp.min_distance_threshold, zp.threshold_diagonal_factor * std::hypot(32.0, 64.0));
    synth::PerturbOptions po;
    po.keys = schedule_keyframes(traj.size(), zp.keyframe_fraction);
    po.outliers = 3;
    po.outlier_distance = 5.0 * gate;
    po.seed = static_cast<std::uint64_t>(c);
    const auto pert = synth::perturb_detections(gt, po);
    const Track track = zoom::build_track(pert.detections, *po.keys, zp, size);
    for (auto f : pert.outlier_frames) never_detected = never_detected && track.at(f).provenance != Provenance::Detected;
    outliers += pert.outlier_frames.size();
    worst_mean = std::max(worst_mean, synth::track_error(track, gt).mean);
  }
  return {never_detected && worst_mean < 2.0,
          fmt("%.0f outliers, worst per-clip mean error %.3f px", static_cast<double>(outliers), worst_mean) +
              (never_detected ? ", none Detected" : ", an outlier was accepted")};
}

Outcome attention_oracle() {
  Rng rng(303);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t T = 1 + rng.below(8), N = 1 + rng.below(4), M = 1 + rng.below(8), S = 1 + rng.below(8),
                      D = 1 + rng.below(8);
    const reason::CrossAttentionWeights cw{rand_t({M, S}, rng), rand_t({D, S}, rng), rand_t({D, S}, rng),
                                           rand_t({S, M}, rng)};
    const reason::SelfAttentionWeights sw{rand_t({M, S}, rng), rand_t({M, S}, rng), rand_t({M, S}, rng),
                                          rand_t({S, M}, rng)};
    const Tensor lat = rand_t({N, M}, rng), frames = rand_t({T, D}, rng);
    using naive::to_mat;
    const auto cross_ref = naive::attention(to_mat(lat), to_mat(frames), to_mat(cw.query), to_mat(cw.key),
                                            to_mat(cw.value));
    worst = std::max(worst, diff(cross_ref, reason::cross_attention(lat, frames, cw).output));
    const auto self_ref = naive::plus(
        to_mat(lat), naive::mul(naive::attention(to_mat(lat), to_mat(lat), to_mat(sw.query), to_mat(sw.key),
                                                 to_mat(sw.value)),
                                to_mat(sw.out)));
    worst = std::max(worst, diff(self_ref, reason::self_attention(lat, sw).output));
  }
  return {worst < 1e-9, fmt("100 shapes, max deviation %.3g", worst)};
}

Outcome gradient_check() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t checked = 0;
  struct Shape {
    std::size_t T, D, N, M, S, L, in;
  };
  for (const Shape& sh : {Shape{6, 8, 3, 4, 4, 2, 5}, Shape{4, 5, 2, 3, 6, 1, 0}, Shape{3, 4, 1, 2, 2, 0, 7}}) {
    reason::ReasonConfig cfg;
    cfg.T = sh.T;
    cfg.D = sh.D;
    cfg.N = sh.N;
    cfg.M = sh.M;
    cfg.S = sh.S;
    cfg.L = sh.L;
    cfg.in_features = sh.in;
    const auto w = reason::init_weights(cfg, 17);
    Rng rng(sh.T * 100 + sh.L);
    const Tensor x = rand_t({sh.T, sh.in ? sh.in : sh.D}, rng);
    const std::size_t label = 1;
    tensor::Tape tape;
    reason::ModelGraph graph(tape, cfg, w, true);
    const auto grads =
        graph.gradients(tape.backward(tape.cross_entropy(graph.attention_logits(tape.leaf(x)), label)));
    const auto wl = reason::parameter_list(w);
    const auto gl = reason::parameter_list(grads);
    for (std::size_t p = 0; p < wl.size(); ++p) {
      if (wl[p]->size() == 0) continue;
      auto loss = [&](const Tensor& value) {
        reason::ModelWeights moved = w;
        *reason::parameter_list(moved)[p] = value;
        tensor::Tape t;
        reason::ModelGraph g(t, cfg, moved, false);
        return t.value(t.cross_entropy(g.attention_logits(t.leaf(x)), label))[0];
      };
      worst = std::max(worst, tensor::finite_diff_check(loss, *wl[p], *gl[p], 1e-5));
      checked += wl[p]->size();
    }
  }
  const double s = seconds_since(t0);
  return {worst < 1e-4 && s < 60.0,
          fmt("%.0f parameters, max relative error %.3g", static_cast<double>(checked), worst)};
}

bool exactly_affine(const std::vector<long long>& y) {
  for (std::size_t i = 2; i < y.size(); ++i)
    if (y[i] - 2 * y[i - 1] + y[i - 2] != 0) return false;
  return true;
}

Outcome complexity() {
  auto measure = [](std::size_t T, std::size_t L, bool& match) {
    reason::ReasonConfig cfg;
    cfg.T = T;
    cfg.L = L;
    const auto w = reason::init_weights(cfg, 1);
    Rng rng(T * 7 + L);
    tensor::FlopCounter c;
    reason::temporal_reason(rand_t({T, cfg.D}, rng), cfg, w, &c);
    match = match && c.total() == reason::model_flops(cfg);
    return static_cast<long long>(c.total());
  };
  bool match = true;
  std::vector<long long> by_t, by_l;
  for (std::size_t T = 1; T <= 32; ++T) by_t.push_back(measure(T, 2, match));
  for (std::size_t L = 0; L <= 8; ++L) by_l.push_back(measure(8, L, match));
  const bool at = exactly_affine(by_t), al = exactly_affine(by_l);
  return {match && at && al, std::string("closed form ") + (match ? "matches" : "differs") + ", affine in T " +
                                 (at ? "yes" : "no") + ", affine in L " + (al ? "yes" : "no")};
}

Outcome conv_equivalence() {
  Rng rng(404);
  double sep = 0.0, oracle = 0.0;
  for (int i = 0; i < 40; ++i) {
    const std::size_t C = 1 + rng.below(3), F1 = 1 + rng.below(4), F2 = 1 + rng.below(4), k = 1 + 2 * rng.below(2),
                      kt = 1 + rng.below(3), T = kt + rng.below(5), H = k + rng.below(6), W = k + rng.below(6);
    reason::ReasonConfig c3;
    c3.variant = reason::Variant::Conv3D;
    c3.conv = {C, F1, F2, k, kt, 0, 0};
    auto c2 = c3;
    c2.variant = reason::Variant::Conv2Plus1;
    reason::ConvWeights w{rand_t({F1, C, k, k}, rng), rand_t({F2, F1, kt}, rng), {}};
    w.volume = reason::separable_volume(w.spatial, w.temporal);
    const Tensor clip = rand_t({C, T, H, W}, rng);
    sep = std::max(sep, tensor::max_abs_diff(reason::conv3d_path(clip, c3, w), reason::conv_2plus1_path(clip, c2, w)));

    const std::size_t stride = 1 + rng.below(2), pad = rng.below(2);
    const Tensor k1 = rand_t({F2, C, kt}, rng), in1 = rand_t({C, T}, rng);
    oracle = std::max(oracle, diff(naive::conv1d(vec(in1), C, T, vec(k1), F2, kt, stride, pad),
                                   tensor::conv1d(in1, k1, stride, pad)));
    const Tensor k2 = rand_t({F1, C, k, k}, rng), in2 = rand_t({C, H, W}, rng);
    oracle = std::max(oracle, diff(naive::conv2d(vec(in2), C, H, W, vec(k2), F1, k, k, stride, pad),
                                   tensor::conv2d(in2, k2, stride, pad)));
    const std::size_t st = 1 + rng.below(2), pt = rng.below(2);
    const Tensor k3 = rand_t({F2, C, kt, k, k}, rng);
    std::size_t oT, oH, oW;
    oracle = std::max(oracle, diff(naive::conv3d(vec(clip), C, T, H, W, vec(k3), F2, kt, k, k, st, stride, pt, pad,
                                                 &oT, &oH, &oW),
                                   tensor::conv3d(clip, k3, {st, stride, pt, pad})));
  }
  return {sep < 1e-10 && oracle < 1e-12,
          fmt("separable vs (2D+1) %.3g, convs vs nested loops %.3g", sep, oracle)};
}

Outcome toy_task() {
  const auto t0 = Clock::now();
  const auto setup = cli::default_toy_setup();
  const auto a = cli::run_toy(setup);
  const auto b = cli::run_toy(setup);
  const double s = seconds_since(t0) / 2.0;
  bool same = a.test_accuracy == b.test_accuracy && a.report.loss_curve == b.report.loss_curve;
  const auto wa = reason::parameter_list(a.weights), wb = reason::parameter_list(b.weights);
  for (std::size_t i = 0; i < wa.size(); ++i) same = same && wa[i]->values() == wb[i]->values();
  return {a.test_accuracy >= 0.90 && same && s < 300.0,
          fmt("held-out accuracy %.3f, train %.3f, %.1f s per run", a.test_accuracy, a.train_accuracy, s) +
              (same ? ", rerun identical" : ", rerun DIFFERS")};
}

}  // namespace

int main() {
  report("motion_prediction_exact", motion_prediction);
  report("occupancy_band_1080p", occupancy_band);
  report("detector_budget", detector_budget);
  report("outlier_rejection", outlier_rejection);
  report("attention_oracle", attention_oracle);
  report("gradient_check", gradient_check);
  report("flops_affine_in_T_and_L", complexity);
  report("conv_equivalence", conv_equivalence);
  report("toy_motion_task", toy_task);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
