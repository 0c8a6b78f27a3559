#include "autozoom/cli/app.hpp"

#include <CLI11.hpp>

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "autozoom/cli/image_io.hpp"
#include "autozoom/cli/manifest.hpp"
#include "autozoom/cli/toy.hpp"
#include "autozoom/core/errors.hpp"
#include "autozoom/core/keyframes.hpp"
#include "autozoom/core/random.hpp"
#include "autozoom/locator/detections.hpp"
#include "autozoom/locator/detector.hpp"
#include "autozoom/reason/checkpoint.hpp"
#include "autozoom/reason/model.hpp"
#include "autozoom/reason/trainer.hpp"
#include "autozoom/reason/weights.hpp"
#include "autozoom/synth/perturb.hpp"
#include "autozoom/synth/render.hpp"
#include "autozoom/synth/trajectory.hpp"
#include "autozoom/zoom/crop.hpp"
#include "autozoom/zoom/track_builder.hpp"

namespace autozoom::cli {

namespace fs = std::filesystem;

namespace {

using locator::format_number;

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(',', start), text.size());
    std::string item = text.substr(start, end - start);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    T v{};
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || p != item.data() + item.size()) {
      throw ValidationError(std::string("bad ") + what + " list '" + text + "'");
    }
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

Point parse_point(const std::string& text, const char* what) {
  const auto v = parse_list<double>(text, what);
  if (v.size() != 2) throw ValidationError(std::string(what) + " needs two values, got '" + text + "'");
  return {v[0], v[1]};
}

std::string frame_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%05zu.ppm", i);
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

// Options shared by every subcommand; they may appear before or after the
// subcommand and in the --config file.
struct Common {
  zoom::ZoomParams zoom;
  double distance_threshold = 0.0;
  std::string crop_sizes = "480,640,720,960";
  std::string detector;
  std::uint64_t seed = 7;
  std::string variant = "attention";

  CLI::Option* distance_opt = nullptr;
  CLI::Option* crop_opt = nullptr;
  CLI::Option* variant_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  std::map<std::string, CLI::Option*> zoom_opts;

  void add_to(CLI::App& app) {
    zoom_opts["keyframe-fraction"] =
        app.add_option("--keyframe-fraction", zoom.keyframe_fraction, "Share of frames sent to the detector");
    zoom_opts["score-threshold"] =
        app.add_option("--score-threshold", zoom.score_threshold, "Minimum detection score (exclusive)");
    distance_opt = app.add_option("--distance-threshold", distance_threshold,
                                  "Fixed prediction gate in px (adaptive when omitted)");
    crop_opt = app.add_option("--crop-sizes", crop_sizes, "Comma-separated crop side candidates");
    zoom_opts["occupancy-low"] = app.add_option("--occupancy-low", zoom.occupancy_low);
    zoom_opts["occupancy-high"] = app.add_option("--occupancy-high", zoom.occupancy_high);
    zoom_opts["input-size"] = app.add_option("--input-size", zoom.input_size, "Zoomed frame side in px");
    app.add_option("--detector", detector, "file:<path> or exec:<command>");
    seed_opt = app.add_option("--seed", seed);
    variant_opt = app.add_option("--variant", variant, "attention, conv2plus1 or conv3d");
  }

  zoom::ZoomParams params() const {
    zoom::ZoomParams p = zoom;
    if (distance_opt->count()) p.distance_threshold = distance_threshold;
    p.crop_candidates = parse_list<std::size_t>(crop_sizes, "crop size");
    p.validate();
    return p;
  }

  // Toy defaults with only the explicitly given zoom flags applied.
  zoom::ZoomParams toy_params(zoom::ZoomParams base) const {
    auto given = [&](const char* name) { return zoom_opts.at(name)->count() > 0; };
    if (given("keyframe-fraction")) base.keyframe_fraction = zoom.keyframe_fraction;
    if (given("score-threshold")) base.score_threshold = zoom.score_threshold;
    if (given("occupancy-low")) base.occupancy_low = zoom.occupancy_low;
    if (given("occupancy-high")) base.occupancy_high = zoom.occupancy_high;
    if (given("input-size")) base.input_size = zoom.input_size;
    if (distance_opt->count()) base.distance_threshold = distance_threshold;
    if (crop_opt->count()) base.crop_candidates = parse_list<std::size_t>(crop_sizes, "crop size");
    base.validate();
    return base;
  }
};

// ---- track ----

struct TrackArgs {
  std::string manifest, out;
};

int cmd_track(const Common& common, const TrackArgs& a, std::ostream& out) {
  const auto params = common.params();
  const ClipManifest m = load_manifest(a.manifest);
  if (common.detector.empty()) throw ValidationError("track needs --detector file:<path> or exec:<cmd>");
  const auto handle = locator::DetectorHandle::parse(common.detector, params.score_threshold);
  auto backend = locator::open_detector(handle);
  locator::CountingDetector counting(*backend);

  const auto schedule = schedule_keyframes(m.frame_paths.size(), params.keyframe_fraction);
  zoom::TrackBuildStats stats;
  const Track track =
      zoom::build_track(counting, schedule, params, {m.width, m.height},
                        [&](std::size_t i) { return m.frame_paths.at(i); }, &stats);
  locator::save_track(a.out, track);

  out << "frames " << track.frame_count() << '\n'
      << "key_frames " << schedule.key_indices.size() << '\n'
      << "detector_calls " << counting.calls() << '\n'
      << "detector_failures " << stats.detector_failures << '\n'
      << "provenance D=" << track.count(Provenance::Detected)
      << " P=" << track.count(Provenance::Predicted)
      << " I=" << track.count(Provenance::Interpolated) << '\n';
  return kExitOk;
}

// ---- zoom ----

struct ZoomArgs {
  std::string manifest, track, out;
};

int cmd_zoom(const Common& common, const ZoomArgs& a, std::ostream& out) {
  const auto params = common.params();
  const ClipManifest m = load_manifest(a.manifest);
  const Track track = locator::load_track(a.track, FrameSize{m.width, m.height});
  if (track.frame_size().width != m.width || track.frame_size().height != m.height) {
    throw ValidationError("track geometry differs from the manifest's");
  }
  if (track.frame_count() != m.frame_paths.size() || !track.complete()) {
    throw ValidationError("coverage gap: track has " + std::to_string(track.entries().size()) +
                          " of " + std::to_string(m.frame_paths.size()) + " manifest frames");
  }
  const auto plan = zoom::plan_zoom(track, params);

  const fs::path dir = a.out;
  ensure_dir(dir);
  ClipManifest zoomed{params.input_size, params.input_size, m.fps, {}};
  std::ostringstream report;
  report << "frame,x0,y0,width,height,occupancy\n";
  double lo = 1.0, hi = 0.0;
  std::size_t in_band = 0;
  for (std::size_t i = 0; i < m.frame_paths.size(); ++i) {
    const FrameBuffer f = read_ppm(m.frame_paths[i]);
    if (f.width() != m.width || f.height() != m.height) {
      throw ValidationError(m.frame_paths[i].string() + " does not match the manifest size");
    }
    const auto& w = plan[i].window;
    const fs::path dst = dir / frame_name(i);
    write_ppm(dst, zoom::resize_bilinear(zoom::crop(f, w), params.input_size, params.input_size));
    zoomed.frame_paths.push_back(dst);
    const double occ = plan[i].occupancy;
    report << i << ',' << w.x0 << ',' << w.y0 << ',' << w.width << ',' << w.height << ','
           << format_number(occ) << '\n';
    lo = std::min(lo, occ);
    hi = std::max(hi, occ);
    in_band += (occ >= params.occupancy_low && occ <= params.occupancy_high) ? 1 : 0;
  }
  locator::write_file_atomically(dir / "occupancy.csv", report.str());
  save_manifest(dir / "manifest.txt", zoomed);

  out << "frames " << zoomed.frame_paths.size() << '\n'
      << "occupancy_min " << format_number(lo) << '\n'
      << "occupancy_max " << format_number(hi) << '\n'
      << "frames_in_band " << in_band << '\n';
  return kExitOk;
}

// ---- reason ----

struct ReasonArgs {
  std::string mode;
  std::size_t toy = 0;
  std::string data;
  std::string checkpoint;
  std::string loss_curve;
  std::size_t epochs = 150;
  double learning_rate = 0.01;
  reason::ReasonConfig dims;
  CLI::Option* epochs_opt = nullptr;
  CLI::Option* lr_opt = nullptr;
};

// `<zoomed manifest> <label>` per line, paths relative to the list file.
std::vector<reason::Example> load_dataset(const fs::path& list, reason::Variant variant) {
  std::ifstream in(list);
  if (!in) throw IoError("cannot open dataset list " + list.string());
  std::vector<reason::Example> data;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string path;
    long long label = -1;
    if (!(fields >> path) || path[0] == '#') continue;
    if (!(fields >> label) || label < 0) {
      throw ParseError(list.string(), lineno, "expected `<manifest> <label>`");
    }
    fs::path mpath = path;
    if (mpath.is_relative()) mpath = list.parent_path() / mpath;
    const ClipManifest m = load_manifest(mpath);
    std::vector<FrameBuffer> frames;
    for (const auto& p : m.frame_paths) frames.push_back(read_ppm(p));
    data.push_back({clip_input(frames, variant), static_cast<std::size_t>(label)});
  }
  if (data.empty()) throw ValidationError("dataset list " + list.string() + " is empty");
  return data;
}

// What the data dictates about the model.
void fit_config_to_data(reason::ReasonConfig& cfg, const std::vector<reason::Example>& data) {
  const auto& shape = data.front().input.shape();
  for (const auto& ex : data) {
    if (ex.input.shape() != shape) throw ValidationError("dataset clips differ in shape");
  }
  if (cfg.variant == reason::Variant::Attention) {
    cfg.T = shape[0];
    cfg.in_features = shape[1];
  } else {
    cfg.conv.channels = shape[0];
    cfg.T = shape[1];
  }
}

void check_checkpoint(const reason::ReasonConfig& want, const reason::ReasonConfig& have,
                      bool variant_given) {
  std::string why;
  if (variant_given && want.variant != have.variant) {
    why = "variant " + std::string(reason::variant_name(have.variant)) + " vs requested " +
          std::string(reason::variant_name(want.variant));
  } else if (want.T != have.T) {
    why = "T " + std::to_string(have.T) + " vs data " + std::to_string(want.T);
  } else if (have.variant == reason::Variant::Attention && want.in_features != have.in_features) {
    why = "in_features " + std::to_string(have.in_features) + " vs data " +
          std::to_string(want.in_features);
  } else if (have.variant != reason::Variant::Attention && want.conv.channels != have.conv.channels) {
    why = "channels " + std::to_string(have.conv.channels) + " vs data " +
          std::to_string(want.conv.channels);
  } else if (want.num_classes != have.num_classes) {
    why = "num_classes " + std::to_string(have.num_classes) + " vs " + std::to_string(want.num_classes);
  }
  if (!why.empty()) throw ValidationError("checkpoint does not match: " + why);
}

int cmd_reason(const Common& common, const ReasonArgs& a, std::ostream& out) {
  const bool variant_given = common.variant_opt->count() > 0;
  if ((a.toy > 0) == !a.data.empty()) throw ValidationError("reason needs exactly one of --toy or --data");

  reason::ReasonConfig cfg = a.dims;
  cfg.variant = reason::parse_variant(common.variant);
  std::vector<reason::Example> train_set, eval_set;
  reason::TrainOptions topt;

  std::optional<reason::Checkpoint> ck;
  if (a.mode == "eval") {
    ck = reason::load_checkpoint(a.checkpoint);
    if (!variant_given) cfg.variant = ck->config.variant;
  }

  if (a.toy > 0) {
    ToySetup setup = default_toy_setup();
    setup.clips = a.toy;
    setup.seed = common.seed;
    setup.zoom = common.toy_params(setup.zoom);
    setup.model.variant = cfg.variant;
    setup.model.D = cfg.D;
    setup.model.N = cfg.N;
    setup.model.M = cfg.M;
    setup.model.S = cfg.S;
    setup.model.L = cfg.L;
    cfg = setup.model;
    topt = setup.train;
    const ToyData data = prepare_toy_data(setup);
    train_set = data.train;
    eval_set = data.test;
  } else {
    train_set = load_dataset(a.data, cfg.variant);
    eval_set = train_set;
  }
  fit_config_to_data(cfg, train_set);
  if (a.epochs_opt->count()) topt.epochs = a.epochs;
  if (a.lr_opt->count()) topt.learning_rate = a.learning_rate;

  if (a.mode == "train") {
    reason::ModelWeights w = reason::init_weights(cfg, common.seed);
    const auto report = reason::train(cfg, w, train_set, topt);
    reason::save_checkpoint(a.checkpoint, cfg, w);
    std::ostringstream csv;
    csv << "epoch,loss\n";
    for (std::size_t e = 0; e < report.loss_curve.size(); ++e) {
      csv << e << ',' << format_number(report.loss_curve[e]) << '\n';
    }
    csv << report.loss_curve.size() << ',' << format_number(report.final_loss) << '\n';
    const std::string curve = a.loss_curve.empty() ? a.checkpoint + ".loss.csv" : a.loss_curve;
    locator::write_file_atomically(curve, csv.str());
    out << "variant " << reason::variant_name(cfg.variant) << '\n'
        << "examples " << train_set.size() << '\n'
        << "initial_loss " << format_number(report.loss_curve.empty() ? report.final_loss
                                                                      : report.loss_curve.front())
        << '\n'
        << "final_loss " << format_number(report.final_loss) << '\n'
        << "train_accuracy " << format_number(reason::accuracy(cfg, w, train_set)) << '\n';
    return kExitOk;
  }

  check_checkpoint(cfg, ck->config, variant_given);
  const double acc = reason::accuracy(ck->config, ck->weights, eval_set);
  out << "variant " << reason::variant_name(ck->config.variant) << '\n'
      << "examples " << eval_set.size() << '\n'
      << "top1 " << format_number(acc) << '\n';
  return kExitOk;
}

// ---- bench ----

struct BenchArgs {
  std::string t_values = "4,8,16";
  std::string l_values = "1,2,3";
  std::size_t base_t = 8;
  std::size_t base_l = 1;
  std::string csv;
  reason::ReasonConfig dims;
};

struct BenchRow {
  std::string sweep;
  std::size_t T, L;
  std::uint64_t measured, closed_form;
  double wall_us;
};

__extension__ using Wide = __int128;

// Second divided differences vanish: (y2-y1)(x3-x2) == (y3-y2)(x2-x1).
bool exactly_affine(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pts) {
  for (std::size_t i = 2; i < pts.size(); ++i) {
    const auto [x1, y1] = pts[i - 2];
    const auto [x2, y2] = pts[i - 1];
    const auto [x3, y3] = pts[i];
    const Wide lhs = static_cast<Wide>(y2) - y1;
    const Wide rhs = static_cast<Wide>(y3) - y2;
    if (lhs * (static_cast<Wide>(x3) - x2) != rhs * (static_cast<Wide>(x2) - x1)) return false;
  }
  return true;
}

int cmd_bench(const Common& common, const BenchArgs& a, std::ostream& out, std::ostream& err) {
  reason::ReasonConfig base = a.dims;
  base.variant = reason::Variant::Attention;
  base.in_features = 0;
  base.T = a.base_t;
  base.L = a.base_l;

  std::vector<BenchRow> rows;
  auto measure = [&](const char* sweep, std::size_t T, std::size_t L) {
    reason::ReasonConfig cfg = base;
    cfg.T = T;
    cfg.L = L;
    cfg.validate();
    const auto w = reason::init_weights(cfg, common.seed);
    Rng rng(derive_seed(common.seed, T * 1000 + L));
    tensor::Tensor x({T, cfg.D});
    for (double& v : x.data()) v = rng.uniform(-1.0, 1.0);
    tensor::FlopCounter flops;
    const auto t0 = std::chrono::steady_clock::now();
    (void)reason::temporal_reason(x, cfg, w, &flops);
    const auto t1 = std::chrono::steady_clock::now();
    rows.push_back({sweep, T, L, flops.total(), reason::model_flops(cfg),
                    std::chrono::duration<double, std::micro>(t1 - t0).count()});
  };
  for (auto T : parse_list<std::size_t>(a.t_values, "T")) measure("T", T, base.L);
  for (auto L : parse_list<std::size_t>(a.l_values, "L")) measure("L", base.T, L);

  std::ostringstream csv;
  csv << "sweep,T,L,measured_flops,model_flops,wall_us\n";
  bool match = true;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> by_t, by_l;
  for (const auto& r : rows) {
    csv << r.sweep << ',' << r.T << ',' << r.L << ',' << r.measured << ',' << r.closed_form << ','
        << format_number(r.wall_us) << '\n';
    match = match && r.measured == r.closed_form;
    (r.sweep == "T" ? by_t : by_l).emplace_back(r.sweep == "T" ? r.T : r.L, r.measured);
  }
  out << csv.str();
  if (!a.csv.empty()) locator::write_file_atomically(a.csv, csv.str());

  const bool affine_t = exactly_affine(by_t);
  const bool affine_l = exactly_affine(by_l);
  out << "# closed_form_match " << (match ? "yes" : "no") << '\n'
      << "# affine_in_T " << (affine_t ? "yes" : "no") << '\n'
      << "# affine_in_L " << (affine_l ? "yes" : "no") << '\n';
  if (!(match && affine_t && affine_l)) {
    err << "error: FLOP counts are not exactly affine / do not match model_flops\n";
    return kExitInvalid;
  }
  return kExitOk;
}

// ---- synth ----

struct SynthArgs {
  std::string out;
  std::size_t frames = 100;
  std::size_t width = 640, height = 360;
  std::size_t channels = 1;
  std::size_t actor_w = 32, actor_h = 64;
  double occupancy = 0.0;
  std::string motion = "linear";
  std::string velocity = "3,1";
  std::string start;
  double radius = 100.0;
  double angular_step = 0.05;
  double amplitude = 20.0;
  double period = 30.0;
  double noise = 0.0;
  std::string background = "flat";
  double fps = 30.0;
  double dropout = 0.0;
  double jitter = 0.0;
  std::size_t outliers = 0;
  double outlier_distance = 200.0;
  bool key_frames_only = false;
  CLI::Option* occupancy_opt = nullptr;
};

int cmd_synth(const Common& common, const SynthArgs& a, std::ostream& out) {
  if (a.frames == 0) throw ValidationError("synth needs at least one frame");
  const FrameSize size{a.width, a.height};
  synth::RenderOptions ro;
  ro.frame = size;
  ro.channels = a.channels;
  ro.noise = a.noise;
  ro.seed = derive_seed(common.seed, 1);
  if (a.background == "flat") {
    ro.background = synth::Background::Flat;
  } else if (a.background == "gradient") {
    ro.background = synth::Background::Gradient;
  } else {
    throw ValidationError("unknown background '" + a.background + "' (flat or gradient)");
  }
  if (a.occupancy_opt->count()) {
    if (!(a.occupancy > 0.0 && a.occupancy < 1.0)) throw ValidationError("occupancy must be in (0,1)");
    const auto actor = synth::actor_size_for_occupancy(size, a.occupancy);
    ro.actor_w = actor.w;
    ro.actor_h = actor.h;
  } else {
    ro.actor_w = a.actor_w;
    ro.actor_h = a.actor_h;
  }

  synth::TrajectorySpec spec;
  spec.n_frames = a.frames;
  spec.bounds = size;
  spec.start = a.start.empty() ? Point{a.width / 2.0, a.height / 2.0} : parse_point(a.start, "start");
  if (a.motion == "linear") {
    spec.motion = synth::LinearMotion{parse_point(a.velocity, "velocity")};
  } else if (a.motion == "circular") {
    spec.motion = synth::CircularMotion{a.radius, a.angular_step, 0.0};
  } else if (a.motion == "sinusoidal") {
    spec.motion = synth::SinusoidalMotion{parse_point(a.velocity, "velocity"), a.amplitude, a.period};
  } else {
    throw ValidationError("unknown motion '" + a.motion + "' (linear, circular or sinusoidal)");
  }

  const synth::SyntheticClip clip = synth::render_clip(synth::gen_trajectory(spec), ro);

  synth::PerturbOptions po;
  po.dropout = a.dropout;
  po.jitter = a.jitter;
  po.outliers = a.outliers;
  po.outlier_distance = a.outlier_distance;
  po.seed = derive_seed(common.seed, 2);
  if (a.key_frames_only) po.keys = schedule_keyframes(a.frames, common.zoom.keyframe_fraction);
  const auto dets = synth::perturb_detections(clip.gt_track, po);

  const fs::path dir = a.out;
  ensure_dir(dir);
  ClipManifest m{a.width, a.height, a.fps, {}};
  for (std::size_t i = 0; i < clip.frames.size(); ++i) {
    const fs::path p = dir / frame_name(i);
    write_ppm(p, clip.frames[i]);
    m.frame_paths.push_back(p);
  }
  save_manifest(dir / "manifest.txt", m);
  locator::save_track(dir / "gt_track.txt", clip.gt_track);
  locator::save_detections(dir / "detections.txt", dets.detections);

  const double occ = static_cast<double>(ro.actor_w * ro.actor_h) /
                     static_cast<double>(a.width * a.height);
  out << "frames " << clip.frames.size() << '\n'
      << "actor " << ro.actor_w << 'x' << ro.actor_h << '\n'
      << "occupancy " << format_number(occ) << '\n'
      << "detections " << dets.detections.box_count() << '\n'
      << "dropped " << dets.dropped_frames.size() << '\n'
      << "outliers " << dets.outlier_frames.size() << '\n';
  return kExitOk;
}

void add_dims(CLI::App& app, reason::ReasonConfig& d) {
  app.add_option("--D", d.D, "Frame embedding width");
  app.add_option("--N", d.N, "Latent queries");
  app.add_option("--M", d.M, "Latent width");
  app.add_option("--S", d.S, "Key/value width");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Auto-zoom target tracking and temporal reasoning"};
  app.name("autozoom");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat `key = value` file; flags override it");

  Common common;
  common.add_to(app);

  TrackArgs ta;
  auto* track = app.add_subcommand("track", "Build a track from key-frame detections");
  track->add_option("--manifest", ta.manifest)->required();
  track->add_option("--out", ta.out, "Track file to write")->required();

  ZoomArgs za;
  auto* zoomc = app.add_subcommand("zoom", "Crop and rescale every frame around the track");
  zoomc->add_option("--manifest", za.manifest)->required();
  zoomc->add_option("--track", za.track)->required();
  zoomc->add_option("--out", za.out, "Output directory")->required();

  ReasonArgs ra;
  auto* reasonc = app.add_subcommand("reason", "Train or evaluate the temporal reasoning model");
  reasonc->add_option("mode", ra.mode)->required()->check(CLI::IsMember({"train", "eval"}));
  reasonc->add_option("--toy", ra.toy, "Use the synthetic motion task with this many clips");
  reasonc->add_option("--data", ra.data, "List of `<zoomed manifest> <label>` lines");
  reasonc->add_option("--checkpoint", ra.checkpoint)->required();
  reasonc->add_option("--loss-curve", ra.loss_curve, "CSV path (default <checkpoint>.loss.csv)");
  ra.epochs_opt = reasonc->add_option("--epochs", ra.epochs);
  ra.lr_opt = reasonc->add_option("--lr", ra.learning_rate);
  add_dims(*reasonc, ra.dims);
  reasonc->add_option("--L", ra.dims.L, "Self-attention layers");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Exact FLOP counts over T and L sweeps");
  bench->add_option("--T", ba.t_values, "Comma-separated T values");
  bench->add_option("--L", ba.l_values, "Comma-separated L values");
  bench->add_option("--base-T", ba.base_t, "T used for the L sweep");
  bench->add_option("--base-L", ba.base_l, "L used for the T sweep");
  bench->add_option("--csv", ba.csv);
  add_dims(*bench, ba.dims);

  SynthArgs sa;
  auto* synthc = app.add_subcommand("synth", "Render a synthetic clip with ground truth");
  synthc->add_option("--out", sa.out, "Output directory")->required();
  synthc->add_option("--frames", sa.frames);
  synthc->add_option("--width", sa.width);
  synthc->add_option("--height", sa.height);
  synthc->add_option("--channels", sa.channels);
  synthc->add_option("--actor-w", sa.actor_w);
  synthc->add_option("--actor-h", sa.actor_h);
  sa.occupancy_opt = synthc->add_option("--occupancy", sa.occupancy, "Actor area as a frame fraction");
  synthc->add_option("--motion", sa.motion, "linear, circular or sinusoidal");
  synthc->add_option("--velocity", sa.velocity, "vx,vy in px/frame");
  synthc->add_option("--start", sa.start, "x,y (default frame center)");
  synthc->add_option("--radius", sa.radius);
  synthc->add_option("--angular-step", sa.angular_step, "rad/frame");
  synthc->add_option("--amplitude", sa.amplitude);
  synthc->add_option("--period", sa.period);
  synthc->add_option("--noise", sa.noise);
  synthc->add_option("--background", sa.background, "flat or gradient");
  synthc->add_option("--fps", sa.fps);
  synthc->add_option("--dropout", sa.dropout);
  synthc->add_option("--jitter", sa.jitter);
  synthc->add_option("--outliers", sa.outliers);
  synthc->add_option("--outlier-distance", sa.outlier_distance);
  synthc->add_flag("--key-frames-only", sa.key_frames_only, "Perturb and emit key frames only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (track->parsed()) return cmd_track(common, ta, out);
    if (zoomc->parsed()) return cmd_zoom(common, za, out);
    if (reasonc->parsed()) return cmd_reason(common, ra, out);
    if (bench->parsed()) return cmd_bench(common, ba, out, err);
    if (synthc->parsed()) return cmd_synth(common, sa, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitInvalid;
}

}  // namespace autozoom::cli
