#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <sys/types.h>

#include "autozoom/core/bbox.hpp"
#include "autozoom/locator/detections.hpp"

namespace autozoom::locator {

// Pluggable detection backend. Returns every box the backend reports for the
// frame, unfiltered. Implementations throw DetectorUnavailable on failure.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::vector<BBox> detect(std::size_t frame_index,
                                   const std::filesystem::path& frame_path) = 0;
};

// Serves detections from a precomputed set. Read-only; safe to share.
class TrackFileDetector final : public Detector {
 public:
  explicit TrackFileDetector(DetectionSet dets) : dets_(std::move(dets)) {}

  std::vector<BBox> detect(std::size_t frame_index, const std::filesystem::path&) override;

 private:
  DetectionSet dets_;
};

// Talks to a child process over a line-delimited JSON protocol on its
// stdin/stdout:
//
//   request:  {"frame_index": <int>, "image_path": "<path>"}
//   response: {"frame_index": <int>, "bboxes": [{"cx":..,"cy":..,"w":..,"h":..,"score":..}, ...]}
//
// One request in flight at a time; responses must come back in order. After
// the first failure the detector stays unavailable.
class SubprocessDetector final : public Detector {
 public:
  // `command` runs under /bin/sh -c.
  explicit SubprocessDetector(const std::string& command,
                              std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~SubprocessDetector() override;

  SubprocessDetector(const SubprocessDetector&) = delete;
  SubprocessDetector& operator=(const SubprocessDetector&) = delete;

  std::vector<BBox> detect(std::size_t frame_index,
                           const std::filesystem::path& frame_path) override;

  bool alive() const noexcept { return fd_ >= 0; }

 private:
  [[noreturn]] void fail(const std::string& why);
  void send_line(const std::string& line);
  std::string read_line();
  void shutdown() noexcept;

  int fd_ = -1;
  pid_t pid_ = -1;
  std::chrono::milliseconds timeout_;
  std::string buffer_;
};

// Counts invocations of an inner detector.
class CountingDetector final : public Detector {
 public:
  explicit CountingDetector(Detector& inner) : inner_(inner) {}

  std::vector<BBox> detect(std::size_t frame_index,
                           const std::filesystem::path& frame_path) override {
    ++calls_;
    return inner_.detect(frame_index, frame_path);
  }

  std::size_t calls() const noexcept { return calls_; }

 private:
  Detector& inner_;
  std::size_t calls_ = 0;
};

struct DetectorHandle {
  enum class Kind { TrackFile, Subprocess };

  Kind kind = Kind::TrackFile;
  std::string target;  // file path or shell command
  double score_threshold = 0.8;

  // "file:<path>" or "exec:<command>". Throws ValidationError.
  static DetectorHandle parse(std::string_view spec, double score_threshold = 0.8);
};

std::unique_ptr<Detector> open_detector(const DetectorHandle& handle);

// Calls the backend, turning any failure into DetectorUnavailable so callers
// can fall back to motion prediction.
std::vector<BBox> query_detector(Detector& detector, std::size_t frame_index,
                                 const std::filesystem::path& frame_path);

}  // namespace autozoom::locator
