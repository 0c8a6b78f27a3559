#include "autozoom/locator/detector.hpp"

#include <cerrno>
#include <cstring>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "autozoom/core/errors.hpp"

namespace autozoom::locator {

std::vector<BBox> TrackFileDetector::detect(std::size_t frame_index,
                                            const std::filesystem::path&) {
  if (const auto* boxes = dets_.find(frame_index)) return *boxes;
  return {};
}

SubprocessDetector::SubprocessDetector(const std::string& command,
                                       std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  // A single bidirectional socket serves as the child's stdin and stdout.
  // send(MSG_NOSIGNAL) keeps a dead child from raising SIGPIPE here.
  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
    throw DetectorUnavailable(std::string("socketpair failed: ") + std::strerror(errno));
  }
  pid_ = ::fork();
  if (pid_ < 0) {
    ::close(sv[0]);
    ::close(sv[1]);
    throw DetectorUnavailable(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid_ == 0) {
    ::dup2(sv[1], STDIN_FILENO);
    ::dup2(sv[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(sv[1]);
  fd_ = sv[0];
}

SubprocessDetector::~SubprocessDetector() { shutdown(); }

void SubprocessDetector::shutdown() noexcept {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
  if (pid_ > 0) {
    // Closing the socket is the child's EOF; give it a moment to exit.
    int status = 0;
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

void SubprocessDetector::fail(const std::string& why) {
  shutdown();
  throw DetectorUnavailable("detector subprocess: " + why);
}

void SubprocessDetector::send_line(const std::string& line) {
  std::size_t off = 0;
  while (off < line.size()) {
    ssize_t n = ::send(fd_, line.data() + off, line.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(std::string("write failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string SubprocessDetector::read_line() {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) fail("timed out waiting for a response");
    pollfd pfd{fd_, POLLIN, 0};
    int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      fail(std::string("poll failed: ") + std::strerror(errno));
    }
    if (ready == 0) continue;
    char chunk[4096];
    ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(std::string("read failed: ") + std::strerror(errno));
    }
    if (n == 0) fail("process closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::vector<BBox> SubprocessDetector::detect(std::size_t frame_index,
                                             const std::filesystem::path& frame_path) {
  if (fd_ < 0) throw DetectorUnavailable("detector subprocess is not running");
  nlohmann::json request = {{"frame_index", frame_index}, {"image_path", frame_path.string()}};
  send_line(request.dump() + "\n");
  const std::string line = read_line();

  std::vector<BBox> boxes;
  try {
    auto response = nlohmann::json::parse(line);
    if (response.at("frame_index").get<std::size_t>() != frame_index) {
      fail("response for frame " + response.at("frame_index").dump() + " while waiting for " +
           std::to_string(frame_index));
    }
    for (const auto& b : response.at("bboxes")) {
      boxes.emplace_back(b.at("cx").get<double>(), b.at("cy").get<double>(),
                         b.at("w").get<double>(), b.at("h").get<double>(),
                         b.at("score").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("malformed response: ") + e.what());
  } catch (const ValidationError& e) {
    fail(std::string("invalid box in response: ") + e.what());
  }
  return boxes;
}

DetectorHandle DetectorHandle::parse(std::string_view spec, double score_threshold) {
  if (score_threshold < 0.0 || score_threshold > 1.0) {
    throw ValidationError("score threshold must lie in [0,1]");
  }
  DetectorHandle h;
  h.score_threshold = score_threshold;
  if (spec.starts_with("file:")) {
    h.kind = Kind::TrackFile;
    h.target = std::string(spec.substr(5));
  } else if (spec.starts_with("exec:")) {
    h.kind = Kind::Subprocess;
    h.target = std::string(spec.substr(5));
  } else {
    throw ValidationError("detector spec must be file:<path> or exec:<command>, got '" +
                          std::string(spec) + "'");
  }
  if (h.target.empty()) throw ValidationError("detector spec has an empty target");
  return h;
}

std::unique_ptr<Detector> open_detector(const DetectorHandle& handle) {
  switch (handle.kind) {
    case DetectorHandle::Kind::TrackFile:
      return std::make_unique<TrackFileDetector>(load_detections(handle.target));
    case DetectorHandle::Kind::Subprocess:
      return std::make_unique<SubprocessDetector>(handle.target);
  }
  throw ValidationError("unknown detector kind");
}

std::vector<BBox> query_detector(Detector& detector, std::size_t frame_index,
                                 const std::filesystem::path& frame_path) {
  try {
    return detector.detect(frame_index, frame_path);
  } catch (const DetectorUnavailable&) {
    throw;
  } catch (const std::exception& e) {
    throw DetectorUnavailable(e.what());
  }
}

}  // namespace autozoom::locator
