// Serves a detection file over the line-delimited JSON detector protocol.
//
//   detector_stub <detections.txt> [--fail-after N] [--garbage-after N]
//
// --fail-after exits after answering N requests; --garbage-after answers
// with a non-JSON line from request N+1 on. Both exist to exercise the
// caller's failure handling.

#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "autozoom/core/errors.hpp"
#include "autozoom/locator/detections.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: detector_stub <detections.txt> [--fail-after N] [--garbage-after N]\n";
    return 2;
  }
  long fail_after = -1;
  long garbage_after = -1;
  for (int i = 2; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--fail-after") {
      fail_after = std::atol(argv[i + 1]);
    } else if (flag == "--garbage-after") {
      garbage_after = std::atol(argv[i + 1]);
    } else {
      std::cerr << "unknown flag " << flag << '\n';
      return 2;
    }
  }

  autozoom::locator::DetectionSet dets;
  try {
    dets = autozoom::locator::load_detections(argv[1]);
  } catch (const autozoom::Error& e) {
    std::cerr << "detector_stub: " << e.what() << '\n';
    return 1;
  }

  long served = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (fail_after >= 0 && served >= fail_after) return 3;
    if (garbage_after >= 0 && served >= garbage_after) {
      std::cout << "not json" << std::endl;
      ++served;
      continue;
    }
    nlohmann::json req;
    try {
      req = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      std::cerr << "detector_stub: bad request\n";
      return 2;
    }
    const auto frame = req.at("frame_index").get<std::size_t>();
    nlohmann::json boxes = nlohmann::json::array();
    if (const auto* found = dets.find(frame)) {
      for (const auto& b : *found) {
        boxes.push_back({{"cx", b.cx()}, {"cy", b.cy()}, {"w", b.w()}, {"h", b.h()}, {"score", b.score()}});
      }
    }
    nlohmann::json resp = {{"frame_index", frame}, {"bboxes", boxes}};
    std::cout << resp.dump() << std::endl;
    ++served;
  }
  return 0;
}
