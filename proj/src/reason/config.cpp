#include "autozoom/reason/config.hpp"

#include "autozoom/core/errors.hpp"

namespace autozoom::reason {

std::string_view variant_name(Variant v) noexcept {
  switch (v) {
    case Variant::Attention:
      return "attention";
    case Variant::Conv2Plus1:
      return "conv2plus1";
    case Variant::Conv3D:
      return "conv3d";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (auto v : {Variant::Attention, Variant::Conv2Plus1, Variant::Conv3D}) {
    if (variant_name(v) == name) return v;
  }
  throw ValidationError("unknown variant '" + std::string(name) +
                        "' (expected attention, conv2plus1 or conv3d)");
}

void ReasonConfig::validate() const {
  if (!T || !D || !N || !M || !S || !num_classes) {
    throw ValidationError("reason config dimensions T, D, N, M, S and num_classes must be >= 1");
  }
  if (variant != Variant::Attention) {
    if (!conv.channels || !conv.spatial_filters || !conv.temporal_filters || !conv.spatial_kernel ||
        !conv.temporal_kernel) {
      throw ValidationError("conv dimensions must be >= 1");
    }
  }
}

}  // namespace autozoom::reason
