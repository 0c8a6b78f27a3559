#include "autozoom/reason/weights.hpp"

#include <cmath>

#include "autozoom/core/errors.hpp"
#include "autozoom/core/random.hpp"

namespace autozoom::reason {

ModelWeights zero_weights(const ReasonConfig& cfg) {
  cfg.validate();
  ModelWeights w;
  const auto K = cfg.num_classes;
  if (cfg.variant == Variant::Attention) {
    if (cfg.in_features) w.embed = Tensor({cfg.in_features, cfg.D});
    w.latents = Tensor({cfg.N, cfg.M});
    auto& c = w.attention.cross;
    c.query = Tensor({cfg.M, cfg.S});
    c.key = Tensor({cfg.D, cfg.S});
    c.value = Tensor({cfg.D, cfg.S});
    c.out = Tensor({cfg.S, cfg.M});
    w.attention.layers.resize(cfg.L);
    for (auto& l : w.attention.layers) {
      l.query = Tensor({cfg.M, cfg.S});
      l.key = Tensor({cfg.M, cfg.S});
      l.value = Tensor({cfg.M, cfg.S});
      l.out = Tensor({cfg.S, cfg.M});
    }
    w.head.weight = Tensor({cfg.M, K});
  } else {
    const auto& d = cfg.conv;
    if (cfg.variant == Variant::Conv2Plus1) {
      w.conv.spatial = Tensor({d.spatial_filters, d.channels, d.spatial_kernel, d.spatial_kernel});
      w.conv.temporal = Tensor({d.temporal_filters, d.spatial_filters, d.temporal_kernel});
    } else {
      w.conv.volume = Tensor(
          {d.temporal_filters, d.channels, d.temporal_kernel, d.spatial_kernel, d.spatial_kernel});
    }
    w.head.weight = Tensor({d.temporal_filters, K});
  }
  w.head.bias = Tensor({K});
  return w;
}

namespace {

void glorot(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (auto& v : t.data()) v = rng.uniform(-a, a);
}

}  // namespace

ModelWeights init_weights(const ReasonConfig& cfg, std::uint64_t seed) {
  ModelWeights w = zero_weights(cfg);
  Rng rng(seed);
  if (cfg.variant == Variant::Attention) {
    if (!w.embed.values().empty()) glorot(w.embed, cfg.in_features, cfg.D, rng);
    glorot(w.latents, cfg.N, cfg.M, rng);
    auto& c = w.attention.cross;
    glorot(c.query, cfg.M, cfg.S, rng);
    glorot(c.key, cfg.D, cfg.S, rng);
    glorot(c.value, cfg.D, cfg.S, rng);
    glorot(c.out, cfg.S, cfg.M, rng);
    for (auto& l : w.attention.layers) {
      glorot(l.query, cfg.M, cfg.S, rng);
      glorot(l.key, cfg.M, cfg.S, rng);
      glorot(l.value, cfg.M, cfg.S, rng);
      glorot(l.out, cfg.S, cfg.M, rng);
    }
    glorot(w.head.weight, cfg.M, cfg.num_classes, rng);
    return w;
  }

  // Both conv variants consume the same draws.
  const auto& d = cfg.conv;
  const auto k2 = d.spatial_kernel * d.spatial_kernel;
  Tensor spatial({d.spatial_filters, d.channels, d.spatial_kernel, d.spatial_kernel});
  Tensor temporal({d.temporal_filters, d.spatial_filters, d.temporal_kernel});
  glorot(spatial, d.channels * k2, d.spatial_filters * k2, rng);
  glorot(temporal, d.spatial_filters * d.temporal_kernel, d.temporal_filters * d.temporal_kernel, rng);
  glorot(w.head.weight, d.temporal_filters, cfg.num_classes, rng);
  if (cfg.variant == Variant::Conv2Plus1) {
    w.conv.spatial = std::move(spatial);
    w.conv.temporal = std::move(temporal);
  } else {
    w.conv.volume = separable_volume(spatial, temporal);
  }
  return w;
}

std::vector<Tensor*> parameter_list(ModelWeights& w) {
  std::vector<Tensor*> p{&w.embed, &w.latents, &w.attention.cross.query, &w.attention.cross.key,
                         &w.attention.cross.value, &w.attention.cross.out};
  for (auto& l : w.attention.layers) {
    p.insert(p.end(), {&l.query, &l.key, &l.value, &l.out});
  }
  p.insert(p.end(), {&w.conv.spatial, &w.conv.temporal, &w.conv.volume, &w.head.weight, &w.head.bias});
  return p;
}

std::vector<const Tensor*> parameter_list(const ModelWeights& w) {
  auto mutable_list = parameter_list(const_cast<ModelWeights&>(w));
  return {mutable_list.begin(), mutable_list.end()};
}

Tensor separable_volume(const Tensor& spatial, const Tensor& temporal) {
  if (spatial.rank() != 4 || temporal.rank() != 3 || temporal.dim(1) != spatial.dim(0)) {
    throw ValidationError("separable_volume expects spatial [F1xCxkxk] and temporal [F2xF1xkt]");
  }
  const auto F1 = spatial.dim(0), C = spatial.dim(1), KH = spatial.dim(2), KW = spatial.dim(3);
  const auto F2 = temporal.dim(0), KT = temporal.dim(2);
  Tensor v({F2, C, KT, KH, KW});
  for (std::size_t f2 = 0; f2 < F2; ++f2)
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t t = 0; t < KT; ++t)
        for (std::size_t y = 0; y < KH; ++y)
          for (std::size_t x = 0; x < KW; ++x) {
            double acc = 0.0;
            for (std::size_t f1 = 0; f1 < F1; ++f1) {
              acc += temporal[(f2 * F1 + f1) * KT + t] * spatial[((f1 * C + c) * KH + y) * KW + x];
            }
            v[(((f2 * C + c) * KT + t) * KH + y) * KW + x] = acc;
          }
  return v;
}

}  // namespace autozoom::reason
