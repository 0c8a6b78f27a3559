#include "autozoom/reason/model.hpp"

#include <cmath>

#include "autozoom/core/errors.hpp"
#include "autozoom/tensor/ops.hpp"

namespace autozoom::reason {

namespace {

double inv_sqrt_width(const Tensor& projection) {
  return 1.0 / std::sqrt(static_cast<double>(projection.dim(1)));
}

void require_variant(const ReasonConfig& cfg, Variant v, const char* op) {
  if (cfg.variant != v) {
    throw ValidationError(std::string(op) + " needs variant " + std::string(variant_name(v)) +
                          ", config has " + std::string(variant_name(cfg.variant)));
  }
}

void require_shape(const Tensor& t, const tensor::Shape& want, const char* what) {
  if (t.shape() != want) {
    throw ValidationError(std::string(what) + " has shape " + tensor::shape_string(t.shape()) +
                          ", expected " + tensor::shape_string(want));
  }
}

Tensor as_row(const Tensor& features) {
  if (features.rank() == 1) return features.reshaped({1, features.dim(0)});
  if (features.rank() == 2) return features;
  throw ValidationError("classify expects [F] or [R x F] features");
}

}  // namespace

Var cross_attention(Tape& tape, Var x_q, Var x_kv, const CrossVars& w, Var* attention) {
  const double inv = inv_sqrt_width(tape.value(w.query));
  Var fq = tape.matmul(x_q, w.query);
  Var fk = tape.matmul(x_kv, w.key);
  Var fv = tape.matmul(x_kv, w.value);
  Var a = tape.softmax_rows(tape.scale(tape.matmul(fq, tape.transpose(fk)), inv));
  if (attention) *attention = a;
  return tape.matmul(a, fv);
}

Var self_attention(Tape& tape, Var x, const SelfVars& w, bool residual, Var* attention) {
  const double inv = inv_sqrt_width(tape.value(w.query));
  Var q = tape.matmul(x, w.query);
  Var k = tape.matmul(x, w.key);
  Var v = tape.matmul(x, w.value);
  Var a = tape.softmax_rows(tape.scale(tape.matmul(q, tape.transpose(k)), inv));
  if (attention) *attention = a;
  Var o = tape.matmul(tape.matmul(a, v), w.out);
  return residual ? tape.add(x, o) : o;
}

Var classify(Tape& tape, Var features, const HeadVars& head) {
  return tape.add_row(tape.matmul(tape.mean_rows(features), head.weight), head.bias);
}

AttentionResult cross_attention(const Tensor& x_q, const Tensor& x_kv,
                                const CrossAttentionWeights& w, FlopCounter* flops) {
  Tape tape;
  CrossVars v{tape.leaf(w.query), tape.leaf(w.key), tape.leaf(w.value), tape.leaf(w.out)};
  Var a;
  Var out = cross_attention(tape, tape.leaf(x_q), tape.leaf(x_kv), v, &a);
  if (flops) flops->add(tape.flops().total());
  return {tape.value(out), tape.value(a)};
}

AttentionResult self_attention(const Tensor& x, const SelfAttentionWeights& w, bool residual,
                               FlopCounter* flops) {
  Tape tape;
  SelfVars v{tape.leaf(w.query), tape.leaf(w.key), tape.leaf(w.value), tape.leaf(w.out)};
  Var a;
  Var out = self_attention(tape, tape.leaf(x), v, residual, &a);
  if (flops) flops->add(tape.flops().total());
  return {tape.value(out), tape.value(a)};
}

Tensor positional_encoding(std::size_t T, std::size_t D) {
  Tensor pe({T, D});
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < D; ++i) {
      const double rate =
          std::pow(10000.0, -static_cast<double>(2 * (i / 2)) / static_cast<double>(D));
      const double angle = static_cast<double>(t) * rate;
      pe(t, i) = (i % 2 == 0) ? std::sin(angle) : std::cos(angle);
    }
  }
  return pe;
}

ModelGraph::ModelGraph(Tape& tape, const ReasonConfig& cfg, const ModelWeights& w, bool trainable)
    : tape_(tape), cfg_(cfg) {
  cfg.validate();
  const auto params = parameter_list(w);
  const std::size_t conv_at = 6 + 4 * w.attention.layers.size();
  for (std::size_t i = 0; i < params.size(); ++i) {
    // Conv kernels run outside the tape; only the head is differentiated.
    const bool conv_kernel = i >= conv_at && i < conv_at + 3;
    const bool place = !params[i]->values().empty() && !conv_kernel;
    present_.push_back(place);
    params_.push_back(place ? tape.leaf(*params[i], trainable) : Var());
  }
  embed_ = params_[0];
  latents_ = params_[1];
  cross_ = {params_[2], params_[3], params_[4], params_[5]};
  for (std::size_t l = 0; l < w.attention.layers.size(); ++l) {
    const std::size_t b = 6 + 4 * l;
    layers_.push_back({params_[b], params_[b + 1], params_[b + 2], params_[b + 3]});
  }
  head_ = {params_[conv_at + 3], params_[conv_at + 4]};
}

Var ModelGraph::temporal_reason(Var frames_emb) {
  require_variant(cfg_, Variant::Attention, "temporal_reason");
  require_shape(tape_.value(frames_emb), {cfg_.T, cfg_.D}, "frame embeddings");
  Var x_kv = frames_emb;
  if (cfg_.positional_encoding) x_kv = tape_.add(x_kv, tape_.leaf(positional_encoding(cfg_.T, cfg_.D)));
  Var x = tape_.matmul(cross_attention(tape_, latents_, x_kv, cross_), cross_.out);
  for (const auto& layer : layers_) x = self_attention(tape_, x, layer, cfg_.residual);
  return x;
}

Var ModelGraph::attention_logits(Var frames) {
  Var emb = present_[0] ? tape_.matmul(frames, embed_) : frames;
  return classify(tape_, temporal_reason(emb), head_);
}

Var ModelGraph::head_logits(Var features) { return classify(tape_, features, head_); }

ModelWeights ModelGraph::gradients(const tensor::Gradients& grads) const {
  ModelWeights g = zero_weights(cfg_);
  auto slots = parameter_list(g);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (present_[i] && grads.has(params_[i])) *slots[i] = grads[params_[i]];
  }
  return g;
}

Tensor temporal_reason(const Tensor& frames_emb, const ReasonConfig& cfg, const ModelWeights& w,
                       FlopCounter* flops) {
  require_variant(cfg, Variant::Attention, "temporal_reason");
  Tape tape;
  ModelGraph graph(tape, cfg, w, false);
  Var out = graph.temporal_reason(tape.leaf(frames_emb));
  if (flops) flops->add(tape.flops().total());
  return tape.value(out);
}

Tensor conv_2plus1_path(const Tensor& clip, const ReasonConfig& cfg, const ConvWeights& w,
                        FlopCounter* flops) {
  require_variant(cfg, Variant::Conv2Plus1, "conv_2plus1_path");
  if (clip.rank() != 4) throw ValidationError("clip must be [C x T x H x W]");
  const auto C = clip.dim(0), T = clip.dim(1), H = clip.dim(2), W = clip.dim(3);
  const auto F1 = w.spatial.dim(0);
  const auto& d = cfg.conv;

  Tensor pooled({F1, T});
  Tensor frame({C, H, W});
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t i = 0; i < H * W; ++i) frame[c * H * W + i] = clip[(c * T + t) * H * W + i];
    const Tensor maps = tensor::conv2d(frame, w.spatial, 1, d.spatial_padding, flops);
    const std::size_t area = maps.dim(1) * maps.dim(2);
    for (std::size_t f = 0; f < F1; ++f) {
      double s = 0.0;
      for (std::size_t i = 0; i < area; ++i) s += maps[f * area + i];
      pooled(f, t) = s / static_cast<double>(area);
    }
  }
  const Tensor seq = tensor::conv1d(pooled, w.temporal, 1, d.temporal_padding, flops);
  Tensor feat({seq.dim(0)});
  for (std::size_t f = 0; f < seq.dim(0); ++f) {
    double s = 0.0;
    for (std::size_t t = 0; t < seq.dim(1); ++t) s += seq(f, t);
    feat[f] = s / static_cast<double>(seq.dim(1));
  }
  return feat;
}

Tensor conv3d_path(const Tensor& clip, const ReasonConfig& cfg, const ConvWeights& w,
                   FlopCounter* flops) {
  require_variant(cfg, Variant::Conv3D, "conv3d_path");
  tensor::Conv3dOptions opt;
  opt.temporal_padding = cfg.conv.temporal_padding;
  opt.spatial_padding = cfg.conv.spatial_padding;
  const Tensor maps = tensor::conv3d(clip, w.volume, opt, flops);
  const std::size_t per = maps.size() / maps.dim(0);
  Tensor feat({maps.dim(0)});
  for (std::size_t f = 0; f < maps.dim(0); ++f) {
    double s = 0.0;
    for (std::size_t i = 0; i < per; ++i) s += maps[f * per + i];
    feat[f] = s / static_cast<double>(per);
  }
  return feat;
}

Tensor classify(const Tensor& features, const HeadWeights& head) {
  Tape tape;
  Var out = classify(tape, tape.leaf(as_row(features)), {tape.leaf(head.weight), tape.leaf(head.bias)});
  const Tensor& logits = tape.value(out);
  return logits.reshaped({logits.size()});
}

Tensor model_logits(const Tensor& input, const ReasonConfig& cfg, const ModelWeights& w,
                    FlopCounter* flops) {
  Tape tape;
  ModelGraph graph(tape, cfg, w, false);
  Var logits;
  switch (cfg.variant) {
    case Variant::Attention:
      logits = graph.attention_logits(tape.leaf(input));
      break;
    case Variant::Conv2Plus1:
      logits = graph.head_logits(tape.leaf(as_row(conv_2plus1_path(input, cfg, w.conv, flops))));
      break;
    case Variant::Conv3D:
      logits = graph.head_logits(tape.leaf(as_row(conv3d_path(input, cfg, w.conv, flops))));
      break;
  }
  if (flops) flops->add(tape.flops().total());
  const Tensor& z = tape.value(logits);
  return z.reshaped({z.size()});
}

std::uint64_t model_flops(const ReasonConfig& cfg) {
  const std::uint64_t T = cfg.T, D = cfg.D, N = cfg.N, M = cfg.M, S = cfg.S, L = cfg.L;
  const std::uint64_t cross = 2 * N * M * S + 2 * T * D * S + 2 * N * T * S;
  const std::uint64_t layer = 4 * N * M * S + 2 * N * N * S;
  return cross + L * layer;
}

}  // namespace autozoom::reason
