#pragma once

#include <cstdint>

#include "autozoom/reason/config.hpp"
#include "autozoom/reason/weights.hpp"
#include "autozoom/tensor/tape.hpp"
#include "autozoom/tensor/tensor.hpp"

namespace autozoom::reason {

using tensor::FlopCounter;
using tensor::Tape;
using tensor::Var;

struct AttentionResult {
  Tensor output;
  Tensor attention;  // softmax weights, one row per query
};

// F_Q = x_q Wq, F_K = x_kv Wk, F_V = x_kv Wv,
// A = softmax(F_Q F_K^T / sqrt(S)), output A F_V  -> [N x S].
AttentionResult cross_attention(const Tensor& x_q, const Tensor& x_kv,
                                const CrossAttentionWeights& w, FlopCounter* flops = nullptr);

// Single-head attention over the latents projected back to M, plus x when
// residual is set -> [N x M].
AttentionResult self_attention(const Tensor& x, const SelfAttentionWeights& w, bool residual = true,
                               FlopCounter* flops = nullptr);

// Sinusoidal position code added to frame embeddings [T x D].
Tensor positional_encoding(std::size_t T, std::size_t D);

// Cross-attention from the latent array to T frame embeddings, output
// projection to M, then L self-attention layers -> [N x M].
Tensor temporal_reason(const Tensor& frames_emb, const ReasonConfig& cfg, const ModelWeights& w,
                       FlopCounter* flops = nullptr);

// clip [C x T x H x W]: per-frame conv2d, spatial mean, conv1d over time,
// temporal mean -> [F2].
Tensor conv_2plus1_path(const Tensor& clip, const ReasonConfig& cfg, const ConvWeights& w,
                        FlopCounter* flops = nullptr);

// clip [C x T x H x W]: conv3d, mean over time and space -> [F2].
Tensor conv3d_path(const Tensor& clip, const ReasonConfig& cfg, const ConvWeights& w,
                   FlopCounter* flops = nullptr);

// Mean over rows for [N x M] latents (a [F] vector is used as is), then
// affine map -> [num_classes].
Tensor classify(const Tensor& features, const HeadWeights& head);

// End to end. Attention input is [T x in_features] flattened frames (or
// [T x D] embeddings when in_features == 0); conv input is [C x T x H x W].
Tensor model_logits(const Tensor& input, const ReasonConfig& cfg, const ModelWeights& w,
                    FlopCounter* flops = nullptr);

// Exact MACs of temporal_reason:
//   2NMS + 2TDS + 2NTS + L (4NMS + 2N^2 S)
std::uint64_t model_flops(const ReasonConfig& cfg);

// Tape-level building blocks shared by inference and training.
struct CrossVars {
  Var query, key, value, out;
};
struct SelfVars {
  Var query, key, value, out;
};
struct HeadVars {
  Var weight, bias;
};

Var cross_attention(Tape& tape, Var x_q, Var x_kv, const CrossVars& w, Var* attention = nullptr);
Var self_attention(Tape& tape, Var x, const SelfVars& w, bool residual, Var* attention = nullptr);
Var classify(Tape& tape, Var features, const HeadVars& head);

// Every parameter of a model placed on a tape, in parameter_list order.
class ModelGraph {
 public:
  ModelGraph(Tape& tape, const ReasonConfig& cfg, const ModelWeights& w, bool trainable);

  // Attention variant: input frames (or embeddings) -> [N x M] latents.
  Var temporal_reason(Var frames);
  // Logits [1 x K] for the attention variant.
  Var attention_logits(Var frames);
  // Logits [1 x K] from precomputed features (conv variants).
  Var head_logits(Var features);

  // Parameter gradients laid out like the weights.
  ModelWeights gradients(const tensor::Gradients& grads) const;

  Tape& tape() noexcept { return tape_; }

 private:
  Tape& tape_;
  const ReasonConfig& cfg_;
  std::vector<Var> params_;
  std::vector<bool> present_;
  Var embed_, latents_;
  CrossVars cross_;
  std::vector<SelfVars> layers_;
  HeadVars head_;
};

}  // namespace autozoom::reason
