#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "../support/naive.hpp"
#include "autozoom/core/errors.hpp"
#include "autozoom/core/random.hpp"
#include "autozoom/reason/checkpoint.hpp"
#include "autozoom/reason/model.hpp"
#include "autozoom/reason/trainer.hpp"
#include "autozoom/reason/weights.hpp"
#include "autozoom/tensor/gradcheck.hpp"
#include "autozoom/tensor/ops.hpp"

using namespace autozoom;
using namespace autozoom::reason;
using tensor::Shape;

namespace {

Tensor rand_t(Shape s, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(s));
  for (double& v : t.data()) v = rng.uniform(lo, hi);
  return t;
}

CrossAttentionWeights rand_cross(std::size_t M, std::size_t D, std::size_t S, Rng& rng) {
  return {rand_t({M, S}, rng), rand_t({D, S}, rng), rand_t({D, S}, rng), rand_t({S, M}, rng)};
}

SelfAttentionWeights rand_self(std::size_t M, std::size_t S, Rng& rng) {
  return {rand_t({M, S}, rng), rand_t({M, S}, rng), rand_t({M, S}, rng), rand_t({S, M}, rng)};
}

double max_diff(const naive::Mat& ref, const Tensor& got) {
  double m = 0.0;
  for (std::size_t r = 0; r < ref.size(); ++r)
    for (std::size_t c = 0; c < ref[0].size(); ++c) m = std::max(m, std::abs(ref[r][c] - got(r, c)));
  return m;
}

naive::Mat naive_self(const naive::Mat& x, const SelfAttentionWeights& w, bool residual) {
  using naive::to_mat;
  const auto a = naive::attention(x, x, to_mat(w.query), to_mat(w.key), to_mat(w.value));
  const auto o = naive::mul(a, to_mat(w.out));
  return residual ? naive::plus(x, o) : o;
}

ReasonConfig small_config(std::size_t T, std::size_t D, std::size_t N, std::size_t M, std::size_t S,
                          std::size_t L) {
  ReasonConfig c;
  c.T = T;
  c.D = D;
  c.N = N;
  c.M = M;
  c.S = S;
  c.L = L;
  return c;
}

Tensor permute_rows(const Tensor& x, const std::vector<std::size_t>& perm) {
  Tensor out(x.shape());
  for (std::size_t r = 0; r < perm.size(); ++r)
    for (std::size_t c = 0; c < x.dim(1); ++c) out(r, c) = x(perm[r], c);
  return out;
}

}  // namespace

TEST(CrossAttention, SingleKeyBroadcastsValue) {
  Rng rng(1);
  const auto w = rand_cross(4, 3, 5, rng);
  const Tensor xq = rand_t({3, 4}, rng), xkv = rand_t({1, 3}, rng);
  const auto r = cross_attention(xq, xkv, w);
  const Tensor v = tensor::matmul(xkv, w.value);
  for (std::size_t n = 0; n < 3; ++n) {
    EXPECT_DOUBLE_EQ(r.attention(n, 0), 1.0);
    for (std::size_t s = 0; s < 5; ++s) EXPECT_NEAR(r.output(n, s), v(0, s), 1e-15);
  }
}

TEST(CrossAttention, IdenticalKeysGiveUniformWeights) {
  Rng rng(2);
  const auto w = rand_cross(4, 3, 5, rng);
  const Tensor row = rand_t({1, 3}, rng);
  Tensor xkv({6, 3});
  for (std::size_t t = 0; t < 6; ++t)
    for (std::size_t d = 0; d < 3; ++d) xkv(t, d) = row(0, d);
  const auto r = cross_attention(rand_t({2, 4}, rng), xkv, w);
  const Tensor v = tensor::matmul(row, w.value);
  for (std::size_t n = 0; n < 2; ++n) {
    for (std::size_t t = 0; t < 6; ++t) EXPECT_NEAR(r.attention(n, t), 1.0 / 6.0, 1e-15);
    for (std::size_t s = 0; s < 5; ++s) EXPECT_NEAR(r.output(n, s), v(0, s), 1e-14);
  }
}

TEST(CrossAttention, MatchesNaiveReference) {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const std::size_t T = 1 + rng.below(8), N = 1 + rng.below(4), M = 1 + rng.below(8),
                      S = 1 + rng.below(8), D = 1 + rng.below(8);
    const auto w = rand_cross(M, D, S, rng);
    const Tensor xq = rand_t({N, M}, rng), xkv = rand_t({T, D}, rng);
    const auto ref = naive::attention(naive::to_mat(xq), naive::to_mat(xkv), naive::to_mat(w.query),
                                      naive::to_mat(w.key), naive::to_mat(w.value));
    EXPECT_LT(max_diff(ref, cross_attention(xq, xkv, w).output), 1e-9);
  }
}

TEST(CrossAttention, InvariantToKeyPermutation) {
  Rng rng(4);
  for (int i = 0; i < 30; ++i) {
    const std::size_t T = 2 + rng.below(6);
    const auto w = rand_cross(4, 3, 5, rng);
    const Tensor xq = rand_t({3, 4}, rng), xkv = rand_t({T, 3}, rng);
    std::vector<std::size_t> perm(T);
    for (std::size_t t = 0; t < T; ++t) perm[t] = t;
    for (std::size_t t = T - 1; t > 0; --t) std::swap(perm[t], perm[rng.below(t + 1)]);
    const auto a = cross_attention(xq, xkv, w), b = cross_attention(xq, permute_rows(xkv, perm), w);
    EXPECT_LT(tensor::max_abs_diff(a.output, b.output), 1e-9);
  }
}

TEST(CrossAttention, ShapeMismatchThrows) {
  Rng rng(5);
  const auto w = rand_cross(4, 3, 5, rng);
  EXPECT_THROW(cross_attention(rand_t({2, 3}, rng), rand_t({4, 3}, rng), w), ValidationError);
  EXPECT_THROW(cross_attention(rand_t({2, 4}, rng), rand_t({4, 2}, rng), w), ValidationError);
}

TEST(SelfAttention, SingleLatent) {
  Rng rng(6);
  const auto w = rand_self(4, 3, rng);
  const Tensor x = rand_t({1, 4}, rng);
  const auto r = self_attention(x, w);
  const Tensor want = tensor::add(x, tensor::matmul(tensor::matmul(x, w.value), w.out));
  EXPECT_LT(tensor::max_abs_diff(r.output, want), 1e-15);
  EXPECT_DOUBLE_EQ(r.attention(0, 0), 1.0);
}

TEST(SelfAttention, PermutationEquivariant) {
  Rng rng(7);
  for (int i = 0; i < 30; ++i) {
    const std::size_t N = 2 + rng.below(4);
    const auto w = rand_self(4, 3, rng);
    const Tensor x = rand_t({N, 4}, rng);
    std::vector<std::size_t> perm(N);
    for (std::size_t n = 0; n < N; ++n) perm[n] = n;
    for (std::size_t n = N - 1; n > 0; --n) std::swap(perm[n], perm[rng.below(n + 1)]);
    const Tensor a = permute_rows(self_attention(x, w).output, perm);
    const Tensor b = self_attention(permute_rows(x, perm), w).output;
    EXPECT_LT(tensor::max_abs_diff(a, b), 1e-9);
  }
}

TEST(SelfAttention, MatchesNaiveReference) {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const std::size_t N = 1 + rng.below(4), M = 1 + rng.below(8), S = 1 + rng.below(8);
    const auto w = rand_self(M, S, rng);
    const Tensor x = rand_t({N, M}, rng);
    for (bool residual : {true, false}) {
      EXPECT_LT(max_diff(naive_self(naive::to_mat(x), w, residual), self_attention(x, w, residual).output), 1e-9);
    }
  }
}

TEST(SelfAttention, ThreeByFourCase) {
  Rng rng(9);
  const auto w = rand_self(4, 3, rng);
  const Tensor x = rand_t({3, 4}, rng);
  EXPECT_LT(max_diff(naive_self(naive::to_mat(x), w, true), self_attention(x, w).output), 1e-9);
}

TEST(SelfAttention, AttentionRowsSumToOne) {
  Rng rng(10);
  const auto r = self_attention(rand_t({4, 6}, rng, -3, 3), rand_self(6, 5, rng));
  for (std::size_t n = 0; n < 4; ++n) {
    double s = 0.0;
    for (std::size_t m = 0; m < 4; ++m) s += r.attention(n, m);
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(TemporalReason, NoLayersIsProjectedCrossAttention) {
  const auto cfg = small_config(5, 3, 2, 4, 6, 0);
  const auto w = init_weights(cfg, 1);
  Rng rng(11);
  const Tensor x = rand_t({5, 3}, rng);
  const Tensor kv = tensor::add(x, positional_encoding(5, 3));
  const Tensor want =
      tensor::matmul(cross_attention(w.latents, kv, w.attention.cross).output, w.attention.cross.out);
  EXPECT_LT(tensor::max_abs_diff(temporal_reason(x, cfg, w), want), 1e-15);
}

TEST(TemporalReason, MatchesComposedNaive) {
  Rng rng(12);
  for (int i = 0; i < 30; ++i) {
    auto cfg = small_config(1 + rng.below(8), 1 + rng.below(6), 1 + rng.below(4), 1 + rng.below(8),
                            1 + rng.below(8), rng.below(3));
    cfg.positional_encoding = rng.below(2) == 1;
    cfg.residual = rng.below(2) == 1;
    const auto w = init_weights(cfg, 100 + i);
    const Tensor x = rand_t({cfg.T, cfg.D}, rng);
    naive::Mat kv = naive::to_mat(x);
    if (cfg.positional_encoding) {
      // sin/cos pairs with geometric wavelengths, written out directly.
      for (std::size_t t = 0; t < cfg.T; ++t)
        for (std::size_t d = 0; d < cfg.D; ++d) {
          const double freq = std::pow(10000.0, -static_cast<double>(d - d % 2) / static_cast<double>(cfg.D));
          kv[t][d] += d % 2 == 0 ? std::sin(t * freq) : std::cos(t * freq);
        }
    }
    const auto& c = w.attention.cross;
    naive::Mat h = naive::mul(naive::attention(naive::to_mat(w.latents), kv, naive::to_mat(c.query),
                                               naive::to_mat(c.key), naive::to_mat(c.value)),
                              naive::to_mat(c.out));
    for (const auto& layer : w.attention.layers) h = naive_self(h, layer, cfg.residual);
    EXPECT_LT(max_diff(h, temporal_reason(x, cfg, w)), 1e-9);
  }
}

TEST(TemporalReason, RejectsWrongVariantOrShape) {
  auto cfg = small_config(4, 3, 2, 4, 4, 1);
  const auto w = init_weights(cfg, 1);
  Rng rng(13);
  EXPECT_THROW(temporal_reason(rand_t({5, 3}, rng), cfg, w), ValidationError);
  auto conv = cfg;
  conv.variant = Variant::Conv2Plus1;
  EXPECT_THROW(temporal_reason(rand_t({4, 3}, rng), conv, w), ValidationError);
}

TEST(ModelFlops, MatchesCounter) {
  const auto cfg = small_config(8, 16, 4, 8, 8, 2);
  const auto w = init_weights(cfg, 3);
  Rng rng(14);
  tensor::FlopCounter c;
  temporal_reason(rand_t({8, 16}, rng), cfg, w, &c);
  EXPECT_EQ(c.total(), model_flops(cfg));
  const std::uint64_t T = 8, D = 16, N = 4, M = 8, S = 8, L = 2;
  EXPECT_EQ(model_flops(cfg), 2 * N * M * S + 2 * T * D * S + 2 * N * T * S + L * (4 * N * M * S + 2 * N * N * S));
}

TEST(ModelFlops, AffineInTAndL) {
  auto measure = [](std::size_t T, std::size_t L) {
    const auto cfg = small_config(T, 6, 3, 5, 4, L);
    const auto w = init_weights(cfg, 1);
    Rng rng(T * 31 + L);
    tensor::FlopCounter c;
    temporal_reason(rand_t({T, 6}, rng), cfg, w, &c);
    EXPECT_EQ(c.total(), model_flops(cfg));
    return static_cast<long long>(c.total());
  };
  // Self-attention cost does not depend on T.
  EXPECT_EQ(measure(8, 1) - measure(8, 0), measure(16, 1) - measure(16, 0));
  for (std::size_t T = 1; T < 12; ++T) EXPECT_EQ(measure(T + 2, 1) - 2 * measure(T + 1, 1) + measure(T, 1), 0);
  for (std::size_t L = 0; L < 5; ++L) EXPECT_EQ(measure(6, L + 1) - measure(6, L), measure(6, 1) - measure(6, 0));
}

TEST(Classify, ZeroAndPickOut) {
  Rng rng(15);
  const Tensor feats = rand_t({3, 4}, rng);
  const HeadWeights zero{Tensor({4, 2}), Tensor({2})};
  const Tensor z0 = classify(feats, zero);
  for (double v : z0.values()) EXPECT_EQ(v, 0.0);
  HeadWeights pick{Tensor({4, 2}), Tensor({2})};
  pick.weight(2, 1) = 1.0;
  const Tensor z = classify(feats, pick);
  EXPECT_NEAR(z[1], (feats(0, 2) + feats(1, 2) + feats(2, 2)) / 3.0, 1e-15);
  EXPECT_EQ(z.shape(), (Shape{2}));
  const Tensor v = rand_t({4}, rng);
  EXPECT_NEAR(classify(v, pick)[1], v[2], 1e-15);
  EXPECT_THROW(classify(rand_t({3, 5}, rng), pick), ValidationError);
}

TEST(Classify, HeadGradientPassesCheck) {
  Rng rng(16);
  const Tensor feats = rand_t({3, 4}, rng), w0 = rand_t({4, 5}, rng), b0 = rand_t({5}, rng);
  auto loss = [&](const Tensor& w) {
    Tape t;
    return t.value(t.cross_entropy(classify(t, t.leaf(feats), {t.leaf(w), t.leaf(b0)}), 1))[0];
  };
  Tape tape;
  const Var w = tape.leaf(w0, true);
  const auto g = tape.backward(tape.cross_entropy(classify(tape, tape.leaf(feats), {w, tape.leaf(b0)}), 1));
  EXPECT_LT(tensor::finite_diff_check(loss, w0, g[w]), 1e-4);
}

TEST(EndToEnd, GradientsMatchFiniteDifferences) {
  auto cfg = small_config(6, 8, 3, 4, 4, 2);
  cfg.in_features = 5;
  const auto w = init_weights(cfg, 21);
  Rng rng(17);
  const Tensor x = rand_t({6, 5}, rng);
  const std::size_t label = 2;
  Tape tape;
  ModelGraph graph(tape, cfg, w, true);
  const auto grads = graph.gradients(tape.backward(tape.cross_entropy(graph.attention_logits(tape.leaf(x)), label)));
  const auto gl = parameter_list(grads);
  const auto wl = parameter_list(w);
  double worst = 0.0;
  for (std::size_t p = 0; p < wl.size(); ++p) {
    if (wl[p]->size() == 0) continue;
    auto f = [&](const Tensor& value) {
      ModelWeights moved = w;
      *parameter_list(moved)[p] = value;
      Tape t;
      ModelGraph g(t, cfg, moved, false);
      return t.value(t.cross_entropy(g.attention_logits(t.leaf(x)), label))[0];
    };
    worst = std::max(worst, tensor::finite_diff_check(f, *wl[p], *gl[p]));
  }
  EXPECT_LT(worst, 1e-4);
}

class ConvPaths : public ::testing::Test {
 protected:
  ReasonConfig cfg(Variant v) const {
    ReasonConfig c;
    c.variant = v;
    c.conv = {2, 3, 2, 3, 3, 1, 1};
    c.T = 5;
    c.num_classes = 3;
    return c;
  }
};

TEST_F(ConvPaths, ConstantClipWithAveragingKernels) {
  auto c = cfg(Variant::Conv2Plus1);
  c.conv.spatial_padding = 0;
  c.conv.temporal_padding = 0;
  ConvWeights w{Tensor({3, 2, 3, 3}, 1.0 / 18.0), Tensor({2, 3, 3}, 1.0 / 9.0), {}};
  const Tensor clip({2, 5, 6, 6}, 0.6);
  const Tensor feat = conv_2plus1_path(clip, c, w);
  for (double v : feat.values()) EXPECT_NEAR(v, 0.6, 1e-15);
}

TEST_F(ConvPaths, TimeReversalWithSymmetricTemporalKernel) {
  const auto c = cfg(Variant::Conv2Plus1);
  Rng rng(18);
  ConvWeights w{rand_t({3, 2, 3, 3}, rng), Tensor({2, 3, 3}), {}};
  for (std::size_t f = 0; f < 2; ++f)
    for (std::size_t g = 0; g < 3; ++g) {
      const double edge = rng.uniform(-1, 1), mid = rng.uniform(-1, 1);
      w.temporal[(f * 3 + g) * 3 + 0] = edge;
      w.temporal[(f * 3 + g) * 3 + 1] = mid;
      w.temporal[(f * 3 + g) * 3 + 2] = edge;
    }
  const Tensor clip = rand_t({2, 5, 4, 4}, rng);
  Tensor rev(clip.shape());
  for (std::size_t ch = 0; ch < 2; ++ch)
    for (std::size_t t = 0; t < 5; ++t)
      for (std::size_t i = 0; i < 16; ++i) rev[(ch * 5 + (4 - t)) * 16 + i] = clip[(ch * 5 + t) * 16 + i];
  EXPECT_LT(tensor::max_abs_diff(conv_2plus1_path(clip, c, w), conv_2plus1_path(rev, c, w)), 1e-14);
}

TEST_F(ConvPaths, TwoPlusOneMatchesNestedLoops) {
  const auto c = cfg(Variant::Conv2Plus1);
  Rng rng(19);
  for (int i = 0; i < 20; ++i) {
    const std::size_t H = 3 + rng.below(5), W = 3 + rng.below(5);
    ConvWeights w{rand_t({3, 2, 3, 3}, rng), rand_t({2, 3, 3}, rng), {}};
    const Tensor clip = rand_t({2, 5, H, W}, rng);
    // Oracle: per-frame 2-D loops, spatial mean, 1-D loops, temporal mean.
    std::vector<double> pooled(3 * 5);
    for (std::size_t t = 0; t < 5; ++t) {
      std::vector<double> frame(2 * H * W);
      for (std::size_t ch = 0; ch < 2; ++ch)
        for (std::size_t j = 0; j < H * W; ++j) frame[ch * H * W + j] = clip[(ch * 5 + t) * H * W + j];
      const auto maps = naive::conv2d(frame, 2, H, W, {w.spatial.data().begin(), w.spatial.data().end()}, 3, 3, 3, 1, 1);
      for (std::size_t f = 0; f < 3; ++f) {
        double s = 0;
        for (std::size_t j = 0; j < H * W; ++j) s += maps[f * H * W + j];
        pooled[f * 5 + t] = s / static_cast<double>(H * W);
      }
    }
    const auto seq = naive::conv1d(pooled, 3, 5, {w.temporal.data().begin(), w.temporal.data().end()}, 2, 3, 1, 1);
    const Tensor got = conv_2plus1_path(clip, c, w);
    for (std::size_t f = 0; f < 2; ++f) {
      double s = 0;
      for (std::size_t t = 0; t < 5; ++t) s += seq[f * 5 + t];
      EXPECT_NEAR(got[f], s / 5.0, 1e-12);
    }
  }
}

TEST_F(ConvPaths, Conv3dMatchesNestedLoopsAndImpulse) {
  const auto c = cfg(Variant::Conv3D);
  Rng rng(20);
  for (int i = 0; i < 20; ++i) {
    ConvWeights w{{}, {}, rand_t({2, 2, 3, 3, 3}, rng)};
    const Tensor clip = rand_t({2, 5, 4, 6}, rng);
    std::size_t To, Ho, Wo;
    const auto maps = naive::conv3d({clip.data().begin(), clip.data().end()}, 2, 5, 4, 6,
                                    {w.volume.data().begin(), w.volume.data().end()}, 2, 3, 3, 3, 1, 1,
                                    1, 1, &To, &Ho, &Wo);
    const Tensor got = conv3d_path(clip, c, w);
    const std::size_t per = To * Ho * Wo;
    for (std::size_t f = 0; f < 2; ++f) {
      double s = 0;
      for (std::size_t j = 0; j < per; ++j) s += maps[f * per + j];
      EXPECT_NEAR(got[f], s / static_cast<double>(per), 1e-12);
    }
  }
  // Centered impulse per channel: the pre-pool map is the clip itself, so the
  // feature is each channel's mean.
  ConvWeights id{{}, {}, Tensor({2, 2, 3, 3, 3})};
  for (std::size_t ch = 0; ch < 2; ++ch) id.volume[(((ch * 2 + ch) * 3 + 1) * 3 + 1) * 3 + 1] = 1.0;
  const Tensor clip = rand_t({2, 5, 4, 6}, rng);
  const Tensor feat = conv3d_path(clip, c, id);
  for (std::size_t ch = 0; ch < 2; ++ch) {
    double s = 0;
    for (std::size_t j = 0; j < 5 * 24; ++j) s += clip[ch * 5 * 24 + j];
    EXPECT_NEAR(feat[ch], s / (5 * 24), 1e-14);
  }
}

TEST_F(ConvPaths, SeparableVolumeEqualsTwoPlusOne) {
  Rng rng(21);
  for (int i = 0; i < 20; ++i) {
    ConvWeights w{rand_t({3, 2, 3, 3}, rng), rand_t({2, 3, 3}, rng), {}};
    w.volume = separable_volume(w.spatial, w.temporal);
    const Tensor clip = rand_t({2, 5, 5, 7}, rng);
    auto c = cfg(Variant::Conv3D);
    // Zero padding on both paths keeps the factorization exact at borders.
    c.conv.spatial_padding = 0;
    c.conv.temporal_padding = 0;
    auto c2 = c;
    c2.variant = Variant::Conv2Plus1;
    EXPECT_LT(tensor::max_abs_diff(conv3d_path(clip, c, w), conv_2plus1_path(clip, c2, w)), 1e-10);
  }
}

TEST_F(ConvPaths, SeparableInitGivesSameLogits) {
  Rng rng(22);
  auto c3 = cfg(Variant::Conv3D), c2 = cfg(Variant::Conv2Plus1);
  c3.conv.spatial_padding = c2.conv.spatial_padding = 0;
  c3.conv.temporal_padding = c2.conv.temporal_padding = 0;
  const auto w3 = init_weights(c3, 5), w2 = init_weights(c2, 5);
  const Tensor clip = rand_t({2, 5, 6, 6}, rng);
  EXPECT_LT(tensor::max_abs_diff(model_logits(clip, c3, w3), model_logits(clip, c2, w2)), 1e-8);
}

TEST_F(ConvPaths, WrongVariantThrows) {
  Rng rng(23);
  const auto c = cfg(Variant::Attention);
  ConvWeights w{rand_t({3, 2, 3, 3}, rng), rand_t({2, 3, 3}, rng), {}};
  EXPECT_THROW(conv_2plus1_path(rand_t({2, 5, 4, 4}, rng), c, w), ValidationError);
  EXPECT_THROW(conv3d_path(rand_t({2, 5, 4, 4}, rng), c, w), ValidationError);
}

TEST(Weights, InitIsSeededAndShaped) {
  auto cfg = small_config(4, 3, 2, 5, 6, 2);
  cfg.in_features = 7;
  const auto a = init_weights(cfg, 9), b = init_weights(cfg, 9), c = init_weights(cfg, 10);
  EXPECT_EQ(a.embed.shape(), (Shape{7, 3}));
  EXPECT_EQ(a.latents.shape(), (Shape{2, 5}));
  EXPECT_EQ(a.attention.cross.key.shape(), (Shape{3, 6}));
  EXPECT_EQ(a.attention.cross.out.shape(), (Shape{6, 5}));
  EXPECT_EQ(a.attention.layers.size(), 2u);
  EXPECT_EQ(a.head.weight.shape(), (Shape{5, 4}));
  EXPECT_TRUE(a.conv.spatial.values().empty());
  EXPECT_EQ(a.latents.values(), b.latents.values());
  EXPECT_NE(a.latents.values(), c.latents.values());
  for (const auto* t : parameter_list(a)) EXPECT_TRUE(t->all_finite());
}

TEST(ConfigTest, Validation) {
  ReasonConfig c;
  EXPECT_NO_THROW(c.validate());
  c.N = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  EXPECT_EQ(parse_variant("conv3d"), Variant::Conv3D);
  EXPECT_THROW(parse_variant("lstm"), ValidationError);
}

TEST(CheckpointTest, RoundTrip) {
  for (auto v : {Variant::Attention, Variant::Conv2Plus1, Variant::Conv3D}) {
    auto cfg = small_config(4, 3, 2, 5, 6, 2);
    cfg.variant = v;
    cfg.in_features = 7;
    cfg.residual = false;
    const auto w = init_weights(cfg, 3);
    std::stringstream s;
    write_checkpoint(s, cfg, w);
    const auto ck = read_checkpoint(s);
    EXPECT_EQ(ck.config, cfg);
    const auto a = parameter_list(ck.weights), b = parameter_list(w);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i]->values(), b[i]->values());
  }
}

TEST(CheckpointTest, LayoutIsLittleEndian) {
  const auto cfg = small_config(4, 3, 2, 5, 6, 1);
  std::stringstream s;
  write_checkpoint(s, cfg, init_weights(cfg, 1));
  const std::string bytes = s.str();
  EXPECT_EQ(bytes.substr(0, 4), "AZTR");
  EXPECT_EQ(bytes.substr(4, 4), std::string("\x01\x00\x00\x00", 4));
  EXPECT_EQ(bytes.substr(8, 4), std::string("\x04\x00\x00\x00", 4));
  std::size_t params = 0;
  for (const auto* t : parameter_list(init_weights(cfg, 1))) params += t->size();
  EXPECT_EQ(bytes.size(), 8 + 18 * 4 + params * 8);
}

TEST(CheckpointTest, RejectsCorruption) {
  const auto cfg = small_config(4, 3, 2, 5, 6, 1);
  std::stringstream s;
  write_checkpoint(s, cfg, init_weights(cfg, 1));
  const std::string good = s.str();
  auto read = [](std::string bytes) {
    std::istringstream in(bytes);
    return read_checkpoint(in);
  };
  std::string bad = good;
  bad[0] = 'X';
  EXPECT_THROW(read(bad), ParseError);
  bad = good;
  bad[4] = 2;
  EXPECT_THROW(read(bad), ParseError);
  EXPECT_THROW(read(good.substr(0, good.size() - 3)), ParseError);
  EXPECT_THROW(read(good + "x"), ParseError);
  EXPECT_THROW(load_checkpoint("/nonexistent/ck.bin"), IoError);
}

TEST(Trainer, LossDecreasesAndIsDeterministic) {
  auto cfg = small_config(4, 4, 2, 4, 4, 1);
  cfg.in_features = 3;
  cfg.num_classes = 2;
  Rng rng(24);
  std::vector<Example> data;
  for (int i = 0; i < 16; ++i) {
    const std::size_t label = i % 2;
    Tensor x({4, 3});
    for (std::size_t t = 0; t < 4; ++t)
      for (std::size_t d = 0; d < 3; ++d) x(t, d) = rng.uniform(-0.2, 0.2) + (label ? 0.5 : -0.5);
    data.push_back({x, label});
  }
  TrainOptions opt;
  opt.epochs = 40;
  auto w1 = init_weights(cfg, 3), w2 = init_weights(cfg, 3);
  const auto r1 = train(cfg, w1, data, opt);
  const auto r2 = train(cfg, w2, data, opt);
  EXPECT_LT(r1.final_loss, r1.loss_curve.front());
  EXPECT_EQ(r1.loss_curve, r2.loss_curve);
  EXPECT_EQ(w1.head.weight.values(), w2.head.weight.values());
  EXPECT_NEAR(mean_loss(cfg, w1, data), r1.final_loss, 1e-12);
  EXPECT_EQ(accuracy(cfg, w1, data), 1.0);
}

TEST(Trainer, ConvVariantTrainsHeadOnly) {
  ReasonConfig cfg;
  cfg.variant = Variant::Conv2Plus1;
  cfg.conv = {1, 2, 2, 3, 3, 1, 1};
  cfg.T = 3;
  cfg.num_classes = 2;
  Rng rng(25);
  std::vector<Example> data;
  for (int i = 0; i < 8; ++i) data.push_back({rand_t({1, 3, 4, 4}, rng), static_cast<std::size_t>(i % 2)});
  auto w = init_weights(cfg, 1);
  const auto before = w;
  TrainOptions opt;
  opt.epochs = 10;
  const auto r = train(cfg, w, data, opt);
  EXPECT_EQ(w.conv.spatial.values(), before.conv.spatial.values());
  EXPECT_EQ(w.conv.temporal.values(), before.conv.temporal.values());
  EXPECT_NE(w.head.weight.values(), before.head.weight.values());
  EXPECT_LT(r.final_loss, r.loss_curve.front());
}

TEST(Trainer, RejectsBadInput) {
  const auto cfg = small_config(2, 2, 1, 2, 2, 1);
  auto w = init_weights(cfg, 1);
  EXPECT_THROW(train(cfg, w, {}, {}), ValidationError);
  EXPECT_THROW(train(cfg, w, {{Tensor({2, 2}), 9}}, {}), ValidationError);
}
