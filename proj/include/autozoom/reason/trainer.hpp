#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "autozoom/reason/config.hpp"
#include "autozoom/reason/weights.hpp"

namespace autozoom::reason {

struct Example {
  Tensor input;  // as model_logits expects
  std::size_t label = 0;
};

struct TrainOptions {
  std::size_t epochs = 200;
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainReport {
  std::vector<double> loss_curve;  // mean loss before each epoch's update
  double final_loss = 0.0;         // mean loss after the last update
};

// Full-batch Adam on mean cross-entropy. The attention variant trains every
// parameter; conv variants keep their kernels fixed and fit the head on the
// pooled features. Deterministic.
TrainReport train(const ReasonConfig& cfg, ModelWeights& w, const std::vector<Example>& data,
                  const TrainOptions& options);

std::size_t predict(const ReasonConfig& cfg, const ModelWeights& w, const Tensor& input);
double accuracy(const ReasonConfig& cfg, const ModelWeights& w, const std::vector<Example>& data);
double mean_loss(const ReasonConfig& cfg, const ModelWeights& w, const std::vector<Example>& data);

}  // namespace autozoom::reason
