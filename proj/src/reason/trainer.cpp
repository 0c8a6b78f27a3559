#include "autozoom/reason/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "autozoom/core/errors.hpp"
#include "autozoom/reason/model.hpp"

namespace autozoom::reason {

namespace {

struct Adam {
  explicit Adam(const ModelWeights& shape) : m(zero_weights_like(shape)), v(zero_weights_like(shape)) {}

  static ModelWeights zero_weights_like(const ModelWeights& w) {
    ModelWeights z = w;
    for (auto* t : parameter_list(z)) *t = Tensor(t->shape(), 0.0);
    return z;
  }

  void step(ModelWeights& w, const ModelWeights& g, const TrainOptions& o) {
    ++t;
    const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(t));
    auto ws = parameter_list(w);
    auto gs = parameter_list(g);
    auto ms = parameter_list(m);
    auto vs = parameter_list(v);
    for (std::size_t p = 0; p < ws.size(); ++p) {
      if (gs[p]->size() != ws[p]->size()) continue;
      for (std::size_t i = 0; i < ws[p]->size(); ++i) {
        const double gi = (*gs[p])[i];
        double& mi = (*ms[p])[i];
        double& vi = (*vs[p])[i];
        mi = o.beta1 * mi + (1.0 - o.beta1) * gi;
        vi = o.beta2 * vi + (1.0 - o.beta2) * gi * gi;
        (*ws[p])[i] -= o.learning_rate * (mi / c1) / (std::sqrt(vi / c2) + o.epsilon);
      }
    }
  }

  ModelWeights m, v;
  std::size_t t = 0;
};

void accumulate(ModelWeights& total, const ModelWeights& g, double factor) {
  auto ts = parameter_list(total);
  auto gs = parameter_list(g);
  for (std::size_t p = 0; p < ts.size(); ++p) {
    for (std::size_t i = 0; i < ts[p]->size(); ++i) (*ts[p])[i] += factor * (*gs[p])[i];
  }
}

void check_label(const ReasonConfig& cfg, const Example& ex) {
  if (ex.label >= cfg.num_classes) {
    throw ValidationError("label " + std::to_string(ex.label) + " out of range for " +
                          std::to_string(cfg.num_classes) + " classes");
  }
}

// Pooled conv features, computed once since the kernels stay fixed.
std::vector<Tensor> conv_features(const ReasonConfig& cfg, const ModelWeights& w,
                                  const std::vector<Example>& data) {
  std::vector<Tensor> out;
  out.reserve(data.size());
  for (const auto& ex : data) {
    Tensor f = cfg.variant == Variant::Conv2Plus1 ? conv_2plus1_path(ex.input, cfg, w.conv)
                                                  : conv3d_path(ex.input, cfg, w.conv);
    out.push_back(f.reshaped({1, f.size()}));
  }
  return out;
}

// Mean loss and its gradient over the whole batch.
double batch_gradient(const ReasonConfig& cfg, const ModelWeights& w,
                      const std::vector<Example>& data, const std::vector<Tensor>& features,
                      ModelWeights& grad) {
  grad = zero_weights(cfg);
  const double inv = 1.0 / static_cast<double>(data.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    Tape tape;
    ModelGraph graph(tape, cfg, w, true);
    Var logits = cfg.variant == Variant::Attention ? graph.attention_logits(tape.leaf(data[i].input))
                                                   : graph.head_logits(tape.leaf(features[i]));
    Var ce = tape.cross_entropy(logits, data[i].label);
    loss += tape.value(ce)[0] * inv;
    accumulate(grad, graph.gradients(tape.backward(ce)), inv);
  }
  return loss;
}

}  // namespace

TrainReport train(const ReasonConfig& cfg, ModelWeights& w, const std::vector<Example>& data,
                  const TrainOptions& options) {
  cfg.validate();
  if (data.empty()) throw ValidationError("training set is empty");
  if (!(options.learning_rate > 0.0)) throw ValidationError("learning rate must be > 0");
  for (const auto& ex : data) check_label(cfg, ex);

  const std::vector<Tensor> features =
      cfg.variant == Variant::Attention ? std::vector<Tensor>{} : conv_features(cfg, w, data);

  Adam adam(w);
  TrainReport report;
  ModelWeights grad;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    report.loss_curve.push_back(batch_gradient(cfg, w, data, features, grad));
    adam.step(w, grad, options);
  }
  report.final_loss = batch_gradient(cfg, w, data, features, grad);
  return report;
}

std::size_t predict(const ReasonConfig& cfg, const ModelWeights& w, const Tensor& input) {
  const Tensor z = model_logits(input, cfg, w);
  std::size_t best = 0;
  for (std::size_t k = 1; k < z.size(); ++k) {
    if (z[k] > z[best]) best = k;
  }
  return best;
}

double accuracy(const ReasonConfig& cfg, const ModelWeights& w, const std::vector<Example>& data) {
  if (data.empty()) throw ValidationError("evaluation set is empty");
  std::size_t hits = 0;
  for (const auto& ex : data) hits += predict(cfg, w, ex.input) == ex.label ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

double mean_loss(const ReasonConfig& cfg, const ModelWeights& w, const std::vector<Example>& data) {
  if (data.empty()) throw ValidationError("evaluation set is empty");
  double loss = 0.0;
  for (const auto& ex : data) {
    check_label(cfg, ex);
    const Tensor z = model_logits(ex.input, cfg, w);
    double mx = z[0];
    for (double v : z.values()) mx = std::max(mx, v);
    double s = 0.0;
    for (double v : z.values()) s += std::exp(v - mx);
    loss += std::log(s) + mx - z[ex.label];
  }
  return loss / static_cast<double>(data.size());
}

}  // namespace autozoom::reason
