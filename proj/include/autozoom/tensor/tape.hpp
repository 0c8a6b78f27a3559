#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "autozoom/tensor/tensor.hpp"

namespace autozoom::tensor {

class Tape;

// Handle to a value recorded on a Tape.
class Var {
 public:
  Var() = default;
  std::size_t id() const noexcept { return id_; }

 private:
  friend class Tape;
  explicit Var(std::size_t id) : id_(id) {}
  std::size_t id_ = static_cast<std::size_t>(-1);
};

class Gradients {
 public:
  bool has(Var v) const noexcept { return v.id() < grads_.size() && grads_[v.id()].has_value(); }
  // Throws ValidationError when v did not require a gradient.
  const Tensor& operator[](Var v) const;

 private:
  friend class Tape;
  std::vector<std::optional<Tensor>> grads_;
};

// Records a forward computation for reverse-mode differentiation.
//
// Forward MACs go to the tape's FlopCounter; the backward sweep is not
// counted. A tape can be differentiated once; afterwards it rejects both new
// ops and a second backward.
class Tape {
 public:
  Var leaf(Tensor value, bool requires_grad = false);

  const Tensor& value(Var v) const { return nodes_.at(v.id()).value; }

  Var matmul(Var a, Var b);
  Var transpose(Var a);
  Var add(Var a, Var b);
  // x [R x C] plus a row [1 x C] or [C] broadcast over rows.
  Var add_row(Var x, Var row);
  Var scale(Var a, double factor);
  Var softmax_rows(Var x);
  // [R x C] -> [1 x C]
  Var mean_rows(Var x);
  // Any shape -> [1]
  Var sum(Var x);
  // logits [1 x K] or [K] -> [1], -log softmax(logits)[label]
  Var cross_entropy(Var logits, std::size_t label);

  Gradients backward(Var output);  // output must hold a single element
  Gradients backward(Var output, const Tensor& output_grad);

  const FlopCounter& flops() const noexcept { return flops_; }
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  enum class Op { Leaf, MatMul, Transpose, Add, AddRow, Scale, Softmax, MeanRows, Sum, CrossEntropy };

  struct Node {
    Op op;
    Tensor value;
    std::size_t lhs = 0;
    std::size_t rhs = 0;
    double factor = 0.0;
    std::size_t label = 0;
    bool requires_grad = false;
  };

  Var push(Node node);
  void check_open() const;

  std::vector<Node> nodes_;
  FlopCounter flops_;
  bool consumed_ = false;
};

}  // namespace autozoom::tensor
