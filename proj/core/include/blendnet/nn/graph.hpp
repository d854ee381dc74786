#pragma once

#include <cstddef>
#include <vector>

#include "blendnet/nn/tensor.hpp"

namespace blendnet {
class Rng;
}

namespace blendnet::nn {

enum class OpKind { Input, Linear, Relu, Abs, Add, Sub, Concat };

const char* op_name(OpKind kind);

struct Node {
  OpKind kind = OpKind::Input;
  int width = 0;          // output feature width
  std::vector<int> args;  // upstream node ids
  Matrix weight;          // Linear only, (out x in), empty when shared
  std::vector<double> bias;
  int share = -1;  // Linear only: id of the node owning the parameters
};

// Activations from one forward pass, indexed like Graph::nodes().
struct Tape {
  std::vector<Matrix> values;
};

// A small feed-forward computation graph with reverse-mode gradients.
// Nodes are appended through the builder methods, so node ids are already
// a topological order and forward/backward are plain linear walks.
class Graph {
 public:
  int input(int width);
  int linear(int arg, int out_width);
  // A linear layer reusing the weights of an earlier linear node, used for
  // Siamese towers where both polymer threads share parameters.
  int linear_shared(int arg, int owner);
  int relu(int arg);
  int abs(int arg);
  int add(int a, int b);
  int sub(int a, int b);
  int concat(const std::vector<int>& args);
  void set_output(int id);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<int>& inputs() const { return inputs_; }
  int output() const { return output_; }

  // Parameters flatten in node-creation order, weight rows first and then
  // the bias for each linear node. Checkpoints and the optimizer both rely
  // on this order.
  std::size_t param_count() const;
  std::vector<double> params() const;
  void set_params(const std::vector<double>& flat);

  // Fills every linear node with U[-1/sqrt(fan_in), +1/sqrt(fan_in)] draws
  // in flattening order, so one seed pins the whole initialization.
  void init_uniform(Rng& rng);

  // Runs one batch. Inputs follow input() creation order and must agree on
  // the row count. Pass a tape to keep activations for backward.
  Matrix forward(const std::vector<Matrix>& batch, Tape* tape = nullptr) const;

  // Gradient of sum(output .* out_grad) with respect to every parameter,
  // flattened like params(). Relu and abs use subgradient 0 at exactly 0.
  std::vector<double> backward(const Tape& tape, const Matrix& out_grad) const;

 private:
  int check_arg(int id) const;
  int push(Node node);

  std::vector<Node> nodes_;
  std::vector<int> inputs_;
  int output_ = -1;
};

}  // namespace blendnet::nn
