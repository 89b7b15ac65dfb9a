#pragma once

#include <string>
#include <vector>

#include "classtab/types.hpp"

namespace classtab {

enum class Activation { relu, tanh_fn, sigmoid };
std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

struct DenseLayer {
  Mat W;
  Vec b;
};

/// Feed-forward network: L affine maps with the activation applied
/// between them, W_L(rho(...rho(W_1 x + b_1)...)) + b_L. Two layers make
/// the shallow (one hidden layer) case. slot_labels[s-1] is the class
/// label read off output slot s.
struct Mlp {
  Activation activation = Activation::relu;
  std::vector<DenseLayer> layers;
  std::vector<Label> slot_labels;

  int input_dim() const { return static_cast<int>(layers.front().W.cols()); }
  int output_dim() const { return static_cast<int>(layers.back().W.rows()); }
  int hidden_layers() const { return static_cast<int>(layers.size()) - 1; }
  int width() const;

  Vec forward(const VecCRef& x) const;
  /// One row per input point.
  Mat forward_batch(const Mat& X) const;
};

/// Forward evaluation with a dimension check.
Vec eval_net(const Mlp& net, const VecCRef& x);

double apply_activation(Activation a, double z);

void save_net(const Mlp& net, const std::string& path);
Mlp load_net(const std::string& path);
std::string net_to_json_string(const Mlp& net);
Mlp net_from_json_string(const std::string& text);

}  // namespace classtab
