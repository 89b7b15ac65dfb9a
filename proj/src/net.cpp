#include "classtab/net.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace classtab {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh_fn: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  return "?";
}

Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh_fn;
  if (s == "sigmoid") return Activation::sigmoid;
  throw std::invalid_argument("unknown activation '" + s + "'");
}

double apply_activation(Activation a, double z) {
  switch (a) {
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::tanh_fn: return std::tanh(z);
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-z));
  }
  return z;
}

int Mlp::width() const {
  int w = 0;
  for (std::size_t i = 0; i + 1 < layers.size(); ++i)
    w = std::max(w, static_cast<int>(layers[i].W.rows()));
  return w;
}

namespace {

inline void activate_in_place(Activation a, Mat& Z) {
  switch (a) {
    case Activation::relu:
      Z = Z.cwiseMax(0.0);
      break;
    case Activation::tanh_fn:
      Z = Z.array().tanh().matrix();
      break;
    case Activation::sigmoid:
      Z = (1.0 / (1.0 + (-Z.array()).exp())).matrix();
      break;
  }
}

}  // namespace

Vec Mlp::forward(const VecCRef& x) const {
  Vec a = x;
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    Vec z = layers[l].W * a + layers[l].b;
    for (Eigen::Index i = 0; i < z.size(); ++i)
      z[i] = apply_activation(activation, z[i]);
    a = std::move(z);
  }
  return layers.back().W * a + layers.back().b;
}

Mat Mlp::forward_batch(const Mat& X) const {
  Mat A = X;
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    Mat Z = (A * layers[l].W.transpose()).rowwise() + layers[l].b.transpose();
    activate_in_place(activation, Z);
    A = std::move(Z);
  }
  return (A * layers.back().W.transpose()).rowwise() + layers.back().b.transpose();
}

Vec eval_net(const Mlp& net, const VecCRef& x) {
  if (net.layers.empty()) throw std::invalid_argument("eval_net: empty network");
  if (x.size() != net.input_dim())
    throw std::invalid_argument("eval_net: input dimension mismatch");
  return net.forward(x);
}

std::string net_to_json_string(const Mlp& net) {
  nlohmann::json j;
  j["activation"] = to_string(net.activation);
  j["input_dim"] = net.input_dim();
  j["output_dim"] = net.output_dim();
  j["labels"] = net.slot_labels;
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : net.layers) {
    nlohmann::json jl;
    jl["rows"] = layer.W.rows();
    jl["cols"] = layer.W.cols();
    std::vector<double> w;  // row-major
    w.reserve(static_cast<std::size_t>(layer.W.size()));
    for (Eigen::Index r = 0; r < layer.W.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.W.cols(); ++c) w.push_back(layer.W(r, c));
    jl["weights"] = w;
    jl["bias"] = std::vector<double>(layer.b.data(), layer.b.data() + layer.b.size());
    layers.push_back(std::move(jl));
  }
  j["layers"] = std::move(layers);
  return j.dump();
}

Mlp net_from_json_string(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Mlp net;
  net.activation = activation_from_string(j.at("activation").get<std::string>());
  net.slot_labels = j.at("labels").get<std::vector<Label>>();
  for (const auto& jl : j.at("layers")) {
    DenseLayer layer;
    const auto rows = jl.at("rows").get<Eigen::Index>();
    const auto cols = jl.at("cols").get<Eigen::Index>();
    const auto w = jl.at("weights").get<std::vector<double>>();
    const auto b = jl.at("bias").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w.size()) != rows * cols ||
        static_cast<Eigen::Index>(b.size()) != rows)
      throw std::invalid_argument("net file: inconsistent layer shape");
    layer.W.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c)
        layer.W(r, c) = w[static_cast<std::size_t>(r * cols + c)];
    layer.b = Eigen::Map<const Vec>(b.data(), rows);
    net.layers.push_back(std::move(layer));
  }
  if (net.layers.size() < 2) throw std::invalid_argument("net file: needs >= 2 layers");
  return net;
}

void save_net(const Mlp& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << net_to_json_string(net) << "\n";
}

Mlp load_net(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return net_from_json_string(text);
}

}  // namespace classtab
