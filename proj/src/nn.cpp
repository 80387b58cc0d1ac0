#include "monoxplain/nn.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "monoxplain/error.hpp"

namespace monoxplain {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::shape: return "shape";
    case Errc::not_differentiable: return "not-differentiable";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::precondition: return "precondition";
    case Errc::no_explanation: return "no-explanation";
    case Errc::too_large: return "too-large";
    case Errc::invalid_instance: return "invalid-instance";
    case Errc::schema: return "schema";
    case Errc::shape_inconsistency: return "shape-inconsistency";
    case Errc::unknown_activation: return "unknown-activation";
    case Errc::unsupported_version: return "unsupported-version";
    case Errc::parse: return "parse";
    case Errc::column_mismatch: return "column-mismatch";
    case Errc::io: return "io";
    case Errc::internal: return "internal";
  }
  return "unknown";
}

std::string_view to_string(Activation::Kind kind) noexcept {
  switch (kind) {
    case Activation::Kind::relu: return "relu";
    case Activation::Kind::sigmoid: return "sigmoid";
    case Activation::Kind::tanh: return "tanh";
    case Activation::Kind::identity: return "identity";
    case Activation::Kind::step: return "step";
  }
  return "unknown";
}

double Activation::apply(double z) const noexcept {
  switch (kind) {
    case Kind::relu: return z > 0.0 ? z : 0.0;
    case Kind::sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case Kind::tanh: return std::tanh(z);
    case Kind::identity: return z;
    case Kind::step: return z >= step_threshold ? 1.0 : 0.0;
  }
  return z;
}

double Activation::derivative(double z) const noexcept {
  switch (kind) {
    case Kind::relu: return z > 0.0 ? 1.0 : 0.0;
    case Kind::sigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-z));
      return s * (1.0 - s);
    }
    case Kind::tanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
    case Kind::identity: return 1.0;
    case Kind::step: return 0.0;
  }
  return 0.0;
}

Layer::Layer(std::size_t rows, std::size_t cols, std::vector<double> weights,
             std::vector<double> bias, Activation activation)
    : rows_(rows),
      cols_(cols),
      weights_(std::move(weights)),
      bias_(std::move(bias)),
      activation_(activation) {
  if (rows_ == 0 || cols_ == 0) {
    throw Error(Errc::shape, "layer must have at least one row and column");
  }
  if (weights_.size() != rows_ * cols_) {
    throw Error(Errc::shape,
                fmt::format("layer weights have {} entries, expected {}x{}",
                            weights_.size(), rows_, cols_));
  }
  if (bias_.size() != rows_) {
    throw Error(Errc::shape,
                fmt::format("layer bias has length {}, expected {}",
                            bias_.size(), rows_));
  }
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::ranges::all_of(weights_, finite) ||
      !std::ranges::all_of(bias_, finite) ||
      !std::isfinite(activation_.step_threshold)) {
    throw Error(Errc::invalid_argument, "layer parameters must be finite");
  }
}

Fcn::Fcn(std::size_t input_dim, std::vector<Layer> layers,
         double classification_threshold)
    : input_dim_(input_dim),
      layers_(std::move(layers)),
      threshold_(classification_threshold) {
  if (input_dim_ == 0) {
    throw Error(Errc::shape, "network input dimension must be positive");
  }
  if (layers_.empty()) {
    throw Error(Errc::shape, "network needs at least one layer");
  }
  if (std::isnan(threshold_)) {
    throw Error(Errc::invalid_argument, "classification threshold is NaN");
  }
  std::size_t width = input_dim_;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].cols() != width) {
      throw Error(Errc::shape,
                  fmt::format("layer {} has {} columns, expected {}", l + 1,
                              layers_[l].cols(), width));
    }
    width = layers_[l].rows();
  }
  if (width != 1) {
    throw Error(Errc::shape,
                fmt::format("final layer width is {}, expected 1", width));
  }
}

Domain::Domain(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw Error(Errc::shape, "domain bounds differ in length");
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] <= upper_[i])) {
      throw Error(Errc::invalid_argument,
                  fmt::format("domain bound {} has lower > upper", i + 1));
    }
  }
}

Domain Domain::unit(std::size_t n) {
  return Domain(std::vector<double>(n, 0.0), std::vector<double>(n, 1.0));
}

bool Domain::contains(std::span<const double> x) const noexcept {
  if (x.size() != lower_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(lower_[i] <= x[i] && x[i] <= upper_[i])) return false;
  }
  return true;
}

namespace {

void require_input(const Fcn& fcn, std::span<const double> x) {
  if (x.size() != fcn.input_dim()) {
    throw Error(Errc::shape, fmt::format("input has length {}, network expects {}",
                                         x.size(), fcn.input_dim()));
  }
}

// Pre-activations of one layer applied to `in`.
void affine(const Layer& layer, std::span<const double> in,
            std::vector<double>& out) {
  out.assign(layer.bias().begin(), layer.bias().end());
  for (std::size_t r = 0; r < layer.rows(); ++r) {
    double acc = out[r];
    for (std::size_t c = 0; c < layer.cols(); ++c) {
      acc += layer.weight(r, c) * in[c];
    }
    out[r] = acc;
  }
}

}  // namespace

double forward(const Fcn& fcn, std::span<const double> x) {
  require_input(fcn, x);
  std::vector<double> current(x.begin(), x.end());
  std::vector<double> next;
  for (const Layer& layer : fcn.layers()) {
    affine(layer, current, next);
    for (double& v : next) v = layer.activation().apply(v);
    current.swap(next);
  }
  return current.front();
}

bool classify_output(const Fcn& fcn, double output) noexcept {
  return output > fcn.threshold();
}

bool classify(const Fcn& fcn, std::span<const double> x) {
  return classify_output(fcn, forward(fcn, x));
}

std::vector<double> gradient(const Fcn& fcn, std::span<const double> x) {
  require_input(fcn, x);
  if (!check_admissible(fcn)) {
    throw Error(Errc::not_differentiable,
                "gradient requested for a network with step activations");
  }
  const auto& layers = fcn.layers();

  // Forward pass keeping every layer's input and pre-activation.
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> pre;
  inputs.reserve(layers.size());
  pre.reserve(layers.size());
  inputs.emplace_back(x.begin(), x.end());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    std::vector<double> z;
    affine(layers[l], inputs.back(), z);
    pre.push_back(z);
    if (l + 1 < layers.size()) {
      for (double& v : z) v = layers[l].activation().apply(v);
      inputs.push_back(std::move(z));
    }
  }

  // Backward pass: delta holds d(output)/d(activation output) of layer l.
  std::vector<double> delta{1.0};
  for (std::size_t l = layers.size(); l-- > 0;) {
    const Layer& layer = layers[l];
    std::vector<double> upstream(layer.cols(), 0.0);
    for (std::size_t r = 0; r < layer.rows(); ++r) {
      const double g = delta[r] * layer.activation().derivative(pre[l][r]);
      if (g == 0.0) continue;
      for (std::size_t c = 0; c < layer.cols(); ++c) {
        upstream[c] += layer.weight(r, c) * g;
      }
    }
    delta.swap(upstream);
  }
  return delta;
}

bool check_monotonic(const Fcn& fcn) noexcept {
  return std::ranges::all_of(fcn.layers(), [](const Layer& layer) {
    return std::ranges::all_of(layer.weights(),
                               [](double w) { return w >= 0.0; });
  });
}

bool check_admissible(const Fcn& fcn) noexcept {
  return std::ranges::all_of(fcn.layers(), [](const Layer& layer) {
    return layer.activation().admissible();
  });
}

}  // namespace monoxplain
