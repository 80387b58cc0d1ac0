#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace monoxplain {

/// Scalar activation applied componentwise after each affine map.
///
/// Every kind is non-decreasing. All kinds except `step` are continuous and
/// differentiable almost everywhere, which is what the greedy explainers
/// require; `step` exists for the hardness-construction networks.
struct Activation {
  enum class Kind { relu, sigmoid, tanh, identity, step };

  Kind kind = Kind::identity;
  // Used only by `step`: output is 1 when z >= step_threshold, else 0.
  double step_threshold = 0.0;

  static Activation relu() { return {Kind::relu, 0.0}; }
  static Activation sigmoid() { return {Kind::sigmoid, 0.0}; }
  static Activation tanh() { return {Kind::tanh, 0.0}; }
  static Activation identity() { return {Kind::identity, 0.0}; }
  static Activation step(double threshold) { return {Kind::step, threshold}; }

  bool admissible() const noexcept { return kind != Kind::step; }
  double apply(double z) const noexcept;
  // Derivative at z; relu uses 0 at the kink. Undefined for step.
  double derivative(double z) const noexcept;

  friend bool operator==(const Activation&, const Activation&) = default;
};

std::string_view to_string(Activation::Kind kind) noexcept;

/// Affine map followed by an activation. Weights are row-major, rows x cols.
class Layer {
 public:
  Layer(std::size_t rows, std::size_t cols, std::vector<double> weights,
        std::vector<double> bias, Activation activation);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double weight(std::size_t r, std::size_t c) const noexcept {
    return weights_[r * cols_ + c];
  }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> bias() const noexcept { return bias_; }
  const Activation& activation() const noexcept { return activation_; }

  friend bool operator==(const Layer&, const Layer&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> weights_;
  std::vector<double> bias_;
  Activation activation_;
};

/// Fully-connected network with scalar output and a classification threshold.
///
/// Immutable after construction; the constructor validates that layer shapes
/// compose and that the last layer has width 1.
class Fcn {
 public:
  Fcn(std::size_t input_dim, std::vector<Layer> layers,
      double classification_threshold);

  std::size_t input_dim() const noexcept { return input_dim_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  double threshold() const noexcept { return threshold_; }

  friend bool operator==(const Fcn&, const Fcn&) = default;

 private:
  std::size_t input_dim_;
  std::vector<Layer> layers_;
  double threshold_;
};

/// Axis-aligned input box [lower, upper].
class Domain {
 public:
  Domain(std::vector<double> lower, std::vector<double> upper);

  static Domain unit(std::size_t n);

  std::size_t size() const noexcept { return lower_.size(); }
  std::span<const double> lower() const noexcept { return lower_; }
  std::span<const double> upper() const noexcept { return upper_; }
  bool contains(std::span<const double> x) const noexcept;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Last-layer output before thresholding.
double forward(const Fcn& fcn, std::span<const double> x);

/// Class bit under the strict rule: 1 iff forward(x) > threshold.
bool classify(const Fcn& fcn, std::span<const double> x);
bool classify_output(const Fcn& fcn, double output) noexcept;

/// Reverse-mode gradient of forward() with respect to x.
std::vector<double> gradient(const Fcn& fcn, std::span<const double> x);

bool check_monotonic(const Fcn& fcn) noexcept;
bool check_admissible(const Fcn& fcn) noexcept;

}  // namespace monoxplain
