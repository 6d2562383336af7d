#pragma once

#include <random>
#include <span>
#include <vector>

namespace uam {

/// Dense row-major matrix of doubles.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    std::span<double> row(int r) { return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)}; }
    std::span<const double> row(int r) const { return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)}; }
};

enum class OutputActivation {
    Linear,      // value heads
    TanhScaled,  // bounded action heads: y = scale * tanh(z)
};

/// Fully connected network with rectifier hidden layers. Weights are
/// stored per layer as [fan_out x fan_in]; all arithmetic is double
/// precision.
struct Mlp {
    std::vector<int> layer_sizes;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    OutputActivation output_activation = OutputActivation::Linear;
    double output_scale = 1.0;  // used by TanhScaled only

    int input_size() const { return layer_sizes.front(); }
    int output_size() const { return layer_sizes.back(); }
    std::size_t num_layers() const { return weights.size(); }
    std::size_t parameter_count() const;
    bool same_architecture(const Mlp& other) const;
    bool finite() const;
};

/// Activations retained by a forward pass for use by backward().
/// act[0] is the input copy; act[l] and pre[l-1] belong to layer l.
struct ForwardCache {
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> act;
};

/// Parameter gradients shaped exactly like the owning Mlp, plus the
/// gradient of the scalar objective with respect to the network input.
struct GradientSet {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    std::vector<double> input_gradient;

    void make_like(const Mlp& net);
    void set_zero();
    void scale(double s);
    bool finite() const;
};

/// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
/// Throws std::invalid_argument for fewer than two layers or a zero-width
/// layer.
Mlp init_random(const std::vector<int>& layer_sizes, OutputActivation out_act,
                double output_scale, std::mt19937_64& rng);

/// Forward pass; the returned span aliases cache.act.back().
/// Throws std::invalid_argument on an input length mismatch.
std::span<const double> forward(const Mlp& net, std::span<const double> input, ForwardCache& cache);
std::vector<double> forward(const Mlp& net, std::span<const double> input);

/// Exact reverse-mode gradients of sum(output_gradient . output) with
/// respect to every parameter and the input. When accumulate is set,
/// gradients are added into `out` (which must already match the net).
void backward(const Mlp& net, const ForwardCache& cache,
              std::span<const double> output_gradient, GradientSet& out,
              bool accumulate = false);
GradientSet backward(const Mlp& net, const ForwardCache& cache,
                     std::span<const double> output_gradient);

/// Input gradient only; skips parameter gradient accumulation.
void backward_input(const Mlp& net, const ForwardCache& cache,
                    std::span<const double> output_gradient,
                    std::vector<double>& input_gradient);

/// Plain gradient descent: theta <- theta - lr * grad.
/// Throws std::runtime_error if any gradient entry is non-finite.
void apply_gradients(Mlp& net, const GradientSet& grads, double learning_rate);

/// target <- tau * source + (1 - tau) * target, elementwise.
/// Throws std::invalid_argument on architecture mismatch.
void soft_update(Mlp& target, const Mlp& source, double tau);

}  // namespace uam
