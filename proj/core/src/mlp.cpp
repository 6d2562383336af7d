#include "uamcap/mlp.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "uamcap/rng.hpp"

namespace uam {

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        n += weights[l].data.size() + biases[l].size();
    }
    return n;
}

bool Mlp::same_architecture(const Mlp& other) const {
    return layer_sizes == other.layer_sizes &&
           output_activation == other.output_activation &&
           output_scale == other.output_scale;
}

bool Mlp::finite() const {
    for (const auto& w : weights) {
        for (double v : w.data) {
            if (!std::isfinite(v)) return false;
        }
    }
    for (const auto& b : biases) {
        for (double v : b) {
            if (!std::isfinite(v)) return false;
        }
    }
    return true;
}

void GradientSet::make_like(const Mlp& net) {
    weights.resize(net.weights.size());
    biases.resize(net.biases.size());
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        if (weights[l].rows != net.weights[l].rows || weights[l].cols != net.weights[l].cols) {
            weights[l] = Matrix(net.weights[l].rows, net.weights[l].cols);
        }
        biases[l].assign(net.biases[l].size(), 0.0);
    }
    input_gradient.assign(static_cast<std::size_t>(net.input_size()), 0.0);
    set_zero();
}

void GradientSet::set_zero() {
    for (auto& w : weights) std::fill(w.data.begin(), w.data.end(), 0.0);
    for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
    std::fill(input_gradient.begin(), input_gradient.end(), 0.0);
}

void GradientSet::scale(double s) {
    for (auto& w : weights) {
        for (double& v : w.data) v *= s;
    }
    for (auto& b : biases) {
        for (double& v : b) v *= s;
    }
    for (double& v : input_gradient) v *= s;
}

bool GradientSet::finite() const {
    for (const auto& w : weights) {
        for (double v : w.data) {
            if (!std::isfinite(v)) return false;
        }
    }
    for (const auto& b : biases) {
        for (double v : b) {
            if (!std::isfinite(v)) return false;
        }
    }
    for (double v : input_gradient) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Mlp init_random(const std::vector<int>& layer_sizes, OutputActivation out_act,
                double output_scale, std::mt19937_64& rng) {
    if (layer_sizes.size() < 2) {
        throw std::invalid_argument("init_random: need at least input and output layers");
    }
    for (int s : layer_sizes) {
        if (s <= 0) throw std::invalid_argument("init_random: zero-width layer");
    }
    Mlp net;
    net.layer_sizes = layer_sizes;
    net.output_activation = out_act;
    net.output_scale = output_scale;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const int fan_in = layer_sizes[l];
        const int fan_out = layer_sizes[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        Matrix w(fan_out, fan_in);
        for (double& v : w.data) v = uniform_double(rng, -bound, bound);
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
    }
    return net;
}

namespace {

// out = W x + b
void affine(const Matrix& w, std::span<const double> x, std::span<const double> b,
            std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(w.rows));
    for (int r = 0; r < w.rows; ++r) {
        const double* wr = w.data.data() + static_cast<std::size_t>(r) * w.cols;
        double acc = b[static_cast<std::size_t>(r)];
        for (int c = 0; c < w.cols; ++c) acc += wr[c] * x[static_cast<std::size_t>(c)];
        out[static_cast<std::size_t>(r)] = acc;
    }
}

}  // namespace

std::span<const double> forward(const Mlp& net, std::span<const double> input, ForwardCache& cache) {
    if (static_cast<int>(input.size()) != net.input_size()) {
        throw std::invalid_argument("forward: input length does not match layer 0");
    }
    const std::size_t L = net.num_layers();
    cache.pre.resize(L);
    cache.act.resize(L + 1);
    cache.act[0].assign(input.begin(), input.end());

    for (std::size_t l = 0; l < L; ++l) {
        affine(net.weights[l], cache.act[l], net.biases[l], cache.pre[l]);
        auto& a = cache.act[l + 1];
        const auto& z = cache.pre[l];
        a.resize(z.size());
        if (l + 1 < L) {
            for (std::size_t i = 0; i < z.size(); ++i) a[i] = z[i] > 0.0 ? z[i] : 0.0;
        } else if (net.output_activation == OutputActivation::Linear) {
            a = z;
        } else {
            for (std::size_t i = 0; i < z.size(); ++i) a[i] = net.output_scale * std::tanh(z[i]);
        }
    }
    return cache.act.back();
}

std::vector<double> forward(const Mlp& net, std::span<const double> input) {
    ForwardCache cache;
    auto out = forward(net, input, cache);
    return {out.begin(), out.end()};
}

namespace {

void check_cache(const Mlp& net, const ForwardCache& cache,
                 std::span<const double> output_gradient) {
    const std::size_t L = net.num_layers();
    if (cache.act.size() != L + 1 || cache.pre.size() != L ||
        static_cast<int>(cache.act[0].size()) != net.input_size() ||
        static_cast<int>(cache.act[L].size()) != net.output_size()) {
        throw std::invalid_argument("backward: cache does not match network");
    }
    for (std::size_t l = 0; l < L; ++l) {
        if (static_cast<int>(cache.pre[l].size()) != net.layer_sizes[l + 1]) {
            throw std::invalid_argument("backward: cache does not match network");
        }
    }
    if (static_cast<int>(output_gradient.size()) != net.output_size()) {
        throw std::invalid_argument("backward: output gradient length mismatch");
    }
}

// delta at the output layer from dL/dy.
void output_delta(const Mlp& net, const ForwardCache& cache,
                  std::span<const double> output_gradient, std::vector<double>& delta) {
    const auto& z = cache.pre.back();
    delta.resize(z.size());
    if (net.output_activation == OutputActivation::Linear) {
        for (std::size_t i = 0; i < z.size(); ++i) delta[i] = output_gradient[i];
    } else {
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double th = std::tanh(z[i]);
            delta[i] = output_gradient[i] * net.output_scale * (1.0 - th * th);
        }
    }
}

// prev = (W^T delta) o relu'(z_prev); usable down to the input (no relu there).
void propagate_delta(const Matrix& w, std::span<const double> delta,
                     const std::vector<double>* z_prev, std::vector<double>& prev) {
    prev.assign(static_cast<std::size_t>(w.cols), 0.0);
    for (int r = 0; r < w.rows; ++r) {
        const double d = delta[static_cast<std::size_t>(r)];
        if (d == 0.0) continue;
        const double* wr = w.data.data() + static_cast<std::size_t>(r) * w.cols;
        for (int c = 0; c < w.cols; ++c) prev[static_cast<std::size_t>(c)] += d * wr[c];
    }
    if (z_prev) {
        for (std::size_t i = 0; i < prev.size(); ++i) {
            if ((*z_prev)[i] <= 0.0) prev[i] = 0.0;
        }
    }
}

}  // namespace

void backward(const Mlp& net, const ForwardCache& cache,
              std::span<const double> output_gradient, GradientSet& out, bool accumulate) {
    check_cache(net, cache, output_gradient);
    if (!accumulate) {
        out.make_like(net);
    }
    const std::size_t L = net.num_layers();
    static thread_local std::vector<double> delta, delta_prev;
    output_delta(net, cache, output_gradient, delta);

    for (std::size_t l = L; l-- > 0;) {
        Matrix& dw = out.weights[l];
        auto& db = out.biases[l];
        const auto& a_in = cache.act[l];
        for (int r = 0; r < dw.rows; ++r) {
            const double d = delta[static_cast<std::size_t>(r)];
            db[static_cast<std::size_t>(r)] += d;
            if (d == 0.0) continue;
            double* dwr = dw.data.data() + static_cast<std::size_t>(r) * dw.cols;
            for (int c = 0; c < dw.cols; ++c) dwr[c] += d * a_in[static_cast<std::size_t>(c)];
        }
        if (l > 0) {
            propagate_delta(net.weights[l], delta, &cache.pre[l - 1], delta_prev);
            std::swap(delta, delta_prev);
        } else {
            propagate_delta(net.weights[0], delta, nullptr, delta_prev);
            for (std::size_t i = 0; i < delta_prev.size(); ++i) out.input_gradient[i] += delta_prev[i];
        }
    }
}

GradientSet backward(const Mlp& net, const ForwardCache& cache,
                     std::span<const double> output_gradient) {
    GradientSet out;
    backward(net, cache, output_gradient, out, false);
    return out;
}

void backward_input(const Mlp& net, const ForwardCache& cache,
                    std::span<const double> output_gradient,
                    std::vector<double>& input_gradient) {
    check_cache(net, cache, output_gradient);
    const std::size_t L = net.num_layers();
    static thread_local std::vector<double> delta, delta_prev;
    output_delta(net, cache, output_gradient, delta);
    for (std::size_t l = L; l-- > 0;) {
        propagate_delta(net.weights[l], delta, l > 0 ? &cache.pre[l - 1] : nullptr, delta_prev);
        std::swap(delta, delta_prev);
    }
    input_gradient = delta;
}

void apply_gradients(Mlp& net, const GradientSet& grads, double learning_rate) {
    if (grads.weights.size() != net.weights.size()) {
        throw std::invalid_argument("apply_gradients: gradient shape mismatch");
    }
    if (!grads.finite()) {
        throw std::runtime_error("apply_gradients: non-finite gradient");
    }
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        if (grads.weights[l].rows != net.weights[l].rows ||
            grads.weights[l].cols != net.weights[l].cols) {
            throw std::invalid_argument("apply_gradients: gradient shape mismatch");
        }
        auto& w = net.weights[l].data;
        const auto& g = grads.weights[l].data;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= learning_rate * g[i];
        auto& b = net.biases[l];
        const auto& gb = grads.biases[l];
        for (std::size_t i = 0; i < b.size(); ++i) b[i] -= learning_rate * gb[i];
    }
}

void soft_update(Mlp& target, const Mlp& source, double tau) {
    if (!target.same_architecture(source)) {
        throw std::invalid_argument("soft_update: architecture mismatch");
    }
    for (std::size_t l = 0; l < target.weights.size(); ++l) {
        auto& tw = target.weights[l].data;
        const auto& sw = source.weights[l].data;
        for (std::size_t i = 0; i < tw.size(); ++i) tw[i] = tau * sw[i] + (1.0 - tau) * tw[i];
        auto& tb = target.biases[l];
        const auto& sb = source.biases[l];
        for (std::size_t i = 0; i < tb.size(); ++i) tb[i] = tau * sb[i] + (1.0 - tau) * tb[i];
    }
}

}  // namespace uam
