#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "goldilocks/activation.hpp"
#include "goldilocks/errors.hpp"
#include "goldilocks/linalg.hpp"
#include "goldilocks/rng.hpp"

namespace goldilocks {

/// One affine layer with its activation. weights is out x in.
struct Layer {
    Matrix weights;
    Vector bias;
    ActivationSpec activation;

    std::size_t in_dim() const { return weights.cols(); }
    std::size_t out_dim() const { return weights.rows(); }

    void validate() const {
        if (bias.size() != weights.rows()) throw ShapeError("layer: bias length != weight rows");
        if (!weights.finite() || !finite(bias)) throw InvalidInputError("layer: non-finite entries");
    }
};

/// Feed-forward network in the direct formulation
///   x_{n+1} = A_n(W_n x_n + b_n)
/// where A is x + g(x) for Goldilocks layers. The output activation lives in
/// the last layer like any other.
struct Network {
    std::vector<Layer> layers;

    std::size_t depth() const { return layers.size(); }
    std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().in_dim(); }
    std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().out_dim(); }

    void validate() const {
        if (layers.empty()) throw ShapeError("network: no layers");
        for (std::size_t n = 0; n < layers.size(); ++n) {
            layers[n].validate();
            if (n > 0 && layers[n].in_dim() != layers[n - 1].out_dim())
                throw ShapeError("network: layer dimensions do not chain");
        }
    }
};

/// Per-layer pre-activations z_n = W_n x_n + b_n and post-activations
/// x_{n+1} for a batch (rows are samples).
struct ForwardTrace {
    Matrix inputs;            // B x d0
    std::vector<Matrix> pre;  // [layer] B x d_{n+1}
    std::vector<Matrix> post; // [layer] B x d_{n+1}

    const Matrix& outputs() const { return post.back(); }
};

enum class LossKind { SquaredError, BinaryCrossEntropy };

inline LossKind parse_loss(std::string_view name) {
    if (name == "squared-error") return LossKind::SquaredError;
    if (name == "binary-cross-entropy") return LossKind::BinaryCrossEntropy;
    throw ConfigError("unknown loss '" + std::string(name) +
                      "' (expected squared-error or binary-cross-entropy)");
}

inline std::string loss_name(LossKind k) {
    return k == LossKind::SquaredError ? "squared-error" : "binary-cross-entropy";
}

namespace detail {

inline constexpr double kBceClamp = 1e-12;

inline double clamp_prob(double p) {
    if (p < kBceClamp) return kBceClamp;
    if (p > 1.0 - kBceClamp) return 1.0 - kBceClamp;
    return p;
}

/// Runs the forward pass into preallocated trace buffers. If mask is given it
/// multiplies the post-activations of layer mask_layer (inverted dropout).
inline void forward_into(const Network& net, const Matrix& inputs, ForwardTrace& trace,
                         const Matrix* mask = nullptr, std::size_t mask_layer = 0) {
    const std::size_t batch = inputs.rows();
    trace.inputs = inputs;
    trace.pre.resize(net.depth());
    trace.post.resize(net.depth());
    const Matrix* x = &trace.inputs;
    for (std::size_t n = 0; n < net.depth(); ++n) {
        const Layer& layer = net.layers[n];
        const std::size_t out = layer.out_dim(), in = layer.in_dim();
        Matrix& z = trace.pre[n];
        Matrix& a = trace.post[n];
        if (z.rows() != batch || z.cols() != out) z = Matrix(batch, out);
        if (a.rows() != batch || a.cols() != out) a = Matrix(batch, out);
        for (std::size_t s = 0; s < batch; ++s) {
            const double* xs = x->row_data(s);
            double* zs = z.row_data(s);
            double* as = a.row_data(s);
            for (std::size_t i = 0; i < out; ++i) {
                const double* w = layer.weights.row_data(i);
                double acc = layer.bias[i];
                for (std::size_t j = 0; j < in; ++j) acc += w[j] * xs[j];
                zs[i] = acc;
                Activated act = activate(layer.activation, acc);
                as[i] = act.value;
            }
            if (mask && n == mask_layer) {
                const double* ms = mask->row_data(s);
                for (std::size_t i = 0; i < out; ++i) as[i] *= ms[i];
            }
        }
        x = &a;
    }
}

/// dL/d(outputs) for the batch-mean losses. BCE uses the clamped probability.
inline void loss_gradient(LossKind loss, const Matrix& outputs, const Matrix& targets,
                          Matrix& grad) {
    const double inv_b = 1.0 / static_cast<double>(outputs.rows());
    if (grad.rows() != outputs.rows() || grad.cols() != outputs.cols())
        grad = Matrix(outputs.rows(), outputs.cols());
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        double o = outputs.data()[i], t = targets.data()[i];
        if (loss == LossKind::SquaredError) {
            grad.data()[i] = (o - t) * inv_b;
        } else {
            double p = clamp_prob(o);
            grad.data()[i] = (p - t) / (p * (1.0 - p)) * inv_b;
        }
    }
}

}  // namespace detail

inline ForwardTrace forward(const Network& net, const Matrix& inputs) {
    net.validate();
    if (inputs.cols() != net.input_dim())
        throw ShapeError("forward: input dimension does not match first layer");
    if (!inputs.finite()) throw InvalidInputError("forward: non-finite inputs");
    ForwardTrace trace;
    detail::forward_into(net, inputs, trace);
    return trace;
}

inline ForwardTrace forward(const Network& net, const std::vector<Vector>& inputs) {
    Matrix m(inputs.size(), inputs.empty() ? 0 : inputs[0].size());
    for (std::size_t s = 0; s < inputs.size(); ++s) m.set_row(s, inputs[s]);
    return forward(net, m);
}

/// Batch-mean loss:
///   squared-error          mean_b 1/2 |out - target|^2
///   binary-cross-entropy   mean_b sum_j -[t ln p + (1-t) ln(1-p)], p clamped
///                          to [1e-12, 1-1e-12]
inline double loss_value(LossKind loss, const Matrix& outputs, const Matrix& targets) {
    if (outputs.rows() != targets.rows() || outputs.cols() != targets.cols())
        throw ShapeError("loss_value: output/target shapes differ");
    double total = 0.0;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        double o = outputs.data()[i], t = targets.data()[i];
        if (loss == LossKind::SquaredError) {
            total += 0.5 * (o - t) * (o - t);
        } else {
            double p = detail::clamp_prob(o);
            total += -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
        }
    }
    return total / static_cast<double>(outputs.rows());
}

/// Gradients of the (optionally L2-regularized) loss with respect to every
/// weight, bias and the inputs.
struct Gradients {
    std::vector<Matrix> weights;
    std::vector<Vector> bias;
    Matrix inputs;  // B x d0, the input sensitivities
};

namespace detail {

inline void backward_into(const Network& net, const ForwardTrace& trace, LossKind loss,
                          const Matrix& targets, double l2_beta, Gradients& grads,
                          Matrix& d_out, Matrix& d_prev,
                          const Matrix* mask = nullptr, std::size_t mask_layer = 0) {
    const std::size_t batch = trace.inputs.rows();
    const std::size_t depth = net.depth();
    grads.weights.resize(depth);
    grads.bias.resize(depth);
    for (std::size_t n = 0; n < depth; ++n) {
        const Layer& layer = net.layers[n];
        if (grads.weights[n].rows() != layer.out_dim() || grads.weights[n].cols() != layer.in_dim())
            grads.weights[n] = Matrix(layer.out_dim(), layer.in_dim());
        else
            grads.weights[n].fill(0.0);
        grads.bias[n].assign(layer.out_dim(), 0.0);
    }

    loss_gradient(loss, trace.outputs(), targets, d_out);

    for (std::size_t n = depth; n-- > 0;) {
        const Layer& layer = net.layers[n];
        const std::size_t out = layer.out_dim(), in = layer.in_dim();
        const Matrix& x_in = (n == 0) ? trace.inputs : trace.post[n - 1];
        if (d_prev.rows() != batch || d_prev.cols() != in) d_prev = Matrix(batch, in);
        d_prev.fill(0.0);
        Matrix& gw = grads.weights[n];
        Vector& gb = grads.bias[n];
        for (std::size_t s = 0; s < batch; ++s) {
            const double* zs = trace.pre[n].row_data(s);
            const double* dos = d_out.row_data(s);
            const double* xs = x_in.row_data(s);
            double* dps = d_prev.row_data(s);
            const double* ms = (mask && n == mask_layer) ? mask->row_data(s) : nullptr;
            for (std::size_t i = 0; i < out; ++i) {
                double upstream = dos[i];
                // layer-local Jacobian row: A'(z_i) * W_i, with the dropout
                // mask folded into the activation output when present
                double dz = upstream * activate(layer.activation, zs[i]).d1;
                if (ms) dz *= ms[i];
                if (dz == 0.0) continue;
                gb[i] += dz;
                const double* w = layer.weights.row_data(i);
                double* gwrow = gw.row_data(i);
                for (std::size_t j = 0; j < in; ++j) {
                    gwrow[j] += dz * xs[j];
                    dps[j] += dz * w[j];
                }
            }
        }
        if (l2_beta != 0.0) {
            for (std::size_t i = 0; i < gw.size(); ++i)
                gw.data()[i] += 2.0 * l2_beta * layer.weights.data()[i];
        }
        std::swap(d_out, d_prev);
    }
    grads.inputs = d_out;  // after the final swap this is dL/d(inputs)
}

}  // namespace detail

inline Gradients backward(const Network& net, const ForwardTrace& trace, LossKind loss,
                          const Matrix& targets, double l2_beta = 0.0) {
    net.validate();
    if (trace.pre.size() != net.depth() || trace.post.size() != net.depth())
        throw InvalidStateError("backward: trace depth does not match network");
    for (std::size_t n = 0; n < net.depth(); ++n) {
        if (trace.pre[n].cols() != net.layers[n].out_dim())
            throw InvalidStateError("backward: trace widths do not match network");
    }
    if (targets.rows() != trace.inputs.rows() || targets.cols() != net.output_dim())
        throw ShapeError("backward: target shape does not match outputs");
    Gradients grads;
    Matrix d_out, d_prev;
    detail::backward_into(net, trace, loss, targets, l2_beta, grads, d_out, d_prev);
    return grads;
}

/// Inputs and 0/1 targets for supervised training; rows are samples.
struct LabeledBatch {
    Matrix inputs;
    Matrix targets;

    std::size_t size() const { return inputs.rows(); }
};

/// Plain gradient descent, or Adam with the usual constants. Adam matters
/// for the toy setup: the +-0.005 initialization makes the input-to-output
/// Jacobian a product of six near-zero weight matrices, and raw gradients
/// (~1e-14) cannot leave the majority-class plateau at any learning rate.
enum class OptimizerKind { GradientDescent, Adam };

inline OptimizerKind parse_optimizer(std::string_view name) {
    if (name == "gd") return OptimizerKind::GradientDescent;
    if (name == "adam") return OptimizerKind::Adam;
    throw ConfigError("unknown optimizer '" + std::string(name) + "' (expected gd or adam)");
}

inline std::string optimizer_name(OptimizerKind k) {
    return k == OptimizerKind::GradientDescent ? "gd" : "adam";
}

struct TrainConfig {
    double learning_rate = 0.05;
    std::size_t epochs = 1;
    double l2_beta = 0.0;
    double dropout_prob = 0.0;  // inverted dropout on the last hidden layer
    std::uint64_t seed = 1;
    std::size_t batch_size = 0;  // 0 = full batch
    OptimizerKind optimizer = OptimizerKind::GradientDescent;

    void validate() const {
        if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
            throw ConfigError("train: learning_rate must be nonnegative");
        if (!(l2_beta >= 0.0)) throw ConfigError("train: l2_beta must be nonnegative");
        if (!(dropout_prob >= 0.0 && dropout_prob < 1.0))
            throw ConfigError("train: dropout_prob must be in [0,1)");
    }
};

struct EpochMetrics {
    std::size_t epoch;
    double loss;
    double error;        // fraction misclassified at threshold 0.5
    double weight_norm;  // sqrt(sum_n |W_n|^2)
};

struct TrainResult {
    Network net;
    std::vector<EpochMetrics> metrics;
};

namespace detail {

inline double misclassified_fraction(const Matrix& outputs, const Matrix& targets,
                                     double threshold = 0.5) {
    std::size_t wrong = 0;
    for (std::size_t s = 0; s < outputs.rows(); ++s) {
        int predicted = outputs(s, 0) >= threshold ? 1 : 0;
        int label = targets(s, 0) >= 0.5 ? 1 : 0;
        if (predicted != label) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(outputs.rows());
}

inline double weight_norm(const Network& net) {
    double s = 0.0;
    for (const Layer& l : net.layers)
        for (double w : l.weights.data()) s += w * w;
    return std::sqrt(s);
}

}  // namespace detail

/// Plain gradient descent on the given loss with optional L2 penalty
/// beta * sum_n |W_n|^2 and inverted dropout on the last hidden layer's
/// outputs (training passes only). Deterministic given the seed: metric rows
/// 0..epochs-1 are the loss the optimizer saw before each step, row `epochs`
/// is a clean evaluation of the final network.
inline TrainResult train(const Network& initial, const LabeledBatch& data, LossKind loss,
                         const TrainConfig& cfg) {
    cfg.validate();
    initial.validate();
    if (data.size() == 0) throw ShapeError("train: empty dataset");
    if (data.inputs.cols() != initial.input_dim() || data.targets.cols() != initial.output_dim())
        throw ShapeError("train: dataset does not match network dimensions");

    TrainResult result;
    result.net = initial;
    Network& net = result.net;
    const std::size_t depth = net.depth();
    const bool use_dropout = cfg.dropout_prob > 0.0 && depth >= 2;
    const std::size_t mask_layer = depth >= 2 ? depth - 2 : 0;
    const double keep = 1.0 - cfg.dropout_prob;

    Rng dropout_rng = Rng::stream(cfg.seed, "dropout");
    Rng data_rng = Rng::stream(cfg.seed, "data");

    ForwardTrace trace;
    Gradients grads;
    Matrix d_out, d_prev;
    Matrix mask;

    auto draw_mask = [&](std::size_t batch) {
        const std::size_t width = net.layers[mask_layer].out_dim();
        if (mask.rows() != batch || mask.cols() != width) mask = Matrix(batch, width);
        for (std::size_t s = 0; s < batch; ++s)
            for (std::size_t i = 0; i < width; ++i)
                mask(s, i) = dropout_rng.next_unit() >= cfg.dropout_prob ? 1.0 / keep : 0.0;
    };

    // Adam state: first/second moment per parameter, bias-corrected by the
    // shared step counter. beta1 = 0.9, beta2 = 0.999, eps = 1e-8.
    std::vector<Matrix> m_w(depth), v_w(depth);
    std::vector<Vector> m_b(depth), v_b(depth);
    if (cfg.optimizer == OptimizerKind::Adam) {
        for (std::size_t n = 0; n < depth; ++n) {
            m_w[n] = Matrix(net.layers[n].out_dim(), net.layers[n].in_dim());
            v_w[n] = Matrix(net.layers[n].out_dim(), net.layers[n].in_dim());
            m_b[n].assign(net.layers[n].out_dim(), 0.0);
            v_b[n].assign(net.layers[n].out_dim(), 0.0);
        }
    }
    long step_count = 0;

    auto apply_step = [&]() {
        if (cfg.optimizer == OptimizerKind::GradientDescent) {
            for (std::size_t n = 0; n < depth; ++n) {
                Layer& layer = net.layers[n];
                for (std::size_t i = 0; i < layer.weights.size(); ++i)
                    layer.weights.data()[i] -= cfg.learning_rate * grads.weights[n].data()[i];
                for (std::size_t i = 0; i < layer.bias.size(); ++i)
                    layer.bias[i] -= cfg.learning_rate * grads.bias[n][i];
            }
            return;
        }
        constexpr double b1 = 0.9, b2 = 0.999, adam_eps = 1e-8;
        ++step_count;
        const double corr1 = 1.0 - std::pow(b1, static_cast<double>(step_count));
        const double corr2 = 1.0 - std::pow(b2, static_cast<double>(step_count));
        auto update = [&](double& param, double g, double& m, double& v) {
            m = b1 * m + (1.0 - b1) * g;
            v = b2 * v + (1.0 - b2) * g * g;
            param -= cfg.learning_rate * (m / corr1) / (std::sqrt(v / corr2) + adam_eps);
        };
        for (std::size_t n = 0; n < depth; ++n) {
            Layer& layer = net.layers[n];
            for (std::size_t i = 0; i < layer.weights.size(); ++i)
                update(layer.weights.data()[i], grads.weights[n].data()[i],
                       m_w[n].data()[i], v_w[n].data()[i]);
            for (std::size_t i = 0; i < layer.bias.size(); ++i)
                update(layer.bias[i], grads.bias[n][i], m_b[n][i], v_b[n][i]);
        }
    };

    const std::size_t total = data.size();
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t bs = cfg.batch_size == 0 ? total : std::min(cfg.batch_size, total);

    Matrix batch_in(bs, data.inputs.cols()), batch_tg(bs, data.targets.cols());

    result.metrics.reserve(cfg.epochs + 1);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_loss = 0.0, epoch_error = 0.0;
        const double wnorm = detail::weight_norm(net);
        if (cfg.batch_size == 0) {
            const Matrix* m = nullptr;
            if (use_dropout) {
                draw_mask(total);
                m = &mask;
            }
            detail::forward_into(net, data.inputs, trace, m, mask_layer);
            epoch_loss = loss_value(loss, trace.outputs(), data.targets);
            epoch_error = detail::misclassified_fraction(trace.outputs(), data.targets);
            if (!std::isfinite(epoch_loss)) throw DivergenceError(epoch);
            detail::backward_into(net, trace, loss, data.targets, cfg.l2_beta, grads, d_out,
                                  d_prev, m, mask_layer);
            apply_step();
        } else {
            // Fisher-Yates shuffle from the data stream, then fixed-order chunks.
            for (std::size_t i = total; i-- > 1;) {
                std::size_t j = static_cast<std::size_t>(data_rng.next_unit() * (i + 1));
                if (j > i) j = i;
                std::swap(order[i], order[j]);
            }
            std::size_t seen = 0;
            double err_count = 0.0;
            for (std::size_t start = 0; start < total; start += bs) {
                const std::size_t m_rows = std::min(bs, total - start);
                if (batch_in.rows() != m_rows) {
                    batch_in = Matrix(m_rows, data.inputs.cols());
                    batch_tg = Matrix(m_rows, data.targets.cols());
                }
                for (std::size_t r = 0; r < m_rows; ++r) {
                    batch_in.set_row(r, data.inputs.row(order[start + r]));
                    batch_tg.set_row(r, data.targets.row(order[start + r]));
                }
                const Matrix* msk = nullptr;
                if (use_dropout) {
                    draw_mask(m_rows);
                    msk = &mask;
                }
                detail::forward_into(net, batch_in, trace, msk, mask_layer);
                double batch_loss = loss_value(loss, trace.outputs(), batch_tg);
                if (!std::isfinite(batch_loss)) throw DivergenceError(epoch);
                epoch_loss += batch_loss * static_cast<double>(m_rows);
                err_count +=
                    detail::misclassified_fraction(trace.outputs(), batch_tg) * m_rows;
                detail::backward_into(net, trace, loss, batch_tg, cfg.l2_beta, grads, d_out,
                                      d_prev, msk, mask_layer);
                apply_step();
                seen += m_rows;
            }
            epoch_loss /= static_cast<double>(seen);
            epoch_error = err_count / static_cast<double>(seen);
        }
        result.metrics.push_back({epoch, epoch_loss, epoch_error, wnorm});
    }

    // Clean evaluation of the final network (no dropout).
    detail::forward_into(net, data.inputs, trace);
    double final_loss = loss_value(loss, trace.outputs(), data.targets);
    if (!std::isfinite(final_loss)) throw DivergenceError(cfg.epochs);
    result.metrics.push_back({cfg.epochs, final_loss,
                              detail::misclassified_fraction(trace.outputs(), data.targets),
                              detail::weight_norm(net)});
    return result;
}

}  // namespace goldilocks
