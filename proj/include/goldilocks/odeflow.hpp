#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "goldilocks/activation.hpp"
#include "goldilocks/errors.hpp"
#include "goldilocks/interpret.hpp"
#include "goldilocks/linalg.hpp"
#include "goldilocks/network.hpp"

namespace goldilocks {

enum class Integrator { RK4, Euler };

struct FlowConfig {
    Integrator integrator = Integrator::RK4;
    double step = 1e-3;
    double n_start = 0.0;
    double n_end = 1.0;

    void validate() const {
        if (!(step > 0.0)) throw ConfigError("flow: step must be positive");
        if (!(n_end > n_start)) throw ConfigError("flow: n_end must exceed n_start");
    }
};

/// Continuous-depth coefficients: piecewise-constant (V, c) per unit of the
/// layer coordinate n, realizing the slowly-varying-weights limit exactly.
/// The flow is dy/dn = V^{-1} g(V y + c).
class FlowField {
public:
    static FlowField scalar(double v, double c, const ActivationSpec& act) {
        if (!act.is_goldilocks())
            throw UnsupportedActivationError("flow: requires a Goldilocks activation");
        if (v == 0.0) throw SingularFlowError("flow: scalar weight is zero");
        FlowField f;
        f.v_.push_back(Matrix::from_rows({{v}}));
        f.v_inv_.push_back(Matrix::from_rows({{1.0 / v}}));
        f.c_.push_back({c});
        f.act_ = act;
        return f;
    }

    /// Takes the chain's Goldilocks segment; every V there must be square
    /// full-rank for the flow to be well defined.
    static FlowField from_chain(const InterpretableChain& chain, double rank_tol = 1e-12) {
        if (chain.flow_depth == 0)
            throw UnsupportedActivationError("flow: chain has no Goldilocks layers");
        FlowField f;
        f.act_ = chain.activations[0];
        for (std::size_t n = 0; n < chain.flow_depth; ++n) {
            const Matrix& v = chain.v[n];
            if (v.rows() != v.cols() || chain.v_rank[n] < v.rows())
                throw SingularFlowError("flow: V_" + std::to_string(n) +
                                        " is not square full-rank");
            (void)rank_tol;
            f.v_.push_back(v);
            f.v_inv_.push_back(chain.v_pinv[n]);
            f.c_.push_back(chain.c[n]);
        }
        return f;
    }

    std::size_t dim() const { return v_.front().rows(); }
    std::size_t segments() const { return v_.size(); }
    const ActivationSpec& activation() const { return act_; }

    std::size_t segment(double n) const {
        if (n < 0.0) return 0;
        std::size_t i = static_cast<std::size_t>(n);
        return i >= segments() ? segments() - 1 : i;
    }

    /// A(n, y) = V y + c at the segment covering n.
    Vector layer_activation(double n, const Vector& y) const {
        std::size_t i = segment(n);
        Vector a = multiply(v_[i], y);
        for (std::size_t k = 0; k < a.size(); ++k) a[k] += c_[i][k];
        return a;
    }

    Vector deriv(double n, const Vector& y) const {
        std::size_t i = segment(n);
        Vector a = layer_activation(n, y);
        for (double& x : a) x = goldilocks_g(act_.hump_kind, act_.mode, x).value;
        return multiply(v_inv_[i], a);
    }

    /// Componentwise g'(V y + c), the adjoint decay coefficients.
    Vector gprime(double n, const Vector& y) const {
        Vector a = layer_activation(n, y);
        for (double& x : a) x = goldilocks_g(act_.hump_kind, act_.mode, x).d1;
        return a;
    }

private:
    std::vector<Matrix> v_, v_inv_;
    std::vector<Vector> c_;
    ActivationSpec act_ = ActivationSpec::goldilocks(HumpKind::Lorentzian,
                                                     GoldilocksMode::Unbiased);
};

struct FlowSample {
    double n;
    Vector y;
};

namespace detail {

template <typename Deriv>
inline Vector integration_step(Integrator method, double n, double h, const Vector& y,
                               Deriv&& f) {
    if (method == Integrator::Euler) {
        Vector k1 = f(n, y);
        Vector out = y;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * k1[i];
        return out;
    }
    Vector k1 = f(n, y);
    Vector tmp = y;
    for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    Vector k2 = f(n + 0.5 * h, tmp);
    for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    Vector k3 = f(n + 0.5 * h, tmp);
    for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
    Vector k4 = f(n + h, tmp);
    Vector out = y;
    for (std::size_t i = 0; i < y.size(); ++i)
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

}  // namespace detail

/// Numerical solution of dy/dn = V^{-1} g(V y + c), sampled at every node
/// from n_start to n_end (the last step is shortened to land on n_end).
inline std::vector<FlowSample> flow_forward(const FlowField& field, const Vector& y0,
                                            const FlowConfig& cfg) {
    cfg.validate();
    if (y0.size() != field.dim()) throw ShapeError("flow_forward: state dimension mismatch");
    std::vector<FlowSample> samples;
    double n = cfg.n_start;
    Vector y = y0;
    samples.push_back({n, y});
    auto f = [&](double nn, const Vector& yy) { return field.deriv(nn, yy); };
    while (n < cfg.n_end - 1e-12) {
        double h = std::min(cfg.step, cfg.n_end - n);
        y = detail::integration_step(cfg.integrator, n, h, y, f);
        n += h;
        samples.push_back({n, y});
    }
    samples.back().n = cfg.n_end;
    return samples;
}

/// Integrates the adjoint d(delta)/dn = -g'(V y + c) . delta backward from
/// delta(n_end) = delta_end, re-integrating y jointly backward from the
/// forward trajectory's final state (no interpolation error). Returns
/// samples in ascending n.
inline std::vector<FlowSample> adjoint_backward(const FlowField& field,
                                                const std::vector<FlowSample>& forward,
                                                const Vector& delta_end,
                                                const FlowConfig& cfg) {
    cfg.validate();
    if (forward.empty()) throw InvalidStateError("adjoint_backward: empty forward trajectory");
    if (std::abs(forward.front().n - cfg.n_start) > 1e-9 ||
        std::abs(forward.back().n - cfg.n_end) > 1e-9)
        throw InvalidStateError("adjoint_backward: trajectory span does not match config");
    if (delta_end.size() != field.dim())
        throw ShapeError("adjoint_backward: delta dimension mismatch");

    const std::size_t dim = field.dim();
    Vector state(2 * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        state[i] = forward.back().y[i];
        state[dim + i] = delta_end[i];
    }
    auto f = [&](double nn, const Vector& s) {
        Vector y(s.begin(), s.begin() + dim);
        Vector dy = field.deriv(nn, y);
        Vector gp = field.gprime(nn, y);
        Vector out(2 * dim);
        for (std::size_t i = 0; i < dim; ++i) {
            out[i] = dy[i];
            out[dim + i] = -gp[i] * s[dim + i];
        }
        return out;
    };

    std::vector<FlowSample> samples;
    double n = cfg.n_end;
    samples.push_back({n, delta_end});
    while (n > cfg.n_start + 1e-12) {
        double h = std::min(cfg.step, n - cfg.n_start);
        state = detail::integration_step(cfg.integrator, n, -h, state, f);
        n -= h;
        samples.push_back({n, Vector(state.begin() + dim, state.end())});
    }
    samples.back().n = cfg.n_start;
    std::reverse(samples.begin(), samples.end());
    return samples;
}

/// Exponential integral Ei(x) for x > 0: power series
/// gamma + ln x + sum x^k/(k k!) up to x = 30, the divergent asymptotic
/// expansion e^x/x sum k!/x^k beyond.
inline double exp_integral_ei(double x) {
    if (!(x > 0.0)) throw SingularPointError("Ei: argument must be positive");
    constexpr double kEulerGamma = 0.57721566490153286061;
    if (x <= 30.0) {
        double sum = 0.0, term = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= x / k;
            double add = term / k;
            sum += add;
            if (std::abs(add) < 1e-17 * std::abs(sum)) break;
        }
        return kEulerGamma + std::log(x) + sum;
    }
    double sum = 1.0, term = 1.0;
    const int kmax = static_cast<int>(std::min(x, 60.0));
    for (int k = 1; k <= kmax; ++k) {
        double next = term * k / x;
        if (next > term) break;  // past the smallest term
        term = next;
        sum += term;
    }
    return std::exp(x) / x * sum;
}

/// Quantity conserved up to a linear drift in n along the separable flow:
///   Lorentzian: ln A^2 + A^2
///   Gaussian:   Ei(A^2)
/// Singular at A = 0.
inline double implicit_invariant(HumpKind kind, double a) {
    if (a == 0.0) throw SingularPointError("implicit_invariant: A = 0 is a logarithmic singularity");
    const double a2 = a * a;
    if (kind == HumpKind::Lorentzian) return std::log(a2) + a2;
    return exp_integral_ei(a2);
}

/// The stated first-order inverse in the direct formulation:
///   x_{n-1} = W x_n + b - g(W x_n + b)
/// Characterized by tests, not assumed exact.
inline Vector first_order_inverse_direct(const Layer& layer, const Vector& x_next) {
    if (!layer.activation.is_goldilocks())
        throw UnsupportedActivationError("first_order_inverse_direct: requires Goldilocks");
    if (x_next.size() != layer.in_dim())
        throw ShapeError("first_order_inverse_direct: state dimension mismatch");
    Vector z = multiply(layer.weights, x_next);
    Vector out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] += layer.bias[i];
        out[i] = z[i] - goldilocks_g(layer.activation.hump_kind, layer.activation.mode, z[i]).value;
    }
    return out;
}

/// The stated first-order inverse in the interpretable formulation:
///   y_{n-1} = y_n - V^{-1} g(V y_n + c)
/// with V^{-1} realized by the precomputed pseudoinverse.
inline Vector first_order_inverse_interpretable(const InterpretableChain& chain, const Vector& y_next,
                                          std::size_t layer) {
    if (layer >= chain.depth())
        throw InvalidStateError("first_order_inverse_interpretable: layer out of range");
    if (!chain.activations[layer].is_goldilocks())
        throw UnsupportedActivationError("first_order_inverse_interpretable: requires Goldilocks");
    if (y_next.size() != chain.input_dim)
        throw ShapeError("first_order_inverse_interpretable: state dimension mismatch");
    const ActivationSpec& act = chain.activations[layer];
    Vector a = multiply(chain.v[layer], y_next);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] += chain.c[layer][i];
        a[i] = goldilocks_g(act.hump_kind, act.mode, a[i]).value;
    }
    Vector step = multiply(chain.v_pinv[layer], a);
    return subtract(y_next, step);
}

/// Solves u + g(u) = target by safeguarded Newton with a bisection fallback.
/// Well-posed for every Goldilocks variant since 1 + g' is bounded away from
/// zero; |g| < 0.4 gives the bracket.
inline double invert_activation(const ActivationSpec& spec, double target, double tol = 1e-12,
                                int max_iter = 100) {
    if (spec.family == ActivationSpec::Family::Linear) return target;
    if (!spec.is_goldilocks())
        throw UnsupportedActivationError("invert_activation: requires Goldilocks (or linear)");
    if (!std::isfinite(target)) throw InvalidInputError("invert_activation: non-finite target");
    double lo = target - 0.5, hi = target + 0.5;
    double u = target;
    for (int it = 0; it < max_iter; ++it) {
        GDerivs g = goldilocks_g(spec.hump_kind, spec.mode, u);
        double resid = u + g.value - target;
        if (std::abs(resid) < tol) return u;
        if (resid > 0.0)
            hi = std::min(hi, u);
        else
            lo = std::max(lo, u);
        double next = u - resid / (1.0 + g.d1);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        u = next;
    }
    throw ConvergenceError("invert_activation: Newton did not converge");
}

/// Exact layer inverse: solves A(z) = x_next componentwise by Newton, then
/// W x_prev = z - b through the SVD. Requires full-rank weights with at
/// least as many rows as columns.
inline Vector invert_layer_exact(const Layer& layer, const Vector& x_next, double tol = 1e-12,
                                 int max_iter = 100, double rank_tol = 1e-12) {
    if (x_next.size() != layer.out_dim())
        throw ShapeError("invert_layer_exact: state dimension mismatch");
    if (layer.out_dim() < layer.in_dim())
        throw NotInvertibleError("invert_layer_exact: wide layer has no unique preimage");
    if (numerical_rank(layer.weights, rank_tol) < layer.in_dim())
        throw NotInvertibleError("invert_layer_exact: rank-deficient weights");
    Vector z(x_next.size());
    for (std::size_t i = 0; i < x_next.size(); ++i)
        z[i] = invert_activation(layer.activation, x_next[i], tol, max_iter);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= layer.bias[i];
    return multiply(pseudoinverse(layer.weights, rank_tol), z);
}

/// Layerwise exact inversion of a whole network, output to input.
inline Vector invert_network_exact(const Network& net, const Vector& output, double tol = 1e-12,
                                   int max_iter = 100, double rank_tol = 1e-12) {
    net.validate();
    Vector state = output;
    for (std::size_t n = net.depth(); n-- > 0;)
        state = invert_layer_exact(net.layers[n], state, tol, max_iter, rank_tol);
    return state;
}

}  // namespace goldilocks
