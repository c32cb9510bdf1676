#pragma once

#include <cstddef>
#include <vector>

#include "goldilocks/activation.hpp"
#include "goldilocks/errors.hpp"
#include "goldilocks/linalg.hpp"
#include "goldilocks/network.hpp"

namespace goldilocks {

/// Accumulated coordinate transforms tying the direct and interpretable
/// formulations together:
///   V_0 = W_0,  c_0 = b_0
///   V_n = W_n V_{n-1},  c_n = W_n c_{n-1} + b_n
///   x_n = V_{n-1} y_n + c_{n-1}
/// Pseudoinverses stand in for V^{-1} wherever V is rectangular or
/// rank-deficient.
struct InterpretableChain {
    std::vector<Matrix> v;
    std::vector<Vector> c;
    std::vector<Matrix> v_pinv;
    std::vector<std::size_t> v_rank;
    std::vector<ActivationSpec> activations;
    std::size_t input_dim = 0;
    std::size_t flow_depth = 0;  // leading Goldilocks layers stepped by the y-flow

    std::size_t depth() const { return v.size(); }
};

/// Builds the (V, c) chain from a network. All hidden layers must be
/// Goldilocks; the output layer may be anything (it still contributes its
/// (V, c) pair for hyperplane extraction).
inline InterpretableChain build_chain(const Network& net, double rank_tol = 1e-12) {
    net.validate();
    for (std::size_t n = 0; n + 1 < net.depth(); ++n)
        if (!net.layers[n].activation.is_goldilocks())
            throw UnsupportedActivationError("build_chain: hidden layer " + std::to_string(n) +
                                             " is not a Goldilocks activation");
    InterpretableChain chain;
    chain.input_dim = net.input_dim();
    chain.v.reserve(net.depth());
    chain.c.reserve(net.depth());
    for (std::size_t n = 0; n < net.depth(); ++n) {
        const Layer& layer = net.layers[n];
        if (n == 0) {
            chain.v.push_back(layer.weights);
            chain.c.push_back(layer.bias);
        } else {
            chain.v.push_back(multiply(layer.weights, chain.v.back()));
            chain.c.push_back(add(multiply(layer.weights, chain.c.back()), layer.bias));
        }
        chain.v_pinv.push_back(pseudoinverse(chain.v.back(), rank_tol));
        chain.v_rank.push_back(numerical_rank(chain.v.back(), rank_tol));
        chain.activations.push_back(layer.activation);
    }
    chain.flow_depth = 0;
    while (chain.flow_depth < chain.depth() &&
           chain.activations[chain.flow_depth].is_goldilocks())
        ++chain.flow_depth;
    return chain;
}

/// Per-layer states of a batch of points, all expressed in input
/// coordinates. states[0] is the raw input batch.
struct Trajectory {
    std::vector<std::size_t> layers;      // layer index of each recorded state
    std::vector<std::vector<Vector>> states;  // [record][point]
    std::size_t input_dim = 0;
};

/// Runs the interpretable recursion
///   y_{n+1} = y_n + V_n^+ g(V_n y_n + c_n)
/// over the chain's Goldilocks layers. stride thins the recorded states
/// (layer 0 and the final state are always kept).
inline Trajectory forward_interpretable(const InterpretableChain& chain,
                                        const std::vector<Vector>& y0,
                                        std::size_t stride = 1) {
    if (stride == 0) stride = 1;
    Trajectory traj;
    traj.input_dim = chain.input_dim;
    for (const Vector& y : y0)
        if (y.size() != chain.input_dim)
            throw ShapeError("forward_interpretable: point dimension != input dimension");

    std::vector<Vector> current = y0;
    traj.layers.push_back(0);
    traj.states.push_back(current);
    for (std::size_t n = 0; n < chain.flow_depth; ++n) {
        const Matrix& v = chain.v[n];
        const Matrix& v_pinv = chain.v_pinv[n];
        const Vector& c = chain.c[n];
        const ActivationSpec& act = chain.activations[n];
        for (Vector& y : current) {
            Vector a = multiply(v, y);
            for (std::size_t i = 0; i < a.size(); ++i) {
                a[i] += c[i];
                a[i] = goldilocks_g(act.hump_kind, act.mode, a[i]).value;
            }
            Vector step = multiply(v_pinv, a);
            for (std::size_t i = 0; i < y.size(); ++i) y[i] += step[i];
        }
        const std::size_t layer = n + 1;
        if (layer % stride == 0 || layer == chain.flow_depth) {
            traj.layers.push_back(layer);
            traj.states.push_back(current);
        }
    }
    return traj;
}

/// Result of projecting a layer state back to input coordinates. lossy marks
/// rank-deficient transforms where only the least-norm preimage is returned.
struct BackProjection {
    Vector point;
    bool lossy;
};

/// y_n = V_{n-1}^+ (x_n - c_{n-1}); exact inverse when V_{n-1} is square
/// full-rank, least-norm solution otherwise.
inline BackProjection to_input_coords(const InterpretableChain& chain, const Vector& x_n,
                                      std::size_t layer) {
    if (layer == 0 || layer > chain.depth())
        throw InvalidStateError("to_input_coords: layer must be in [1, depth]");
    const std::size_t n = layer - 1;
    if (x_n.size() != chain.v[n].rows())
        throw ShapeError("to_input_coords: state dimension does not match layer");
    Vector shifted = subtract(x_n, chain.c[n]);
    BackProjection out;
    out.point = multiply(chain.v_pinv[n], shifted);
    out.lossy = chain.v_rank[n] < chain.input_dim;
    return out;
}

/// One neuron's separating hyperplane V_n^(i) y + c_n^(i) = 0 in input
/// coordinates.
struct Hyperplane {
    Vector normal;
    double offset;
    std::size_t layer;
    std::size_t neuron;
};

inline std::vector<Hyperplane> hyperplanes(const InterpretableChain& chain, std::size_t layer) {
    if (layer >= chain.depth())
        throw InvalidStateError("hyperplanes: layer out of range");
    std::vector<Hyperplane> planes;
    planes.reserve(chain.v[layer].rows());
    for (std::size_t i = 0; i < chain.v[layer].rows(); ++i)
        planes.push_back({chain.v[layer].row(i), chain.c[layer][i], layer, i});
    return planes;
}

/// Start/end pair of one layer step applied to a grid point.
struct Arrow {
    Vector start;
    Vector end;
};

/// Regular 2-d lattice; n0/n1 >= 1 points per axis (a single point sits at
/// the interval midpoint).
struct GridSpec {
    double lo0, hi0;
    std::size_t n0;
    double lo1, hi1;
    std::size_t n1;

    std::vector<Vector> points() const {
        std::vector<Vector> pts;
        pts.reserve(n0 * n1);
        for (std::size_t i = 0; i < n0; ++i) {
            double x = n0 > 1 ? lo0 + (hi0 - lo0) * static_cast<double>(i) / (n0 - 1)
                              : 0.5 * (lo0 + hi0);
            for (std::size_t j = 0; j < n1; ++j) {
                double y = n1 > 1 ? lo1 + (hi1 - lo1) * static_cast<double>(j) / (n1 - 1)
                                  : 0.5 * (lo1 + hi1);
                pts.push_back({x, y});
            }
        }
        return pts;
    }
};

/// Phase diagram of one layer in the direct formulation: arrows from grid
/// points x to A(W x + b). Requires a 2-d to 2-d layer.
inline std::vector<Arrow> phase_diagram(const Network& net, const GridSpec& grid,
                                        std::size_t layer) {
    if (layer >= net.depth()) throw InvalidStateError("phase_diagram: layer out of range");
    const Layer& l = net.layers[layer];
    if (l.in_dim() != 2 || l.out_dim() != 2)
        throw UnsupportedDimensionError("phase_diagram: direct formulation needs a 2x2 layer");
    std::vector<Arrow> arrows;
    for (Vector& p : grid.points()) {
        Vector z = multiply(l.weights, p);
        Vector end(2);
        for (std::size_t i = 0; i < 2; ++i) {
            z[i] += l.bias[i];
            end[i] = activate(l.activation, z[i]).value;
        }
        arrows.push_back({std::move(p), std::move(end)});
    }
    return arrows;
}

/// Phase diagram of one layer step in the interpretable formulation:
/// arrows from y to y + V^+ g(V y + c). Requires a 2-d input space.
inline std::vector<Arrow> phase_diagram(const InterpretableChain& chain, const GridSpec& grid,
                                        std::size_t layer) {
    if (layer >= chain.depth()) throw InvalidStateError("phase_diagram: layer out of range");
    if (chain.input_dim != 2)
        throw UnsupportedDimensionError("phase_diagram: input space must be 2-d");
    if (!chain.activations[layer].is_goldilocks())
        throw UnsupportedActivationError("phase_diagram: layer is not Goldilocks");
    const ActivationSpec& act = chain.activations[layer];
    std::vector<Arrow> arrows;
    for (Vector& p : grid.points()) {
        Vector a = multiply(chain.v[layer], p);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] += chain.c[layer][i];
            a[i] = goldilocks_g(act.hump_kind, act.mode, a[i]).value;
        }
        Vector step = multiply(chain.v_pinv[layer], a);
        Vector end = add(p, step);
        arrows.push_back({std::move(p), std::move(end)});
    }
    return arrows;
}

}  // namespace goldilocks
