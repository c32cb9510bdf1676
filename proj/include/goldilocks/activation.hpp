#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "goldilocks/errors.hpp"

namespace goldilocks {

enum class HumpKind { Lorentzian, Gaussian };
enum class GoldilocksMode { Biased, Unbiased };

inline constexpr double kInvPi = 0.31830988618379067154;      // 1/pi
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794; // 1/sqrt(2 pi)

/// Hump functions generating the Goldilocks nonlinearity:
///   Lorentzian f(x) = (1/pi) / (1 + x^2)
///   Gaussian   f(x) = exp(-x^2/2) / sqrt(2 pi)
/// Symmetric, positive, maximal at 0, fast-decaying tails.
inline double hump(HumpKind kind, double x) {
    if (kind == HumpKind::Lorentzian) return kInvPi / (1.0 + x * x);
    double e = 0.5 * x * x;
    if (e > 745.0) return 0.0;  // exp underflows to exactly 0 anyway
    return kInvSqrt2Pi * std::exp(-e);
}

inline double hump_d1(HumpKind kind, double x) {
    if (kind == HumpKind::Lorentzian) {
        double d = 1.0 + x * x;
        return -2.0 * kInvPi * x / (d * d);
    }
    return -x * hump(kind, x);
}

inline double hump_d2(HumpKind kind, double x) {
    if (kind == HumpKind::Lorentzian) {
        double d = 1.0 + x * x;
        return kInvPi * (6.0 * x * x - 2.0) / (d * d * d);
    }
    return (x * x - 1.0) * hump(kind, x);
}

/// Value and first two derivatives of the local nonlinearity g:
///   biased   g(x) = f(x)
///   unbiased g(x) = x f(x)
struct GDerivs {
    double value;
    double d1;
    double d2;
};

inline GDerivs goldilocks_g(HumpKind kind, GoldilocksMode mode, double x) {
    double f = hump(kind, x);
    double f1 = hump_d1(kind, x);
    double f2 = hump_d2(kind, x);
    if (mode == GoldilocksMode::Biased) return {f, f1, f2};
    return {x * f, f + x * f1, 2.0 * f1 + x * f2};
}

/// Activation selector: the four Goldilocks variants plus the comparison
/// baselines. Goldilocks activations are A(x) = x + g(x).
struct ActivationSpec {
    enum class Family { Goldilocks, ReLU, Selu, Sigmoid, Linear };

    Family family = Family::Linear;
    HumpKind hump_kind = HumpKind::Lorentzian;
    GoldilocksMode mode = GoldilocksMode::Unbiased;
    double selu_lambda = 1.05070098;
    double selu_alpha = 1.67326324;

    static ActivationSpec goldilocks(HumpKind kind, GoldilocksMode mode) {
        ActivationSpec s;
        s.family = Family::Goldilocks;
        s.hump_kind = kind;
        s.mode = mode;
        return s;
    }
    static ActivationSpec relu() { return {Family::ReLU}; }
    static ActivationSpec selu(double lambda = 1.05070098, double alpha = 1.67326324) {
        if (!(lambda > 0.0) || !(alpha > 0.0))
            throw InvalidInputError("selu: lambda and alpha must be positive");
        ActivationSpec s;
        s.family = Family::Selu;
        s.selu_lambda = lambda;
        s.selu_alpha = alpha;
        return s;
    }
    static ActivationSpec sigmoid() { return {Family::Sigmoid}; }
    static ActivationSpec linear() { return {Family::Linear}; }

    bool is_goldilocks() const { return family == Family::Goldilocks; }

    /// Exact names used by the CLI and config files.
    std::string name() const {
        switch (family) {
            case Family::Goldilocks: {
                std::string h = hump_kind == HumpKind::Lorentzian ? "lorentz" : "gauss";
                std::string m = mode == GoldilocksMode::Biased ? "biased" : "unbiased";
                return h + "-" + m;
            }
            case Family::ReLU: return "relu";
            case Family::Selu: return "selu";
            case Family::Sigmoid: return "sigmoid";
            case Family::Linear: return "linear";
        }
        return "linear";
    }

    static ActivationSpec parse(std::string_view name) {
        if (name == "lorentz-unbiased")
            return goldilocks(HumpKind::Lorentzian, GoldilocksMode::Unbiased);
        if (name == "lorentz-biased")
            return goldilocks(HumpKind::Lorentzian, GoldilocksMode::Biased);
        if (name == "gauss-unbiased")
            return goldilocks(HumpKind::Gaussian, GoldilocksMode::Unbiased);
        if (name == "gauss-biased")
            return goldilocks(HumpKind::Gaussian, GoldilocksMode::Biased);
        if (name == "relu") return relu();
        if (name == "selu") return selu();
        if (name == "sigmoid") return sigmoid();
        if (name == "linear") return linear();
        throw ConfigError("unknown activation '" + std::string(name) +
                          "' (expected lorentz-unbiased, lorentz-biased, gauss-unbiased, "
                          "gauss-biased, relu, selu, sigmoid or linear)");
    }
};

struct Activated {
    double value;
    double d1;
};

inline double sigmoid_value(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

/// Evaluates the activation and its derivative. ReLU uses subgradient 0 at
/// the kink; SELU takes the positive branch's derivative at 0.
inline Activated activate(const ActivationSpec& spec, double x) {
    switch (spec.family) {
        case ActivationSpec::Family::Goldilocks: {
            GDerivs g = goldilocks_g(spec.hump_kind, spec.mode, x);
            return {x + g.value, 1.0 + g.d1};
        }
        case ActivationSpec::Family::ReLU:
            return x > 0.0 ? Activated{x, 1.0} : Activated{0.0, 0.0};
        case ActivationSpec::Family::Selu: {
            if (x > 0.0) return {spec.selu_lambda * x, spec.selu_lambda};
            if (x == 0.0) return {0.0, spec.selu_lambda};
            double e = std::exp(x);
            return {spec.selu_lambda * spec.selu_alpha * (e - 1.0),
                    spec.selu_lambda * spec.selu_alpha * e};
        }
        case ActivationSpec::Family::Sigmoid: {
            double s = sigmoid_value(x);
            return {s, s * (1.0 - s)};
        }
        case ActivationSpec::Family::Linear:
            return {x, 1.0};
    }
    return {x, 1.0};
}

}  // namespace goldilocks
