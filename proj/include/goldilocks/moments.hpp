#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "goldilocks/activation.hpp"
#include "goldilocks/errors.hpp"
#include "goldilocks/linalg.hpp"
#include "goldilocks/rng.hpp"

namespace goldilocks {

/// Gaussian law summarized by its first two moments.
struct GaussianMoments {
    Vector mean;
    Matrix cov;

    std::size_t dim() const { return mean.size(); }

    void validate(double sym_tol = 1e-12, double psd_floor = -1e-10) const {
        if (cov.rows() != dim() || cov.cols() != dim())
            throw ShapeError("moments: covariance shape does not match mean");
        if (!finite(mean) || !cov.finite())
            throw InvalidInputError("moments: non-finite entries");
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = i + 1; j < dim(); ++j)
                if (std::abs(cov(i, j) - cov(j, i)) > sym_tol)
                    throw InvalidInputError("moments: covariance not symmetric");
        Vector ev = sym_eigenvalues(cov);
        if (!ev.empty() && ev.back() < psd_floor)
            throw InvalidInputError("moments: covariance not positive semidefinite");
    }
};

struct NeuronMoments {
    double mean;
    double variance;
};

/// Second-order propagation of a scalar Gaussian through one Goldilocks
/// neuron Y = A(wX + b):
///   mu_Y    = w mu + b + g(z) + 1/2 sigma^2 w^2 g''(z)
///   sigma_Y = sigma^2 w^2 (1 + g'(z))^2 + 1/2 sigma^4 w^4 g''(z)^2
/// with z = w mu + b. A truncated expansion: useful for small sigma |w|,
/// and systematically off beyond that.
inline NeuronMoments propagate_neuron(double mu, double sigma2, double w, double b,
                                      const ActivationSpec& spec) {
    if (!spec.is_goldilocks())
        throw UnsupportedActivationError("propagate_neuron: requires a Goldilocks activation");
    if (!(sigma2 >= 0.0)) throw InvalidInputError("propagate_neuron: sigma2 must be >= 0");
    const double z = w * mu + b;
    GDerivs g = goldilocks_g(spec.hump_kind, spec.mode, z);
    const double s2w2 = sigma2 * w * w;
    NeuronMoments out;
    out.mean = z + g.value + 0.5 * s2w2 * g.d2;
    const double slope = 1.0 + g.d1;
    out.variance = s2w2 * slope * slope + 0.5 * s2w2 * s2w2 * g.d2 * g.d2;
    return out;
}

/// Layer version. With z = W mu + b, S = W Sigma W^T, D = diag(g'(z_i)) and
/// u_i = S_ii:
///   mu_Y    = z + g(z) + 1/2 [g''(z_i) u_i]_i
///   Sigma_Y = (I + D) S (I + D) + 1/2 [g''_i g''_j u_i u_j]_ij
/// The output covariance is symmetrized against rounding. Reduces entrywise
/// to propagate_neuron for diagonal W and Sigma.
inline GaussianMoments propagate_layer(const GaussianMoments& m, const Matrix& w,
                                       const Vector& b, const ActivationSpec& spec) {
    if (!spec.is_goldilocks())
        throw UnsupportedActivationError("propagate_layer: requires a Goldilocks activation");
    m.validate();
    if (w.cols() != m.dim() || b.size() != w.rows())
        throw ShapeError("propagate_layer: dimension mismatch");

    const std::size_t out_dim = w.rows();
    Vector z = multiply(w, m.mean);
    for (std::size_t i = 0; i < out_dim; ++i) z[i] += b[i];

    Vector gv(out_dim), g1(out_dim), g2(out_dim);
    for (std::size_t i = 0; i < out_dim; ++i) {
        GDerivs g = goldilocks_g(spec.hump_kind, spec.mode, z[i]);
        gv[i] = g.value;
        g1[i] = g.d1;
        g2[i] = g.d2;
    }

    Matrix s = multiply(multiply(w, m.cov), transpose(w));  // W Sigma W^T

    GaussianMoments out;
    out.mean.resize(out_dim);
    for (std::size_t i = 0; i < out_dim; ++i)
        out.mean[i] = z[i] + gv[i] + 0.5 * g2[i] * s(i, i);

    out.cov = Matrix(out_dim, out_dim);
    for (std::size_t i = 0; i < out_dim; ++i) {
        for (std::size_t j = 0; j < out_dim; ++j) {
            double affine = (1.0 + g1[i]) * s(i, j) * (1.0 + g1[j]);
            double curvature = 0.5 * g2[i] * s(i, i) * g2[j] * s(j, j);
            out.cov(i, j) = affine + curvature;
        }
    }
    for (std::size_t i = 0; i < out_dim; ++i)
        for (std::size_t j = i + 1; j < out_dim; ++j) {
            double sym = 0.5 * (out.cov(i, j) + out.cov(j, i));
            out.cov(i, j) = sym;
            out.cov(j, i) = sym;
        }
    return out;
}

/// Empirical moments of Y = A(WX + b) with per-entry standard errors:
///   mean_se[i]  = sqrt(C_ii / n)
///   cov_se(i,j) = sqrt((m4_ij - C_ij^2) / n),  m4_ij = mean[(Yi-m_i)^2 (Yj-m_j)^2]
struct McResult {
    GaussianMoments estimate;
    Vector mean_se;
    Matrix cov_se;
    std::size_t samples;
};

/// Monte-Carlo oracle: samples X ~ N(mu, Sigma) through a Cholesky factor,
/// pushes each draw through the full activation A(Wx + b), and returns
/// sample mean/covariance with standard errors. Deterministic given seed.
inline McResult mc_oracle(const GaussianMoments& m, const Matrix& w, const Vector& b,
                          const ActivationSpec& spec, std::size_t n, std::uint64_t seed) {
    if (n < 10000) throw InvalidInputError("mc_oracle: need at least 10^4 samples");
    if (m.cov.rows() != m.dim() || m.cov.cols() != m.dim())
        throw ShapeError("mc_oracle: covariance shape does not match mean");
    if (!finite(m.mean) || !m.cov.finite())
        throw InvalidInputError("mc_oracle: non-finite moments");
    if (w.cols() != m.dim() || b.size() != w.rows())
        throw ShapeError("mc_oracle: dimension mismatch");
    const std::size_t in_dim = m.dim(), out_dim = w.rows();
    Matrix chol = cholesky_psd(m.cov);  // indefinite input raises DecompositionError

    Rng rng = Rng::stream(seed, "mc");

    // Pass 1 storage: draws are cheap to keep at desk scale, and storing them
    // gives exact centered fourth moments for the covariance standard errors.
    std::vector<double> ys(n * out_dim);
    Vector x(in_dim), zvec(in_dim);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t i = 0; i < in_dim; ++i) zvec[i] = rng.gaussian();
        for (std::size_t i = 0; i < in_dim; ++i) {
            double acc = m.mean[i];
            const double* lrow = chol.row_data(i);
            for (std::size_t k = 0; k <= i; ++k) acc += lrow[k] * zvec[k];
            x[i] = acc;
        }
        double* yrow = ys.data() + s * out_dim;
        for (std::size_t i = 0; i < out_dim; ++i) {
            const double* wrow = w.row_data(i);
            double acc = b[i];
            for (std::size_t j = 0; j < in_dim; ++j) acc += wrow[j] * x[j];
            yrow[i] = activate(spec, acc).value;
        }
    }

    McResult out;
    out.samples = n;
    out.estimate.mean.assign(out_dim, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        const double* yrow = ys.data() + s * out_dim;
        for (std::size_t i = 0; i < out_dim; ++i) out.estimate.mean[i] += yrow[i];
    }
    for (double& v : out.estimate.mean) v /= static_cast<double>(n);

    Matrix c2(out_dim, out_dim), c4(out_dim, out_dim);
    Vector d(out_dim);
    for (std::size_t s = 0; s < n; ++s) {
        const double* yrow = ys.data() + s * out_dim;
        for (std::size_t i = 0; i < out_dim; ++i) d[i] = yrow[i] - out.estimate.mean[i];
        for (std::size_t i = 0; i < out_dim; ++i)
            for (std::size_t j = 0; j < out_dim; ++j) {
                c2(i, j) += d[i] * d[j];
                c4(i, j) += d[i] * d[i] * d[j] * d[j];
            }
    }
    out.estimate.cov = Matrix(out_dim, out_dim);
    out.cov_se = Matrix(out_dim, out_dim);
    out.mean_se.resize(out_dim);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < out_dim; ++i)
        for (std::size_t j = 0; j < out_dim; ++j) {
            double cij = c2(i, j) * inv_n;
            out.estimate.cov(i, j) = cij;
            double m4 = c4(i, j) * inv_n;
            double var_of_cov = std::max(m4 - cij * cij, 0.0) * inv_n;
            out.cov_se(i, j) = std::sqrt(var_of_cov);
        }
    for (std::size_t i = 0; i < out_dim; ++i)
        out.mean_se[i] = std::sqrt(out.estimate.cov(i, i) * inv_n);
    return out;
}

}  // namespace goldilocks
