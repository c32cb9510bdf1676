#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "goldilocks/errors.hpp"

namespace goldilocks {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. Sized for desk-scale problems; no
/// attempt at sparsity or blocking.
class Matrix {
public:
    Matrix() = default;

    explicit Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
        std::size_t r = 0;
        for (const auto& row : rows) {
            if (row.size() != m.cols_) throw ShapeError("ragged initializer rows");
            std::size_t c = 0;
            for (double v : row) m(r, c++) = v;
            ++r;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return a_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    double* row_data(std::size_t r) { return a_.data() + r * cols_; }
    const double* row_data(std::size_t r) const { return a_.data() + r * cols_; }

    std::vector<double>& data() { return a_; }
    const std::vector<double>& data() const { return a_; }

    Vector row(std::size_t r) const {
        return Vector(row_data(r), row_data(r) + cols_);
    }

    void set_row(std::size_t r, const Vector& v) {
        if (v.size() != cols_) throw ShapeError("set_row: wrong length");
        std::copy(v.begin(), v.end(), row_data(r));
    }

    bool finite() const {
        for (double v : a_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    void fill(double v) { std::fill(a_.begin(), a_.end(), v); }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

inline bool finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("multiply: inner dimensions differ");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* brow = b.row_data(k);
            double* orow = out.row_data(i);
            for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

inline Vector multiply(const Matrix& a, const Vector& x) {
    if (a.cols() != x.size()) throw ShapeError("multiply: matrix/vector dimensions differ");
    Vector out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* row = a.row_data(i);
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
        out[i] = s;
    }
    return out;
}

inline Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

inline Matrix add(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("add: shapes differ");
    Matrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
    return out;
}

inline Matrix subtract(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("subtract: shapes differ");
    Matrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
    return out;
}

inline Matrix scale(const Matrix& a, double s) {
    Matrix out = a;
    for (double& v : out.data()) v *= s;
    return out;
}

inline Vector add(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw ShapeError("add: vector lengths differ");
    Vector out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

inline Vector subtract(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw ShapeError("subtract: vector lengths differ");
    Vector out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

inline Vector scale(const Vector& a, double s) {
    Vector out = a;
    for (double& v : out) v *= s;
    return out;
}

inline double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw ShapeError("dot: vector lengths differ");
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

inline double max_abs(const Vector& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

inline Matrix outer(const Vector& u, const Vector& v) {
    Matrix out(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out(i, j) = u[i] * v[j];
    return out;
}

inline double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

/// Thin singular value decomposition a = u * diag(sigma) * v^T with sigma
/// sorted descending. Columns of u/v for zero singular values are left zero.
struct Svd {
    Matrix u;      // rows(a) x k
    Vector sigma;  // k = min(rows, cols)
    Matrix v;      // cols(a) x k
};

/// One-sided Jacobi SVD. Orthogonalizes the columns of the (possibly
/// transposed) input by plane rotations; robust and plenty accurate at the
/// matrix sizes this library deals with.
inline Svd svd(const Matrix& m) {
    if (!m.finite()) throw InvalidInputError("svd: non-finite entries");
    if (m.rows() == 0 || m.cols() == 0) throw ShapeError("svd: empty matrix");

    const bool transposed = m.rows() < m.cols();
    Matrix w = transposed ? transpose(m) : m;  // M x N with M >= N
    const std::size_t big = w.rows(), n = w.cols();

    Matrix v = Matrix::identity(n);

    auto col_dot = [&](std::size_t p, std::size_t q) {
        double s = 0.0;
        for (std::size_t i = 0; i < big; ++i) s += w(i, p) * w(i, q);
        return s;
    };

    const double eps = 1e-15;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = col_dot(p, p);
                double aqq = col_dot(q, q);
                double apq = col_dot(p, q);
                if (std::abs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                double zeta = (aqq - app) / (2.0 * apq);
                double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (std::size_t i = 0; i < big; ++i) {
                    double wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    Vector sigma(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < big; ++i) s += w(i, j) * w(i, j);
        sigma[j] = std::sqrt(s);
    }

    // Sort columns by descending singular value.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

    Matrix u_sorted(big, n), v_sorted(n, n);
    Vector s_sorted(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t src = order[j];
        s_sorted[j] = sigma[src];
        if (sigma[src] > 0.0) {
            for (std::size_t i = 0; i < big; ++i) u_sorted(i, j) = w(i, src) / sigma[src];
        }
        for (std::size_t i = 0; i < n; ++i) v_sorted(i, j) = v(i, src);
    }

    Svd out;
    if (transposed) {
        out.u = std::move(v_sorted);
        out.v = std::move(u_sorted);
    } else {
        out.u = std::move(u_sorted);
        out.v = std::move(v_sorted);
    }
    out.sigma = std::move(s_sorted);
    return out;
}

/// Moore-Penrose pseudoinverse by SVD truncation: singular values at or
/// below tol * sigma_max are dropped. For square full-rank input this is the
/// ordinary inverse.
inline Matrix pseudoinverse(const Matrix& m, double tol = 1e-12) {
    if (!m.finite()) throw InvalidInputError("pseudoinverse: non-finite entries");
    if (!(tol > 0.0 && tol < 1.0)) throw InvalidInputError("pseudoinverse: tol must be in (0,1)");
    Svd d = svd(m);
    const double cut = tol * (d.sigma.empty() ? 0.0 : d.sigma[0]);
    Matrix out(m.cols(), m.rows());
    for (std::size_t k = 0; k < d.sigma.size(); ++k) {
        if (!(d.sigma[k] > cut)) continue;
        double inv = 1.0 / d.sigma[k];
        for (std::size_t i = 0; i < m.cols(); ++i) {
            double vik = d.v(i, k) * inv;
            if (vik == 0.0) continue;
            for (std::size_t j = 0; j < m.rows(); ++j) out(i, j) += vik * d.u(j, k);
        }
    }
    return out;
}

/// Number of singular values above tol * sigma_max. The zero matrix has
/// rank 0.
inline std::size_t numerical_rank(const Matrix& m, double tol = 1e-12) {
    if (!m.finite()) throw InvalidInputError("numerical_rank: non-finite entries");
    Svd d = svd(m);
    if (d.sigma.empty() || d.sigma[0] == 0.0) return 0;
    const double cut = tol * d.sigma[0];
    std::size_t r = 0;
    for (double s : d.sigma)
        if (s > cut) ++r;
    return r;
}

/// Eigenvalues of a symmetric matrix (classic Jacobi), sorted descending.
inline Vector sym_eigenvalues(Matrix a) {
    if (a.rows() != a.cols()) throw ShapeError("sym_eigenvalues: matrix not square");
    if (!a.finite()) throw InvalidInputError("sym_eigenvalues: non-finite entries");
    const std::size_t n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (std::size_t i = 0; i < n; ++i) {
                    double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
            }
        }
    }
    Vector ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    return ev;
}

/// Lower-triangular Cholesky factor of a symmetric positive semidefinite
/// matrix. Degenerate directions (pivots within tolerance of zero) produce
/// zero columns; genuinely negative pivots raise DecompositionError.
inline Matrix cholesky_psd(const Matrix& a, double rel_tol = 1e-10) {
    if (a.rows() != a.cols()) throw ShapeError("cholesky_psd: matrix not square");
    const std::size_t n = a.rows();
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
    const double floor = rel_tol * std::max(scale, 1e-300);
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d < -floor) throw DecompositionError("cholesky_psd: matrix not positive semidefinite");
        if (d <= floor) {
            l(j, j) = 0.0;
            continue;
        }
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

}  // namespace goldilocks
