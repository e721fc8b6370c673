#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "loadcast/common.hpp"

namespace loadcast::nn {

/// Dense row-major rows x cols matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> v;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), v(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return v[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }

    double* row(std::size_t i) { return v.data() + i * cols; }
    const double* row(std::size_t i) const { return v.data() + i * cols; }

    std::size_t size() const { return v.size(); }
    bool empty() const { return v.empty(); }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

    void fill(double x) { std::fill(v.begin(), v.end(), x); }

    bool all_finite() const {
        for (double x : v)
            if (!is_finite(x)) return false;
        return true;
    }
};

/// Dense row-major batch x steps x feats tensor of doubles.
struct Tensor3 {
    std::size_t batch = 0;
    std::size_t steps = 0;
    std::size_t feats = 0;
    std::vector<double> v;

    Tensor3() = default;
    Tensor3(std::size_t b, std::size_t t, std::size_t f, double fill = 0.0)
        : batch(b), steps(t), feats(f), v(b * t * f, fill) {}

    double& operator()(std::size_t b, std::size_t t, std::size_t f) {
        return v[(b * steps + t) * feats + f];
    }
    double operator()(std::size_t b, std::size_t t, std::size_t f) const {
        return v[(b * steps + t) * feats + f];
    }

    double* position(std::size_t b, std::size_t t) {
        return v.data() + (b * steps + t) * feats;
    }
    const double* position(std::size_t b, std::size_t t) const {
        return v.data() + (b * steps + t) * feats;
    }

    std::size_t size() const { return v.size(); }

    bool all_finite() const {
        for (double x : v)
            if (!is_finite(x)) return false;
        return true;
    }

    /// View the (batch*steps) x feats layout as a matrix (copy).
    Matrix as_matrix() const {
        Matrix m(batch * steps, feats);
        m.v = v;
        return m;
    }

    /// Flatten each batch item to a row: batch x (steps*feats). Same storage order.
    Matrix flatten() const {
        Matrix m(batch, steps * feats);
        m.v = v;
        return m;
    }

    static Tensor3 from_matrix(const Matrix& m, std::size_t b, std::size_t t, std::size_t f) {
        if (m.v.size() != b * t * f)
            throw DimensionError("Tensor3::from_matrix: element count mismatch");
        Tensor3 out(b, t, f);
        out.v = m.v;
        return out;
    }
};

inline void require_shape(const Matrix& m, std::size_t rows, std::size_t cols,
                          const std::string& what) {
    if (m.rows != rows || m.cols != cols)
        throw DimensionError(what + ": expected " + std::to_string(rows) + "x" +
                             std::to_string(cols) + ", got " + std::to_string(m.rows) +
                             "x" + std::to_string(m.cols));
}

/// out = a * b. Plain ikj loop; fast enough at desk scale.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw DimensionError("matmul: inner dimensions differ");
    Matrix out(a.rows, b.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.row(i);
        double* orow = out.row(i);
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = b.row(k);
            for (std::size_t j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

/// out = a^T * b (a is k x m, b is k x n, out is m x n).
inline Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows) throw DimensionError("matmul_tn: row counts differ");
    Matrix out(a.cols, b.cols, 0.0);
    for (std::size_t k = 0; k < a.rows; ++k) {
        const double* arow = a.row(k);
        const double* brow = b.row(k);
        for (std::size_t i = 0; i < a.cols; ++i) {
            const double aki = arow[i];
            if (aki == 0.0) continue;
            double* orow = out.row(i);
            for (std::size_t j = 0; j < b.cols; ++j) orow[j] += aki * brow[j];
        }
    }
    return out;
}

/// out = a * b^T (a is m x k, b is n x k, out is m x n).
inline Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols) throw DimensionError("matmul_nt: column counts differ");
    Matrix out(a.rows, b.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.row(i);
        double* orow = out.row(i);
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* brow = b.row(j);
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            orow[j] = acc;
        }
    }
    return out;
}

}  // namespace loadcast::nn
