#pragma once

#include <cstddef>
#include <vector>

#include "dualaqd/common.hpp"

namespace dualaqd {

// Dense row-major matrix of doubles. Only the handful of operations the
// network engine needs; sizes here are tiny (batches x 100-unit layers).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
    const double* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// out = a * b
inline void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
    if (a.cols() != b.rows())
        throw ContractViolation("matmul: inner dimensions differ");
    out = Matrix(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* arow = a.row_ptr(i);
        double* orow = out.row_ptr(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = b.row_ptr(k);
            for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
        }
    }
}

// out = a^T * b  (a: n x r, b: n x c, out: r x c)
inline void matmul_at_b(const Matrix& a, const Matrix& b, Matrix& out) {
    if (a.rows() != b.rows())
        throw ContractViolation("matmul_at_b: row counts differ");
    out = Matrix(a.cols(), b.cols());
    for (std::size_t n = 0; n < a.rows(); ++n) {
        const double* arow = a.row_ptr(n);
        const double* brow = b.row_ptr(n);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double ani = arow[i];
            if (ani == 0.0) continue;
            double* orow = out.row_ptr(i);
            for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += ani * brow[j];
        }
    }
}

// out = a * b^T  (a: n x c, b: m x c, out: n x m)
inline void matmul_a_bt(const Matrix& a, const Matrix& b, Matrix& out) {
    if (a.cols() != b.cols())
        throw ContractViolation("matmul_a_bt: column counts differ");
    out = Matrix(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* arow = a.row_ptr(i);
        double* orow = out.row_ptr(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const double* brow = b.row_ptr(j);
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += arow[k] * brow[k];
            orow[j] = acc;
        }
    }
}

}  // namespace dualaqd
