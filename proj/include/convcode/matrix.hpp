// Dense row-major matrices over GF(2^w) with the handful of operations the
// code machinery needs: product, inverse, rank, row/column selection.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "convcode/galois.hpp"

namespace convcode {

struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct singular_matrix_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Matrix {
public:
    Matrix(Field field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<felem> data)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw dimension_error("matrix data length must be rows * cols");
        }
    }

    static Matrix identity(const Field& field, std::size_t n) {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m.at(i, i) = 1;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Field& field() const { return field_; }

    felem& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    felem at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const felem> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    const std::vector<felem>& data() const { return data_; }

    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && field_ == other.field_ &&
               data_ == other.data_;
    }
    bool operator!=(const Matrix& other) const { return !(*this == other); }

    Matrix operator*(const Matrix& rhs) const {
        if (cols_ != rhs.rows_) {
            throw dimension_error("matrix product dimension mismatch");
        }
        if (field_ != rhs.field_) {
            throw dimension_error("matrix product requires a common field");
        }
        Matrix out(field_, rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t l = 0; l < cols_; ++l) {
                const felem a = at(i, l);
                if (a == 0) {
                    continue;
                }
                const felem* src = rhs.data_.data() + l * rhs.cols_;
                felem* dst = out.data_.data() + i * rhs.cols_;
                for (std::size_t j = 0; j < rhs.cols_; ++j) {
                    dst[j] ^= field_.mul(a, src[j]);
                }
            }
        }
        return out;
    }

    Matrix operator+(const Matrix& rhs) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
            throw dimension_error("matrix sum dimension mismatch");
        }
        Matrix out = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) {
            out.data_[i] ^= rhs.data_[i];
        }
        return out;
    }

    // Gauss-Jordan inverse; throws singular_matrix_error when rank deficient.
    Matrix inverse() const {
        if (rows_ != cols_) {
            throw dimension_error("only square matrices can be inverted");
        }
        Matrix work = *this;
        Matrix inv = identity(field_, rows_);
        for (std::size_t col = 0; col < cols_; ++col) {
            std::size_t pivot = col;
            while (pivot < rows_ && work.at(pivot, col) == 0) {
                ++pivot;
            }
            if (pivot == rows_) {
                throw singular_matrix_error("matrix is singular");
            }
            if (pivot != col) {
                work.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            const felem scale = field_.inv(work.at(col, col));
            work.scale_row(col, scale);
            inv.scale_row(col, scale);
            for (std::size_t r = 0; r < rows_; ++r) {
                if (r == col || work.at(r, col) == 0) {
                    continue;
                }
                const felem factor = work.at(r, col);
                work.axpy_row(r, col, factor);
                inv.axpy_row(r, col, factor);
            }
        }
        return inv;
    }

    std::size_t rank() const {
        Matrix work = *this;
        std::size_t rank = 0;
        for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
            std::size_t pivot = rank;
            while (pivot < rows_ && work.at(pivot, col) == 0) {
                ++pivot;
            }
            if (pivot == rows_) {
                continue;
            }
            work.swap_rows(pivot, rank);
            const felem scale = field_.inv(work.at(rank, col));
            work.scale_row(rank, scale);
            for (std::size_t r = rank + 1; r < rows_; ++r) {
                if (work.at(r, col) != 0) {
                    work.axpy_row(r, rank, work.at(r, col));
                }
            }
            ++rank;
        }
        return rank;
    }

    bool invertible() const { return rows_ == cols_ && rank() == rows_; }

    bool is_identity() const {
        if (rows_ != cols_) {
            return false;
        }
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                if (at(r, c) != (r == c ? 1 : 0)) {
                    return false;
                }
            }
        }
        return true;
    }

    Matrix select(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const {
        Matrix out(field_, row_idx.size(), col_idx.size());
        for (std::size_t i = 0; i < row_idx.size(); ++i) {
            for (std::size_t j = 0; j < col_idx.size(); ++j) {
                out.at(i, j) = at(row_idx[i], col_idx[j]);
            }
        }
        return out;
    }

private:
    void swap_rows(std::size_t a, std::size_t b) {
        for (std::size_t c = 0; c < cols_; ++c) {
            std::swap(at(a, c), at(b, c));
        }
    }
    void scale_row(std::size_t r, felem s) {
        for (std::size_t c = 0; c < cols_; ++c) {
            at(r, c) = field_.mul(at(r, c), s);
        }
    }
    // row r -= factor * row src
    void axpy_row(std::size_t r, std::size_t src, felem factor) {
        for (std::size_t c = 0; c < cols_; ++c) {
            at(r, c) ^= field_.mul(factor, at(src, c));
        }
    }

    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<felem> data_;
};

// Row vector times matrix, the m -> mG encoding primitive.
inline std::vector<felem> vec_mat_mul(const Field& field, std::span<const felem> v, const Matrix& m) {
    if (v.size() != m.rows()) {
        throw dimension_error("vector length must match matrix rows");
    }
    std::vector<felem> out(m.cols(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const felem a = v[r];
        if (a == 0) {
            continue;
        }
        std::span<const felem> row = m.row(r);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out[c] ^= field.mul(a, row[c]);
        }
    }
    return out;
}

// Inner product of two equal-length vectors.
inline felem dot(const Field& field, std::span<const felem> a, std::span<const felem> b) {
    if (a.size() != b.size()) {
        throw dimension_error("dot product length mismatch");
    }
    felem acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc ^= field.mul(a[i], b[i]);
    }
    return acc;
}

}  // namespace convcode
