#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "streamfact/errors.hpp"

namespace streamfact {

// Dense matrix of doubles, row-major storage. Constructors taking entry data
// reject NaN/Inf; in-place mutation through operator() is the builder path
// used by the kernels in linalg.hpp.
class DenseMatrix {
public:
    DenseMatrix() = default;

    // Zero matrix of the given shape.
    DenseMatrix(std::size_t rows, std::size_t cols);

    // Takes ownership of row-major entries; size and finiteness are checked.
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    // Literal syntax for tests and small fixtures: DenseMatrix{{1,2},{3,4}}.
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix scaled_identity(std::size_t n, double value);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    double operator()(std::size_t i, std::size_t j) const noexcept {
        return entries_[i * cols_ + j];
    }
    double& operator()(std::size_t i, std::size_t j) noexcept {
        return entries_[i * cols_ + j];
    }

    const std::vector<double>& entries() const noexcept { return entries_; }
    double* data() noexcept { return entries_.data(); }
    const double* data() const noexcept { return entries_.data(); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

// Dense vector of doubles. Same finiteness rules as DenseMatrix.
class DenseVector {
public:
    DenseVector() = default;

    explicit DenseVector(std::size_t len);  // zeros
    explicit DenseVector(std::vector<double> entries);
    DenseVector(std::initializer_list<double> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    double operator[](std::size_t i) const noexcept { return entries_[i]; }
    double& operator[](std::size_t i) noexcept { return entries_[i]; }

    const std::vector<double>& entries() const noexcept { return entries_; }
    double* data() noexcept { return entries_.data(); }
    const double* data() const noexcept { return entries_.data(); }

private:
    std::vector<double> entries_;
};

}  // namespace streamfact
